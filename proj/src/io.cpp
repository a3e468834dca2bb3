#include "polaron/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>

#include "polaron/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte swapping is not implemented");

namespace polaron {

namespace {

constexpr std::uint32_t kRadialTag = 1;
constexpr std::uint32_t kCartesianTag = 2;

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated snapshot");
  return v;
}

void put_doubles(std::ostream& out, const std::vector<double>& v) {
  put<std::uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::istream& in) {
  const auto n = get<std::uint64_t>(in);
  if (n > (1ull << 32)) throw IoError("snapshot length out of range");
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw IoError("truncated snapshot");
  return v;
}

template <class Wf>
void write_to_file(const std::string& path, const Wf& psi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_snapshot(out, psi);
}

}  // namespace

void write_snapshot(std::ostream& out, const RadialWaveFunction& psi) {
  put(out, kRadialTag);
  put_doubles(out, psi.nodes);
  put_doubles(out, psi.values);
}

void write_snapshot(std::ostream& out, const CartesianWaveFunction& psi) {
  put(out, kCartesianTag);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(psi.particles));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(psi.points));
  put(out, psi.extent);
  put_doubles(out, psi.values);
}

void write_snapshot(const std::string& path, const RadialWaveFunction& psi) {
  write_to_file(path, psi);
}
void write_snapshot(const std::string& path, const CartesianWaveFunction& psi) {
  write_to_file(path, psi);
}

GridKind peek_snapshot_kind(std::istream& in) {
  const auto tag = get<std::uint32_t>(in);
  in.seekg(-static_cast<std::streamoff>(sizeof(std::uint32_t)), std::ios::cur);
  if (tag == kRadialTag) return GridKind::Radial;
  if (tag == kCartesianTag) return GridKind::Cartesian;
  throw IoError("unknown snapshot tag");
}

RadialWaveFunction read_radial_snapshot(std::istream& in) {
  if (get<std::uint32_t>(in) != kRadialTag) throw IoError("not a radial snapshot");
  auto nodes = get_doubles(in);
  auto values = get_doubles(in);
  return make_radial(std::move(nodes), std::move(values));
}

CartesianWaveFunction read_cartesian_snapshot(std::istream& in) {
  if (get<std::uint32_t>(in) != kCartesianTag) throw IoError("not a cartesian snapshot");
  const auto particles = get<std::uint32_t>(in);
  const auto points = get<std::uint64_t>(in);
  const auto extent = get<double>(in);
  auto psi = make_cartesian(extent, static_cast<int>(points), static_cast<int>(particles));
  auto values = get_doubles(in);
  if (values.size() != psi.values.size()) throw IoError("snapshot value count mismatch");
  psi.values = std::move(values);
  return psi;
}

RadialWaveFunction read_radial_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_radial_snapshot(in);
}

CartesianWaveFunction read_cartesian_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_cartesian_snapshot(in);
}

void write_csv(std::ostream& out, const RadialWaveFunction& psi) {
  out << "node,value\n";
  out.precision(17);
  for (int k = 0; k < psi.size(); ++k) out << psi.nodes[k] << ',' << psi.values[k] << '\n';
}

void write_csv(std::ostream& out, const CartesianWaveFunction& psi) {
  if (psi.particles != 1) throw IoError("csv export supports one-particle grids only");
  out << "x,y,z,value\n";
  out.precision(17);
  const int n = psi.points;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx)
        out << psi.coordinate(i) << ',' << psi.coordinate(j) << ',' << psi.coordinate(k) << ','
            << psi.values[idx] << '\n';
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& text) { return fnv1a64(text.data(), text.size()); }

}  // namespace polaron
