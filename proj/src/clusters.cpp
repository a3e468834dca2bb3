#include "polaron/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nlohmann/json.hpp"
#include "polaron/errors.hpp"

namespace polaron {

BoxConfiguration make_boxes(std::vector<std::array<double, 3>> centers, double side) {
  if (!(side > 0.0)) throw NonpositiveSideError("box side must be positive");
  if (centers.empty()) throw Error("need at least one box");
  return BoxConfiguration{std::move(centers), side};
}

double box_distance(int i, int j, const BoxConfiguration& config) {
  const int n = config.size();
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw IndexOutOfRangeError("box index out of range");
  double sum = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double gap =
        std::max(std::abs(config.centers[i][a] - config.centers[j][a]) - config.side, 0.0);
    sum += gap * gap;
  }
  return std::sqrt(sum);
}

std::vector<int> ClusterPartition::sizes() const {
  std::vector<int> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(static_cast<int>(g.size()));
  return out;
}

int ClusterPartition::cluster_of(int index) const {
  for (std::size_t k = 0; k < groups.size(); ++k)
    for (int i : groups[k])
      if (i == index) return static_cast<int>(k);
  throw IndexOutOfRangeError("index not covered by partition");
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ClusterPartition partition(const BoxConfiguration& config, double threshold) {
  if (!(threshold > 0.0)) throw Error("cluster threshold must be positive");
  const int n = config.size();
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (box_distance(i, j, config) < threshold) uf.unite(i, j);

  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = uf.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }

  ClusterPartition part{threshold, std::move(groups)};
  // separation across groups and bounded extent within each group
  for (std::size_t g1 = 0; g1 < part.groups.size(); ++g1)
    for (std::size_t g2 = g1 + 1; g2 < part.groups.size(); ++g2)
      for (int i : part.groups[g1])
        for (int j : part.groups[g2])
          if (box_distance(i, j, config) < threshold)
            throw Error("internal: partition separation violated");
  for (const auto& g : part.groups) {
    const double bound = static_cast<double>(g.size()) * (config.side + threshold);
    if (enclosing_cube_side(g, config) > bound * (1.0 + 1e-12))
      throw Error("internal: partition extent bound violated");
  }
  return part;
}

double enclosing_cube_side(const std::vector<int>& group, const BoxConfiguration& config) {
  if (group.empty()) throw EmptyGroupError("enclosing cube of an empty group");
  double side = 0.0;
  for (int a = 0; a < 3; ++a) {
    double lo = config.centers[group.front()][a];
    double hi = lo;
    for (int i : group) {
      if (i < 0 || i >= config.size()) throw IndexOutOfRangeError("box index out of range");
      lo = std::min(lo, config.centers[i][a]);
      hi = std::max(hi, config.centers[i][a]);
    }
    side = std::max(side, hi - lo);
  }
  return side + config.side;
}

BoxConfiguration read_boxes_csv(std::istream& in, double side) {
  std::vector<std::array<double, 3>> centers;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::array<double, 3> c{};
    if (!(row >> c[0] >> c[1] >> c[2])) throw IoError("bad box row: " + line);
    centers.push_back(c);
  }
  return make_boxes(std::move(centers), side);
}

BoxConfiguration read_boxes_csv(const std::string& path, double side) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  return read_boxes_csv(in, side);
}

std::string partition_to_json(const ClusterPartition& partition) {
  nlohmann::ordered_json j;
  j["threshold"] = partition.threshold;
  j["groups"] = partition.groups;
  return j.dump(2);
}

}  // namespace polaron
