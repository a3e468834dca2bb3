#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "polaron/grid.hpp"

namespace polaron {

// Flat little-endian snapshot: u32 kind tag, descriptor (node list for
// radial grids, points/extent/particles for cartesian), then the values
// as 64-bit floats.  Weights are rederived on load.
void write_snapshot(std::ostream& out, const RadialWaveFunction& psi);
void write_snapshot(std::ostream& out, const CartesianWaveFunction& psi);
void write_snapshot(const std::string& path, const RadialWaveFunction& psi);
void write_snapshot(const std::string& path, const CartesianWaveFunction& psi);

GridKind peek_snapshot_kind(std::istream& in);
RadialWaveFunction read_radial_snapshot(std::istream& in);
CartesianWaveFunction read_cartesian_snapshot(std::istream& in);
RadialWaveFunction read_radial_snapshot(const std::string& path);
CartesianWaveFunction read_cartesian_snapshot(const std::string& path);

// node,value rows (radial) or x,y,z,value rows (one-particle cartesian).
void write_csv(std::ostream& out, const RadialWaveFunction& psi);
void write_csv(std::ostream& out, const CartesianWaveFunction& psi);

std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t seed = 14695981039346656037ull);
std::uint64_t fnv1a64(const std::string& text);

}  // namespace polaron
