#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace polaron {

// N localization cubes of common side length, given by their centers.
struct BoxConfiguration {
  std::vector<std::array<double, 3>> centers;
  double side = 1.0;

  int size() const { return static_cast<int>(centers.size()); }
};

BoxConfiguration make_boxes(std::vector<std::array<double, 3>> centers, double side);

// Euclidean distance between cubes i and j (0 when they overlap or touch).
double box_distance(int i, int j, const BoxConfiguration& config);

// Disjoint groups covering all box indices: two boxes share a group iff
// they are chained by gaps strictly below the threshold.  Every output
// satisfies: inter-group box distance >= threshold, and each group fits in
// a cube of side <= |group| * (side + threshold).
struct ClusterPartition {
  double threshold = 0.0;
  std::vector<std::vector<int>> groups;

  std::vector<int> sizes() const;
  int cluster_of(int index) const;
};

ClusterPartition partition(const BoxConfiguration& config, double threshold);

// Side of the smallest axis-aligned cube containing every box of the group.
double enclosing_cube_side(const std::vector<int>& group, const BoxConfiguration& config);

// x,y,z rows; blank lines and lines starting with '#' are skipped.
BoxConfiguration read_boxes_csv(std::istream& in, double side);
BoxConfiguration read_boxes_csv(const std::string& path, double side);

std::string partition_to_json(const ClusterPartition& partition);

}  // namespace polaron
