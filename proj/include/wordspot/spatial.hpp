#pragma once

#include <array>
#include <span>
#include <vector>

#include "wordspot/image.hpp"

namespace wordspot::spatial {

/// Children of one split, in NW, NE, SW, SE order.
struct QuadSplit {
  std::array<Region, 4> quadrants;
  int split_x = 0;
  int split_y = 0;
  /// The region had no foreground; the split used its geometric center.
  bool empty = false;
  /// The region was too thin for the requested minimum child extent on some axis.
  bool degenerate = false;
};

/// Splits region at its rounded (half-up) foreground center of mass, clamped so that
/// every child spans at least min_extent columns and rows. When the region is thinner
/// than 2 * min_extent on an axis, that axis is split at its midpoint and flagged.
/// Throws DimensionError for regions thinner than 2 pixels.
QuadSplit quad_split(const BinaryImage& bin, const Region& region, int min_extent = 1);

/// Pooling zones of a center-of-mass quad tree. Level l holds 4^l zones; levels are stored
/// consecutively, each level in parent order with children NW, NE, SW, SE.
class ZoneSet {
 public:
  ZoneSet(int levels, std::vector<Region> zones, std::vector<bool> empty);

  int levels() const { return levels_; }
  std::size_t size() const { return zones_.size(); }
  const Region& operator[](std::size_t i) const { return zones_[i]; }
  std::span<const Region> zones() const { return zones_; }
  /// Zones of one level (1-based).
  std::span<const Region> level(int l) const;
  /// Zone contained no foreground pixel.
  bool empty(std::size_t i) const { return empty_[i]; }

 private:
  int levels_;
  std::vector<Region> zones_;
  std::vector<bool> empty_;
};

/// Total zone count for a tree of the given depth: 4 + 16 + ... + 4^levels.
std::size_t zone_count(int levels);

/// Smallest image side accepted by sample_zones, 2^levels.
int min_image_side(int levels);

/// Recursive center-of-mass quad tree over the whole mask. levels == 2 yields 20 zones.
ZoneSet sample_zones(const BinaryImage& bin, int levels = 2);

}  // namespace wordspot::spatial
