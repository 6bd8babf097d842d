#include "wordspot/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wordspot/error.hpp"

namespace wordspot::spatial {

namespace {

struct AxisSplit {
  int at;
  bool degenerate;
};

AxisSplit split_axis(double center, int lo, int hi, int min_extent) {
  if (hi - lo < 2 * min_extent) return {lo + (hi - lo) / 2, true};
  const int rounded = static_cast<int>(std::floor(center + 0.5));
  return {std::clamp(rounded, lo + min_extent, hi - min_extent), false};
}

}  // namespace

QuadSplit quad_split(const BinaryImage& bin, const Region& region, int min_extent) {
  check_region(region, bin.width(), bin.height());
  if (min_extent < 1) throw PreconditionError("quad_split min_extent must be >= 1");
  if (region.width() < 2 || region.height() < 2) {
    throw DimensionError("quad_split needs a region of at least 2x2 pixels, got " +
                         std::to_string(region.width()) + "x" + std::to_string(region.height()));
  }
  const CenterOfMass com = center_of_mass(bin, region);
  const AxisSplit sx = split_axis(com.x, region.left, region.right, min_extent);
  const AxisSplit sy = split_axis(com.y, region.top, region.bottom, min_extent);

  QuadSplit out;
  out.split_x = sx.at;
  out.split_y = sy.at;
  out.empty = com.empty;
  out.degenerate = sx.degenerate || sy.degenerate;
  out.quadrants = {Region{region.left, region.top, sx.at, sy.at}, Region{sx.at, region.top, region.right, sy.at},
                   Region{region.left, sy.at, sx.at, region.bottom},
                   Region{sx.at, sy.at, region.right, region.bottom}};
  return out;
}

ZoneSet::ZoneSet(int levels, std::vector<Region> zones, std::vector<bool> empty)
    : levels_(levels), zones_(std::move(zones)), empty_(std::move(empty)) {
  if (zones_.size() != zone_count(levels) || empty_.size() != zones_.size()) {
    throw PreconditionError("zone set size does not match its level count");
  }
}

std::span<const Region> ZoneSet::level(int l) const {
  if (l < 1 || l > levels_) throw PreconditionError("zone level out of range");
  const std::size_t offset = zone_count(l - 1);
  return std::span<const Region>(zones_).subspan(offset, zone_count(l) - offset);
}

std::size_t zone_count(int levels) {
  std::size_t total = 0;
  std::size_t per_level = 1;
  for (int l = 1; l <= levels; ++l) {
    per_level *= 4;
    total += per_level;
  }
  return total;
}

int min_image_side(int levels) { return 1 << levels; }

ZoneSet sample_zones(const BinaryImage& bin, int levels) {
  if (levels < 1 || levels > 6) throw PreconditionError("quad-tree levels must be in [1, 6]");
  const int side = min_image_side(levels);
  if (bin.width() < side || bin.height() < side) {
    throw DimensionError("quad-tree sampling with " + std::to_string(levels) + " levels needs at least " +
                         std::to_string(side) + "x" + std::to_string(side) + " pixels, got " +
                         std::to_string(bin.width()) + "x" + std::to_string(bin.height()));
  }
  std::vector<Region> zones;
  std::vector<bool> empty;
  zones.reserve(zone_count(levels));
  empty.reserve(zone_count(levels));

  std::vector<Region> parents{full_region(bin.width(), bin.height())};
  for (int depth = 0; depth < levels; ++depth) {
    // Children at this depth must stay splittable by every level below them.
    const int min_extent = 1 << (levels - depth - 1);
    std::vector<Region> children;
    children.reserve(parents.size() * 4);
    for (const Region& parent : parents) {
      const QuadSplit split = quad_split(bin, parent, min_extent);
      for (const Region& q : split.quadrants) children.push_back(q);
    }
    for (const Region& child : children) {
      zones.push_back(child);
      empty.push_back(count_in(bin, child) == 0);
    }
    parents = std::move(children);
  }
  return ZoneSet(levels, std::move(zones), std::move(empty));
}

}  // namespace wordspot::spatial
