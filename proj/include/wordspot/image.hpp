#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wordspot {

/// Interleaved 8-bit raster with one or more channels, as decoded from disk.
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;  // row-major, channels interleaved
};

/// Single-channel 8-bit image. 0 is black ink, 255 is white paper.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 255);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }
  std::span<const std::uint8_t> row(int y) const {
    return std::span<const std::uint8_t>(pixels_).subspan(index(0, y), width_);
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Foreground mask. true (stored as 1) marks ink.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return mask_.size(); }

  bool at(int x, int y) const { return mask_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { mask_[index(x, y)] = value ? 1 : 0; }

  std::span<const std::uint8_t> mask() const { return mask_; }

  std::size_t count() const;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> mask_;
};

/// Half-open pixel rectangle [left, right) x [top, bottom).
struct Region {
  int left = 0;
  int top = 0;
  int right = 0;
  int bottom = 0;

  int width() const { return right - left; }
  int height() const { return bottom - top; }
  long long area() const { return static_cast<long long>(width()) * height(); }
  bool contains(int x, int y) const { return x >= left && x < right && y >= top && y < bottom; }
  bool contains(const Region& other) const {
    return other.left >= left && other.right <= right && other.top >= top && other.bottom <= bottom;
  }

  friend bool operator==(const Region&, const Region&) = default;
};

/// Whole-image region.
Region full_region(int width, int height);

/// Throws DimensionError unless the region is non-empty and lies inside a width x height image.
void check_region(const Region& region, int width, int height);

GrayImage to_grayscale(const Raster& image);

/// Median over a (2*radius+1)^2 window with edge replication.
GrayImage median_filter(const GrayImage& img, int radius);

struct OtsuResult {
  std::uint8_t threshold = 0;
  /// Only one intensity is present; no threshold separates two classes.
  bool degenerate = false;
};

/// Otsu's threshold. Foreground is intensity <= threshold. Ties go to the lowest threshold.
OtsuResult otsu_threshold(const GrayImage& img);

BinaryImage binarize(const GrayImage& img, std::uint8_t threshold);

/// Otsu mask with the degenerate case mapped to an empty foreground.
BinaryImage binarize_otsu(const GrayImage& img);

/// Inner boundary: foreground pixels with at least one in-bounds background 4-neighbor.
BinaryImage edge_map(const BinaryImage& bin);

struct CenterOfMass {
  double x = 0.0;
  double y = 0.0;
  /// No foreground in the region; (x, y) is the geometric center.
  bool empty = false;
};

CenterOfMass center_of_mass(const BinaryImage& bin, const Region& region);

/// Number of foreground pixels inside region.
long long count_in(const BinaryImage& bin, const Region& region);

}  // namespace wordspot
