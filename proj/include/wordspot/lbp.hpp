#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordspot/image.hpp"

namespace wordspot::lbp {

enum class Mode : std::uint8_t {
  /// The 8 grid neighbors of a 3x3 block; requires points == 8 and radius == 1.
  Block3x3 = 0,
  /// points samples on a circle of the given radius, bilinearly interpolated.
  Circular = 1,
};

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct Params {
  int points = 8;
  double radius = 1.0;
  /// A neighbor sets its bit when (neighbor - center) >= threshold.
  double threshold = 0.0;
  Mode mode = Mode::Block3x3;

  /// Pixels excluded at each border, ceil(radius).
  int margin() const;
  /// Number of labels, points + 2 (uniform 0..points plus the nonuniform bucket).
  int label_count() const { return points + 2; }
  int nonuniform_label() const { return points + 1; }

  /// Throws PreconditionError on an invalid combination.
  void validate() const;

  friend bool operator==(const Params&, const Params&) = default;
};

/// Largest supported neighbor count; labels must fit in a byte and codes in 32 bits.
inline constexpr int kMaxPoints = 24;

/// Per-pixel uniform label raster. Pixels within margin of a border are invalid.
class LabelMap {
 public:
  LabelMap(int width, int height, int margin, int points, std::vector<std::uint8_t> labels);

  int width() const { return width_; }
  int height() const { return height_; }
  int margin() const { return margin_; }
  int points() const { return points_; }

  bool valid(int x, int y) const {
    return x >= margin_ && y >= margin_ && x < width_ - margin_ && y < height_ - margin_;
  }
  /// Label at (x, y); meaningful only where valid(x, y).
  std::uint8_t at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)];
  }
  std::span<const std::uint8_t> labels() const { return labels_; }

 private:
  int width_;
  int height_;
  int margin_;
  int points_;
  std::vector<std::uint8_t> labels_;
};

/// Raw code sum_p s(g_p - g_c) * 2^p, neighbors counter-clockwise from east.
std::uint32_t lbp_code(const GrayImage& img, int x, int y, const Params& params);

/// Circular count of bit transitions in the low `points` bits of code.
int uniformity(std::uint32_t code, int points);

/// popcount(code) when uniformity(code) <= 2, otherwise points + 1.
int uniform_label(std::uint32_t code, int points);

/// table[c] == uniform_label(c, 8) for every 8-bit code.
const std::array<std::uint8_t, 256>& uniform_lut8();
std::array<std::uint8_t, 256> build_uniform_lut();

/// Dense uniform labels; throws DimensionError when the image is smaller than 2*margin+1.
LabelMap lbp_transform(const GrayImage& img, const Params& params);

}  // namespace wordspot::lbp
