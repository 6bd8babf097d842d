#include "wordspot/lbp.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "wordspot/error.hpp"

namespace wordspot::lbp {

namespace {

// Counter-clockwise from east with y pointing down.
constexpr std::array<int, 8> kBlockDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kBlockDy = {0, -1, -1, -1, 0, 1, 1, 1};

struct SamplePoint {
  double dx;
  double dy;
};

double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

std::vector<SamplePoint> circle_points(const Params& params) {
  std::vector<SamplePoint> pts(static_cast<std::size_t>(params.points));
  for (int p = 0; p < params.points; ++p) {
    const double angle = 2.0 * std::numbers::pi * p / params.points;
    pts[static_cast<std::size_t>(p)] = {snap(params.radius * std::cos(angle)), snap(-params.radius * std::sin(angle))};
  }
  return pts;
}

double bilinear(const GrayImage& img, double xf, double yf) {
  const int x0 = static_cast<int>(std::floor(xf));
  const int y0 = static_cast<int>(std::floor(yf));
  const double fx = xf - x0;
  const double fy = yf - y0;
  double top = img.at(x0, y0);
  double bottom = 0.0;
  if (fx > 0.0) top += fx * (img.at(x0 + 1, y0) - top);
  if (fy > 0.0) {
    bottom = img.at(x0, y0 + 1);
    if (fx > 0.0) bottom += fx * (img.at(x0 + 1, y0 + 1) - bottom);
    return top + fy * (bottom - top);
  }
  return top;
}

std::uint32_t circular_code(const GrayImage& img, int x, int y, const Params& params,
                            const std::vector<SamplePoint>& pts) {
  const double center = img.at(x, y);
  std::uint32_t code = 0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const double g = bilinear(img, x + pts[p].dx, y + pts[p].dy);
    if (g - center >= params.threshold) code |= 1u << p;
  }
  return code;
}

// Integer differences d satisfy d >= t exactly when d >= ceil(t).
int integer_threshold(double threshold) { return static_cast<int>(std::ceil(threshold)); }

std::uint32_t block_code(const GrayImage& img, int x, int y, int threshold) {
  const int center = img.at(x, y);
  std::uint32_t code = 0;
  for (int p = 0; p < 8; ++p) {
    if (img.at(x + kBlockDx[p], y + kBlockDy[p]) - center >= threshold) code |= 1u << p;
  }
  return code;
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::Block3x3 ? "block3x3" : "circular"; }

Mode parse_mode(std::string_view text) {
  if (text == "block3x3") return Mode::Block3x3;
  if (text == "circular") return Mode::Circular;
  throw PreconditionError("unknown LBP mode '" + std::string(text) + "' (expected block3x3 or circular)");
}

int Params::margin() const { return static_cast<int>(std::ceil(radius - 1e-9)); }

void Params::validate() const {
  if (points < 4 || points > kMaxPoints) {
    throw PreconditionError("LBP points must be in [4, " + std::to_string(kMaxPoints) + "], got " +
                            std::to_string(points));
  }
  if (!(radius >= 1.0) || !std::isfinite(radius)) throw PreconditionError("LBP radius must be >= 1");
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) throw PreconditionError("LBP threshold must be >= 0");
  if (mode == Mode::Block3x3 && (points != 8 || radius != 1.0)) {
    throw PreconditionError("block3x3 mode requires points=8 and radius=1");
  }
}

LabelMap::LabelMap(int width, int height, int margin, int points, std::vector<std::uint8_t> labels)
    : width_(width), height_(height), margin_(margin), points_(points), labels_(std::move(labels)) {
  if (labels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionError("label buffer does not match its shape");
  }
}

std::uint32_t lbp_code(const GrayImage& img, int x, int y, const Params& params) {
  params.validate();
  const int m = params.margin();
  if (x < m || y < m || x >= img.width() - m || y >= img.height() - m) {
    throw PreconditionError("LBP center (" + std::to_string(x) + "," + std::to_string(y) + ") is within " +
                            std::to_string(m) + " pixels of the border");
  }
  if (params.mode == Mode::Block3x3) return block_code(img, x, y, integer_threshold(params.threshold));
  return circular_code(img, x, y, params, circle_points(params));
}

int uniformity(std::uint32_t code, int points) {
  const std::uint32_t mask = points >= 32 ? ~0u : ((1u << points) - 1u);
  code &= mask;
  // Rotate right by one within `points` bits and count differing positions.
  const std::uint32_t rotated = ((code >> 1) | ((code & 1u) << (points - 1))) & mask;
  return std::popcount(code ^ rotated);
}

int uniform_label(std::uint32_t code, int points) {
  if (uniformity(code, points) <= 2) return std::popcount(code);
  return points + 1;
}

std::array<std::uint8_t, 256> build_uniform_lut() {
  std::array<std::uint8_t, 256> table{};
  for (std::uint32_t c = 0; c < 256; ++c) table[c] = static_cast<std::uint8_t>(uniform_label(c, 8));
  return table;
}

const std::array<std::uint8_t, 256>& uniform_lut8() {
  static const std::array<std::uint8_t, 256> table = build_uniform_lut();
  return table;
}

LabelMap lbp_transform(const GrayImage& img, const Params& params) {
  params.validate();
  const int m = params.margin();
  const int w = img.width();
  const int h = img.height();
  if (w < 2 * m + 1 || h < 2 * m + 1) {
    throw DimensionError("LBP needs at least " + std::to_string(2 * m + 1) + "x" + std::to_string(2 * m + 1) +
                         " pixels, got " + std::to_string(w) + "x" + std::to_string(h));
  }
  // Invalid border pixels carry the nonuniform label; histograms skip them via LabelMap::valid.
  std::vector<std::uint8_t> labels(img.size(), static_cast<std::uint8_t>(params.nonuniform_label()));
  auto out = [&](int x, int y) -> std::uint8_t& {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)];
  };

  if (params.mode == Mode::Block3x3) {
    const auto& lut = uniform_lut8();
    const int t = integer_threshold(params.threshold);
    for (int y = 1; y < h - 1; ++y) {
      const std::uint8_t* up = img.row(y - 1).data();
      const std::uint8_t* mid = img.row(y).data();
      const std::uint8_t* down = img.row(y + 1).data();
      for (int x = 1; x < w - 1; ++x) {
        const int c = mid[x] + t;
        const std::uint32_t code = static_cast<std::uint32_t>(mid[x + 1] >= c) |
                                   static_cast<std::uint32_t>(up[x + 1] >= c) << 1 |
                                   static_cast<std::uint32_t>(up[x] >= c) << 2 |
                                   static_cast<std::uint32_t>(up[x - 1] >= c) << 3 |
                                   static_cast<std::uint32_t>(mid[x - 1] >= c) << 4 |
                                   static_cast<std::uint32_t>(down[x - 1] >= c) << 5 |
                                   static_cast<std::uint32_t>(down[x] >= c) << 6 |
                                   static_cast<std::uint32_t>(down[x + 1] >= c) << 7;
        out(x, y) = lut[code];
      }
    }
  } else {
    const std::vector<SamplePoint> pts = circle_points(params);
    for (int y = m; y < h - m; ++y) {
      for (int x = m; x < w - m; ++x) {
        out(x, y) = static_cast<std::uint8_t>(uniform_label(circular_code(img, x, y, params, pts), params.points));
      }
    }
  }
  return LabelMap(w, h, m, params.points, std::move(labels));
}

}  // namespace wordspot::lbp
