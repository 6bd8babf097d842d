#include "wordspot/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "wordspot/error.hpp"

namespace wordspot {

namespace {

void check_dimensions(int width, int height) {
  if (width < 1 || height < 1) {
    throw DimensionError("image must be at least 1x1, got " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
}

int clamp_coord(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

// Huang's running-histogram median, for windows where sorting gets expensive.
GrayImage median_filter_histogram(const GrayImage& img, int radius) {
  const int w = img.width();
  const int h = img.height();
  const int window = (2 * radius + 1) * (2 * radius + 1);
  const int rank = window / 2;
  GrayImage out(w, h);
  std::array<int, 256> hist{};
  for (int y = 0; y < h; ++y) {
    hist.fill(0);
    for (int dy = -radius; dy <= radius; ++dy) {
      const int yy = clamp_coord(y + dy, h);
      for (int dx = -radius; dx <= radius; ++dx) ++hist[img.at(clamp_coord(dx, w), yy)];
    }
    for (int x = 0;; ++x) {
      int acc = 0;
      int v = 0;
      while ((acc += hist[v]) <= rank) ++v;
      out.at(x, y) = static_cast<std::uint8_t>(v);
      if (x + 1 == w) break;
      const int drop = clamp_coord(x - radius, w);
      const int add = clamp_coord(x + radius + 1, w);
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = clamp_coord(y + dy, h);
        --hist[img.at(drop, yy)];
        ++hist[img.at(add, yy)];
      }
    }
  }
  return out;
}

std::uint8_t med3(std::uint8_t a, std::uint8_t b, std::uint8_t c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

// 3x3 median from sorted columns: the median of the nine values is the median of
// (largest column minimum, median of column medians, smallest column maximum).
GrayImage median_filter_3x3(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  GrayImage out(w, h);
  struct Column {
    std::uint8_t lo, mid, hi;
  };
  std::vector<Column> cols(static_cast<std::size_t>(w) + 2);
  for (int y = 0; y < h; ++y) {
    const auto up = img.row(clamp_coord(y - 1, h));
    const auto here = img.row(y);
    const auto down = img.row(clamp_coord(y + 1, h));
    for (int x = -1; x <= w; ++x) {
      const auto xi = static_cast<std::size_t>(clamp_coord(x, w));
      std::uint8_t a = up[xi];
      std::uint8_t b = here[xi];
      std::uint8_t c = down[xi];
      if (a > b) std::swap(a, b);
      if (b > c) std::swap(b, c);
      if (a > b) std::swap(a, b);
      cols[static_cast<std::size_t>(x + 1)] = {a, b, c};
    }
    for (int x = 0; x < w; ++x) {
      const Column& l = cols[static_cast<std::size_t>(x)];
      const Column& m = cols[static_cast<std::size_t>(x) + 1];
      const Column& r = cols[static_cast<std::size_t>(x) + 2];
      out.at(x, y) = med3(std::max({l.lo, m.lo, r.lo}), med3(l.mid, m.mid, r.mid), std::min({l.hi, m.hi, r.hi}));
    }
  }
  return out;
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  check_dimensions(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dimensions(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionError("pixel buffer holds " + std::to_string(pixels_.size()) + " values, expected " +
                         std::to_string(static_cast<long long>(width) * height));
  }
}

BinaryImage::BinaryImage(int width, int height, bool fill) : width_(width), height_(height) {
  check_dimensions(width, height);
  mask_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0);
}

std::size_t BinaryImage::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

Region full_region(int width, int height) { return Region{0, 0, width, height}; }

void check_region(const Region& region, int width, int height) {
  if (region.left < 0 || region.top < 0 || region.right > width || region.bottom > height ||
      region.left >= region.right || region.top >= region.bottom) {
    throw DimensionError("region [" + std::to_string(region.left) + "," + std::to_string(region.right) +
                         ")x[" + std::to_string(region.top) + "," + std::to_string(region.bottom) +
                         ") is empty or outside a " + std::to_string(width) + "x" +
                         std::to_string(height) + " image");
  }
}

GrayImage to_grayscale(const Raster& image) {
  check_dimensions(image.width, image.height);
  if (image.channels < 1) throw DimensionError("raster has no channels");
  const std::size_t n = static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height);
  const auto channels = static_cast<std::size_t>(image.channels);
  if (image.data.size() != n * channels) throw DimensionError("raster buffer size does not match its shape");

  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* px = image.data.data() + i * channels;
    if (channels < 3) {
      // gray or gray+alpha
      out[i] = px[0];
    } else {
      // Rec. 601 luma in fixed point: 0.299, 0.587, 0.114 scaled by 1000.
      const int luma = 299 * px[0] + 587 * px[1] + 114 * px[2];
      out[i] = static_cast<std::uint8_t>((luma + 500) / 1000);
    }
  }
  return GrayImage(image.width, image.height, std::move(out));
}

GrayImage median_filter(const GrayImage& img, int radius) {
  if (radius < 0) throw PreconditionError("median radius must be >= 0");
  if (img.empty()) throw DimensionError("median_filter on an empty image");
  if (radius == 0) return img;
  if (radius == 1) return median_filter_3x3(img);
  if (radius > 2) return median_filter_histogram(img, radius);

  const int w = img.width();
  const int h = img.height();
  const int side = 2 * radius + 1;
  const int window = side * side;
  GrayImage out(w, h);
  std::array<std::uint8_t, 25> buf{};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int k = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = clamp_coord(y + dy, h);
        for (int dx = -radius; dx <= radius; ++dx) buf[k++] = img.at(clamp_coord(x + dx, w), yy);
      }
      auto mid = buf.begin() + window / 2;
      std::nth_element(buf.begin(), mid, buf.begin() + window);
      out.at(x, y) = *mid;
    }
  }
  return out;
}

OtsuResult otsu_threshold(const GrayImage& img) {
  if (img.empty()) throw DimensionError("otsu_threshold on an empty image");
  std::array<long long, 256> hist{};
  for (std::uint8_t v : img.pixels()) ++hist[v];

  const long long total = static_cast<long long>(img.size());
  long long sum = 0;
  int distinct = 0;
  int only = 0;
  for (int v = 0; v < 256; ++v) {
    sum += v * hist[v];
    if (hist[v] > 0) {
      ++distinct;
      only = v;
    }
  }
  if (distinct <= 1) return OtsuResult{static_cast<std::uint8_t>(only), true};

  // Between-class variance at threshold t is (S0*N - S*n0)^2 / (N^2 * n0 * n1).
  // N^2 is common to every t, so candidates are compared as num^2 / (n0 * n1).
  // Exact 128-bit cross-multiplication keeps tie-breaking reproducible.
  const bool exact = total <= 400000;
  __extension__ typedef unsigned __int128 u128;
  long long n0 = 0;
  long long s0 = 0;
  int best_t = -1;
  u128 best_num2 = 0;
  u128 best_den = 1;
  long double best_score = -1.0L;
  for (int t = 0; t < 255; ++t) {
    n0 += hist[t];
    s0 += t * hist[t];
    const long long n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const long long diff = s0 * total - sum * n0;
    const u128 num = static_cast<u128>(diff < 0 ? -diff : diff);
    const u128 num2 = num * num;
    const u128 den = static_cast<u128>(n0) * static_cast<u128>(n1);
    if (exact) {
      if (best_t < 0 || num2 * best_den > best_num2 * den) {
        best_t = t;
        best_num2 = num2;
        best_den = den;
      }
    } else {
      const long double d = static_cast<long double>(diff);
      const long double score = d * d / (static_cast<long double>(n0) * static_cast<long double>(n1));
      if (best_t < 0 || score > best_score) {
        best_t = t;
        best_score = score;
      }
    }
  }
  return OtsuResult{static_cast<std::uint8_t>(best_t), false};
}

BinaryImage binarize(const GrayImage& img, std::uint8_t threshold) {
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) out.set(x, y, img.at(x, y) <= threshold);
  }
  return out;
}

BinaryImage binarize_otsu(const GrayImage& img) {
  const OtsuResult otsu = otsu_threshold(img);
  if (otsu.degenerate) return BinaryImage(img.width(), img.height(), false);
  return binarize(img, otsu.threshold);
}

BinaryImage edge_map(const BinaryImage& bin) {
  const int w = bin.width();
  const int h = bin.height();
  BinaryImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!bin.at(x, y)) continue;
      const bool edge = (x > 0 && !bin.at(x - 1, y)) || (x + 1 < w && !bin.at(x + 1, y)) ||
                        (y > 0 && !bin.at(x, y - 1)) || (y + 1 < h && !bin.at(x, y + 1));
      if (edge) out.set(x, y, true);
    }
  }
  return out;
}

CenterOfMass center_of_mass(const BinaryImage& bin, const Region& region) {
  check_region(region, bin.width(), bin.height());
  long long n = 0;
  long long sx = 0;
  long long sy = 0;
  for (int y = region.top; y < region.bottom; ++y) {
    for (int x = region.left; x < region.right; ++x) {
      if (bin.at(x, y)) {
        ++n;
        sx += x;
        sy += y;
      }
    }
  }
  if (n == 0) {
    return CenterOfMass{(region.left + region.right - 1) / 2.0, (region.top + region.bottom - 1) / 2.0, true};
  }
  return CenterOfMass{static_cast<double>(sx) / static_cast<double>(n),
                      static_cast<double>(sy) / static_cast<double>(n), false};
}

long long count_in(const BinaryImage& bin, const Region& region) {
  check_region(region, bin.width(), bin.height());
  long long n = 0;
  for (int y = region.top; y < region.bottom; ++y) {
    for (int x = region.left; x < region.right; ++x) n += bin.at(x, y) ? 1 : 0;
  }
  return n;
}

}  // namespace wordspot
