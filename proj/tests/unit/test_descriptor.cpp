#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "reference.hpp"
#include "synthetic.hpp"
#include "wordspot/descriptor.hpp"
#include "wordspot/error.hpp"

using namespace wordspot;

TEST_CASE("zone_histogram") {
  const lbp::LabelMap flat = lbp::lbp_transform(GrayImage(8, 8, 100), lbp::Params{});
  const Histogram h = zone_histogram(flat, full_region(8, 8));
  CHECK(h.size() == 9);
  CHECK(h[8] == 36);  // 6x6 valid pixels
  CHECK(std::accumulate(h.begin(), h.end(), 0u) == 36);

  const lbp::LabelMap nonuniform(4, 4, 0, 8, std::vector<std::uint8_t>(16, 9));
  const Histogram z = zone_histogram(nonuniform, full_region(4, 4));
  CHECK(std::all_of(z.begin(), z.end(), [](std::uint32_t v) { return v == 0; }));

  // A zone entirely inside the excluded border.
  const Histogram border = zone_histogram(flat, Region{0, 0, 8, 1});
  CHECK(std::accumulate(border.begin(), border.end(), 0u) == 0);

  std::mt19937 rng(10);
  std::uniform_int_distribution<int> label(0, 9);
  std::vector<std::uint8_t> labels(100);
  for (auto& l : labels) l = static_cast<std::uint8_t>(label(rng));
  const lbp::LabelMap map(10, 10, 0, 8, labels);
  const Region zone{2, 3, 9, 10};
  std::vector<std::uint32_t> expected(9, 0);
  for (int y = zone.top; y < zone.bottom; ++y)
    for (int x = zone.left; x < zone.right; ++x)
      if (labels[static_cast<std::size_t>(y * 10 + x)] < 9) ++expected[labels[static_cast<std::size_t>(y * 10 + x)]];
  CHECK(zone_histogram(map, zone) == expected);
}

TEST_CASE("normalize_and_weight") {
  const std::vector<std::uint32_t> any{3, 1, 0, 0, 0, 0, 0, 0, 5};
  for (double v : normalize_and_weight(any, 0.0)) CHECK(v == 0.0);

  const std::vector<std::uint32_t> single{9, 0, 0, 0, 0, 0, 0, 0, 0};
  const auto a = normalize_and_weight(single, 1.0);
  CHECK(a[0] == 1.0);
  CHECK(std::accumulate(a.begin() + 1, a.end(), 0.0) == 0.0);

  const std::vector<std::uint32_t> pair{2, 2, 0, 0, 0, 0, 0, 0, 0};
  const auto b = normalize_and_weight(pair, 0.5);
  CHECK(b[0] == 0.25);
  CHECK(b[1] == 0.25);

  const std::vector<std::uint32_t> empty(9, 0);
  for (double v : normalize_and_weight(empty, 0.7)) CHECK(v == 0.0);
  CHECK_THROWS_AS(normalize_and_weight(pair, 1.5), PreconditionError);
}

TEST_CASE("extract_descriptor") {
  const DescriptorConfig config;
  CHECK(config.dimension() == 180);

  SUBCASE("deterministic") {
    const GrayImage img = synth::render_word("word", {});
    CHECK(extract_descriptor(img, config) == extract_descriptor(GrayImage(img), config));
  }
  SUBCASE("blank image gives a zero vector") {
    const Extraction ex = extract_detailed(GrayImage(40, 20, 230), config);
    CHECK(ex.otsu.degenerate);
    CHECK(ex.descriptor.values.size() == 180);
    for (double v : ex.descriptor.values) CHECK(v == 0.0);
    for (std::size_t i = 0; i < ex.zones.size(); ++i) CHECK(ex.zones.empty(i));
  }
  SUBCASE("dimension 180 and block norms equal the edge ratios") {
    const GrayImage img = synth::render_word("spotting", {});
    const Extraction ex = extract_detailed(img, config);
    CHECK(ex.descriptor.values.size() == 180);
    CHECK(ex.descriptor.width == img.width());
    for (std::size_t z = 0; z < 20; ++z) {
      const double norm = std::accumulate(ex.descriptor.values.begin() + static_cast<long>(9 * z),
                                          ex.descriptor.values.begin() + static_cast<long>(9 * z + 9), 0.0);
      const Histogram h = zone_histogram(ex.labels, ex.zones[z]);
      const bool empty_hist = std::accumulate(h.begin(), h.end(), 0u) == 0;
      CHECK(norm == doctest::Approx(empty_hist ? 0.0 : ex.edge_ratios[z]).epsilon(1e-12));
      for (std::size_t b = 0; b < 9; ++b) CHECK(ex.descriptor.values[9 * z + b] >= 0.0);
    }
  }
  SUBCASE("undersized image names the image") {
    try {
      extract_descriptor(GrayImage(3, 30), config, "tiny.png");
      FAIL("expected DimensionError");
    } catch (const DimensionError& e) {
      CHECK(std::string(e.what()).find("tiny.png") != std::string::npos);
    }
  }
}

TEST_CASE("extract_descriptor equals the reference pipeline") {
  const DescriptorConfig config;
  DescriptorConfig global = config;
  global.edge_ratio = EdgeRatio::Global;
  std::mt19937 rng(77);
  const char* words[] = {"the", "company", "letter", "washington", "in", "orders", "general", "of"};
  for (int i = 0; i < 8; ++i) {
    synth::Style style;
    style.noise = 10 * (i % 3);
    style.seed = static_cast<unsigned>(i + 1);
    style.slant = 0.1 * (i % 4);
    const GrayImage img = synth::render_word(words[i], style);
    const std::vector<double> expected = ref::descriptor(img);
    const std::vector<double> got = extract_descriptor(img, config).values;
    REQUIRE(got.size() == expected.size());
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == doctest::Approx(expected[k]).epsilon(1e-12));
    const std::vector<double> expected_global = ref::descriptor(img, true);
    const std::vector<double> got_global = extract_descriptor(img, global).values;
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(got_global[k] == doctest::Approx(expected_global[k]).epsilon(1e-12));
    }
  }
  for (int i = 0; i < 10; ++i) {
    const GrayImage img = synth::random_gray(5 + i * 3, 4 + i, rng);
    const std::vector<double> expected = ref::descriptor(img);
    const std::vector<double> got = extract_descriptor(img, config).values;
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == doctest::Approx(expected[k]).epsilon(1e-12));
  }
}

TEST_CASE("gray-level robustness") {
  // A uniform darkening is strictly increasing on the rendered range, so LBP labels are unchanged
  // and the Otsu threshold moves with the histogram: the descriptor is bit-identical.
  const GrayImage img = synth::render_word("invariant", {});
  GrayImage darker = img;
  for (auto& v : darker.pixels()) v = static_cast<std::uint8_t>(v - 30);
  const DescriptorConfig config;
  const Extraction a = extract_detailed(img, config);
  const Extraction b = extract_detailed(darker, config);
  CHECK(static_cast<int>(b.otsu.threshold) == a.otsu.threshold - 30);
  CHECK(a.mask == b.mask);
  CHECK(a.descriptor == b.descriptor);
}

TEST_CASE("quadrants without ink get zero blocks") {
  // Two blobs in opposite corners put the split between them, leaving NE and SW empty.
  GrayImage img(40, 40, 230);
  for (int y = 4; y < 12; ++y) {
    for (int x = 4; x < 12; ++x) {
      img.at(x, y) = (x + y) % 3 == 0 ? 20 : 60;
      img.at(x + 24, y + 24) = (x + y) % 3 == 0 ? 20 : 60;
    }
  }
  const Extraction ex = extract_detailed(img, DescriptorConfig{});
  CHECK(ex.zones.level(1)[0] == Region{0, 0, 20, 20});
  for (std::size_t zone : {1, 2, 8, 9, 10, 11, 12, 13, 14, 15}) {
    CHECK(ex.zones.empty(zone));
    for (std::size_t b = 0; b < 9; ++b) CHECK(ex.descriptor.values[zone * 9 + b] == 0.0);
  }
  for (std::size_t zone : {0, 3}) CHECK(ex.edge_ratios[zone] > 0.0);
}

TEST_CASE("config encoding and fingerprint") {
  DescriptorConfig a;
  DescriptorConfig b;
  CHECK(config_fingerprint(a) == config_fingerprint(b));
  CHECK(decode_config(encode_config(a)) == a);
  b.lbp.mode = lbp::Mode::Circular;
  b.lbp.points = 16;
  b.lbp.radius = 2;
  b.edge_ratio = EdgeRatio::Global;
  CHECK(config_fingerprint(a) != config_fingerprint(b));
  CHECK(decode_config(encode_config(b)) == b);
  DescriptorConfig c;
  c.median_radius = 2;
  CHECK(config_fingerprint(a) != config_fingerprint(c));
}
