#include <algorithm>
#include <chrono>
#include <random>
#include <tuple>

#include "doctest.h"
#include "reference.hpp"
#include "synthetic.hpp"
#include "wordspot/error.hpp"
#include "wordspot/retrieval.hpp"

using namespace wordspot;
using namespace wordspot::retrieval;

namespace {

// Levels = 1 keeps hand-built vectors small: 4 zones x 9 bins.
DescriptorConfig small_config() {
  DescriptorConfig c;
  c.levels = 1;
  return c;
}

Descriptor make(std::vector<std::pair<std::size_t, double>> nonzero, int width, std::size_t dim = 36) {
  Descriptor d;
  d.values.assign(dim, 0.0);
  for (auto [i, v] : nonzero) d.values[i] = v;
  d.width = width;
  return d;
}

std::vector<double> random_vector(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(0.3);
  std::vector<double> v(n);
  for (double& x : v) x = zero(rng) ? 0.0 : u(rng);
  return v;
}

}  // namespace

TEST_CASE("bray_curtis examples") {
  const std::vector<double> a{0.2, 0.5, 0.0};
  CHECK(bray_curtis(a, a) == 0.0);
  CHECK(bray_curtis(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 1.0);
  CHECK(bray_curtis(std::vector<double>{2, 1}, std::vector<double>{1, 1}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(bray_curtis(std::vector<double>{0, 0}, std::vector<double>{0, 0}) == 0.0);
  CHECK_THROWS_AS(bray_curtis(std::vector<double>{1}, std::vector<double>{1, 2}), DimensionError);
  CHECK_THROWS_AS(bray_curtis(std::vector<double>{-1, 0}, std::vector<double>{1, 2}), PreconditionError);
}

TEST_CASE("bray_curtis properties") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_vector(rng, 1 + rng() % 200);
    const auto b = random_vector(rng, a.size());
    const double ab = bray_curtis(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(ab == bray_curtis(b, a));
    CHECK(bray_curtis(a, a) == 0.0);
    CHECK(ab == doctest::Approx(ref::bray_curtis(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("score") {
  const Descriptor q = make({{0, 1.3}}, 100);
  const Descriptor c = make({{0, 0.7}}, 50);
  CHECK(score(q, c, 0.0) == doctest::Approx(0.3));
  CHECK(score(q, c, 0.0) == bray_curtis(q.values, c.values));
  CHECK(score(q, c, 0.1) == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(score(q, q, 0.7) == 0.0);
  CHECK(width_penalty(100, 50) == 0.5);
  CHECK(width_penalty(50, 100) == 0.5);
  CHECK(width_penalty(80, 80) == 0.0);
  CHECK_THROWS_AS(score(q, c, -0.1), PreconditionError);

  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Descriptor a{random_vector(rng, 36), 10 + static_cast<int>(rng() % 300), ""};
    Descriptor b{random_vector(rng, 36), 10 + static_cast<int>(rng() % 300), ""};
    double prev = -1.0;
    for (double lambda : {0.0, 0.05, 0.1, 0.5, 1.0}) {
      const double s = score(a, b, lambda);
      CHECK(s >= prev);
      prev = s;
    }
    b.width = a.width;
    CHECK(score(a, b, 0.0) == score(a, b, 0.9));
  }
}

TEST_CASE("Index invariants") {
  const DescriptorConfig c = small_config();
  CHECK_NOTHROW(Index(c, {Entry{"b", make({}, 5), "p"}, Entry{"a", make({}, 5), "p"}}));
  const Index idx(c, {Entry{"b", make({}, 5), "p"}, Entry{"a", make({}, 5), "p"}});
  CHECK(idx[0].id == "a");
  CHECK(idx.find("b") == std::optional<std::size_t>(1));
  CHECK_FALSE(idx.find("c"));
  CHECK_THROWS_AS(Index(c, {Entry{"a", make({}, 5), ""}, Entry{"a", make({}, 6), ""}}), PreconditionError);
  CHECK_THROWS_AS(Index(c, {Entry{"a", make({}, 5, 35), ""}}), PreconditionError);
  CHECK_THROWS_AS(Index(c, {Entry{"a", make({}, 0), ""}}), PreconditionError);
  CHECK_THROWS_AS(Index(c, {Entry{"a", make({{0, -1.0}}, 4), ""}}), PreconditionError);
}

TEST_CASE("query") {
  const DescriptorConfig c = small_config();
  std::vector<Entry> entries{
      {"e1", make({{0, 1.0}, {1, 1.0}}, 100), "p"},
      {"e2", make({{0, 1.0}}, 100), "p"},
      {"e3", make({{1, 1.0}}, 50), "p"},
      {"e4", make({{0, 2.0}, {1, 1.0}}, 80), "p"},
      {"e5", make({{0, 1.0}, {1, 1.0}}, 100), "p"},
  };
  const Index index(c, entries);

  SUBCASE("exact match ranks first with score 0") {
    const RankedList r = query(index, entries[1].descriptor, 5);
    CHECK(index[r.items[0].entry].id == "e2");
    CHECK(r.items[0].score == 0.0);
  }
  SUBCASE("k larger than the index returns everything") {
    CHECK(query(index, entries[0].descriptor, 50).items.size() == 5);
    CHECK(query(index, entries[0].descriptor, 1).items.size() == 1);
  }
  SUBCASE("duplicates are adjacent and ordered by id") {
    const RankedList r = query(index, entries[0].descriptor, 5);
    CHECK(index[r.items[0].entry].id == "e1");
    CHECK(index[r.items[1].entry].id == "e5");
    CHECK(r.items[0].score == r.items[1].score);
  }
  SUBCASE("exclusion") {
    const RankedList r = query(index, entries[0].descriptor, 5, {}, "e1");
    CHECK(r.items.size() == 4);
    CHECK(index[r.items[0].entry].id == "e5");
  }
  SUBCASE("order matches a full-sort oracle") {
    const Descriptor q = make({{0, 1.5}, {1, 0.5}}, 90);
    for (double lambda : {0.0, 0.1, 0.5}) {
      std::vector<std::tuple<double, std::string>> oracle;
      for (const Entry& e : entries) {
        const double s = ref::bray_curtis(q.values, e.descriptor.values) +
                         lambda * (1.0 - std::min(90.0, double(e.descriptor.width)) / std::max(90.0, double(e.descriptor.width)));
        oracle.emplace_back(s, e.id);
      }
      std::sort(oracle.begin(), oracle.end());
      ScoreOptions opts;
      opts.lambda = lambda;
      const RankedList r = query(index, q, 5, opts);
      REQUIRE(r.items.size() == 5);
      for (std::size_t i = 0; i < 5; ++i) {
        CHECK(index[r.items[i].entry].id == std::get<1>(oracle[i]));
        CHECK(r.items[i].score == doctest::Approx(std::get<0>(oracle[i])).epsilon(1e-12));
      }
    }
  }
  SUBCASE("width filter drops narrow candidates") {
    ScoreOptions opts;
    opts.lambda = 0.0;
    opts.width_filter = 0.9;
    const RankedList r = query(index, entries[0].descriptor, 5, opts);
    CHECK(r.items.size() == 3);  // e3 (50) and e4 (80) fall below 0.9 of 100
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(query(index, make({}, 10, 180), 5), DimensionError);
    CHECK_THROWS_AS(query(index, entries[0].descriptor, 0), PreconditionError);
    CHECK_THROWS_AS(query(Index(c, {}), entries[0].descriptor, 1), PreconditionError);
  }
}

TEST_CASE("ranking is stable under a constant score shift") {
  std::mt19937 rng(8);
  const DescriptorConfig c = small_config();
  std::vector<Entry> entries;
  for (int i = 0; i < 40; ++i) {
    entries.push_back(Entry{"id" + std::to_string(100 + i), Descriptor{random_vector(rng, 36), 50, ""}, "p"});
  }
  const Index index(c, entries);
  const Descriptor q{random_vector(rng, 36), 100, ""};
  ScoreOptions none;
  none.lambda = 0.0;
  ScoreOptions shifted;
  shifted.lambda = 0.4;  // every candidate pays the same 0.4 * 0.5
  const RankedList a = query(index, q, 40, none);
  const RankedList b = query(index, q, 40, shifted);
  for (std::size_t i = 0; i < 40; ++i) CHECK(a.items[i].entry == b.items[i].entry);
}

TEST_CASE("build_index") {
  const DescriptorConfig config;
  const ImageLoader loader = [](const CorpusItem& item) {
    if (item.path == "corrupt") throw FormatError("corrupt: not an image");
    return synth::render_word(item.label, {});
  };
  SUBCASE("single image") {
    const std::vector<CorpusItem> corpus{{"w1", "w1.png", "the", "p1"}};
    const BuildResult r = build_index(corpus, config, loader, 1);
    CHECK(r.index.size() == 1);
    CHECK(r.index[0].descriptor.label == "the");
    CHECK(r.failures.empty());
  }
  SUBCASE("one corrupt file is reported and skipped") {
    const std::vector<CorpusItem> corpus{
        {"w1", "w1.png", "the", "p1"}, {"w2", "corrupt", "of", "p1"}, {"w3", "w3.png", "and", "p1"}};
    const BuildResult r = build_index(corpus, config, loader, 2);
    CHECK(r.index.size() == 2);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].id == "w2");
    CHECK(r.image_seconds.size() == 2);
  }
  SUBCASE("all failing is an error") {
    const std::vector<CorpusItem> corpus{{"w2", "corrupt", "of", "p1"}};
    CHECK_THROWS_AS(build_index(corpus, config, loader), Error);
    CHECK_THROWS_AS(build_index(std::vector<CorpusItem>{}, config, loader), Error);
  }
  SUBCASE("order and thread count do not matter") {
    std::vector<CorpusItem> corpus;
    const char* words[] = {"alpha", "beta", "gamma", "delta", "kappa", "lambda", "sigma", "omega"};
    for (int i = 0; i < 8; ++i) corpus.push_back({"w" + std::to_string(i), "x", words[i], "p"});
    const BuildResult a = build_index(corpus, config, loader, 1);
    std::reverse(corpus.begin(), corpus.end());
    const BuildResult b = build_index(corpus, config, loader, 4);
    CHECK(a.index == b.index);
  }
}
