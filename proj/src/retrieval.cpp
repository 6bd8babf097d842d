#include "wordspot/retrieval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "parallel.hpp"
#include "wordspot/error.hpp"
#include "wordspot/image_io.hpp"

namespace wordspot::retrieval {

namespace {

double bray_curtis_unchecked(const double* a, const double* b, std::size_t n) {
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff += std::abs(a[i] - b[i]);
    sum += a[i] + b[i];
  }
  return sum > 0.0 ? diff / sum : 0.0;
}

void check_non_negative(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!(x >= 0.0)) throw PreconditionError(std::string(what) + " has a negative or NaN component");
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Index::Index(DescriptorConfig config, std::vector<Entry> entries)
    : config_(config), fingerprint_(config_fingerprint(config)), entries_(std::move(entries)) {
  config_.validate();
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
  const std::size_t dim = config_.dimension();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& e = entries_[i];
    if (i > 0 && entries_[i - 1].id == e.id) throw PreconditionError("duplicate index id '" + e.id + "'");
    if (e.descriptor.values.size() != dim) {
      throw PreconditionError("entry '" + e.id + "' has dimension " + std::to_string(e.descriptor.values.size()) +
                              ", index expects " + std::to_string(dim));
    }
    if (e.descriptor.width <= 0) throw PreconditionError("entry '" + e.id + "' has non-positive width");
    check_non_negative(e.descriptor.values, "descriptor");
  }
}

std::optional<std::size_t> Index::find(std::string_view id) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                             [](const Entry& e, std::string_view key) { return e.id < key; });
  if (it == entries_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - entries_.begin());
}

void ScoreOptions::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw PreconditionError("lambda must be a finite value >= 0");
  if (width_filter && !(*width_filter >= 0.0 && *width_filter <= 1.0)) {
    throw PreconditionError("width filter must be in [0, 1]");
  }
}

double bray_curtis(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("Bray-Curtis dimension mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  check_non_negative(a, "first vector");
  check_non_negative(b, "second vector");
  return bray_curtis_unchecked(a.data(), b.data(), a.size());
}

double width_penalty(int query_width, int candidate_width) {
  if (query_width <= 0 || candidate_width <= 0) throw PreconditionError("widths must be positive");
  const auto lo = static_cast<double>(std::min(query_width, candidate_width));
  const auto hi = static_cast<double>(std::max(query_width, candidate_width));
  return 1.0 - lo / hi;
}

double score(const Descriptor& query, const Descriptor& candidate, double lambda) {
  if (!(lambda >= 0.0)) throw PreconditionError("lambda must be >= 0");
  const double bc = bray_curtis(query.values, candidate.values);
  if (lambda == 0.0) return bc;
  return bc + lambda * width_penalty(query.width, candidate.width);
}

RankedList query(const Index& index, const Descriptor& q, std::size_t k, const ScoreOptions& options,
                 std::optional<std::string_view> exclude, std::string query_id) {
  options.validate();
  if (k == 0) throw PreconditionError("k must be >= 1");
  if (index.empty()) throw PreconditionError("cannot query an empty index");
  if (q.values.size() != index.dimension()) {
    throw DimensionError("query dimension " + std::to_string(q.values.size()) + " does not match index dimension " +
                         std::to_string(index.dimension()));
  }
  if (q.width <= 0) throw PreconditionError("query width must be positive");
  check_non_negative(q.values, "query descriptor");

  const std::size_t dim = index.dimension();
  const double qw = q.width;
  RankedList out;
  out.query_id = std::move(query_id);
  out.items.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Entry& e = index[i];
    if (exclude && e.id == *exclude) continue;
    const double cw = e.descriptor.width;
    const double ratio = std::min(qw, cw) / std::max(qw, cw);
    if (options.width_filter && ratio < *options.width_filter) continue;
    double s = bray_curtis_unchecked(q.values.data(), e.descriptor.values.data(), dim);
    if (options.lambda != 0.0) s += options.lambda * (1.0 - ratio);
    out.items.push_back(Ranked{i, s});
  }
  // Entries are sorted by id, so position order is id order.
  auto before = [](const Ranked& a, const Ranked& b) { return a.score < b.score || (a.score == b.score && a.entry < b.entry); };
  if (k < out.items.size()) {
    std::partial_sort(out.items.begin(), out.items.begin() + static_cast<std::ptrdiff_t>(k), out.items.end(), before);
    out.items.resize(k);
  } else {
    std::sort(out.items.begin(), out.items.end(), before);
  }
  return out;
}

BuildResult build_index(std::span<const CorpusItem> corpus, const DescriptorConfig& config, const ImageLoader& loader,
                        unsigned threads) {
  config.validate();
  if (corpus.empty()) throw Error("cannot build an index from an empty corpus");
  {
    std::set<std::string_view> seen;
    for (const CorpusItem& item : corpus) {
      if (!seen.insert(item.id).second) throw PreconditionError("duplicate corpus id '" + item.id + "'");
    }
  }

  struct Slot {
    std::optional<Entry> entry;
    std::string error;
    double seconds = 0.0;
  };
  std::vector<Slot> slots(corpus.size());
  const auto start = std::chrono::steady_clock::now();
  detail::parallel_for(corpus.size(), threads, [&](std::size_t i) {
    const CorpusItem& item = corpus[i];
    const auto image_start = std::chrono::steady_clock::now();
    try {
      const GrayImage img = loader ? loader(item) : load_gray(item.path);
      Descriptor d = extract_descriptor(img, config, item.id);
      d.label = item.label;
      slots[i].entry = Entry{item.id, std::move(d), item.page};
    } catch (const std::exception& e) {
      slots[i].error = e.what();
    }
    slots[i].seconds = seconds_since(image_start);
  });
  const double total = seconds_since(start);

  std::vector<Entry> entries;
  std::vector<BuildFailure> failures;
  std::vector<std::pair<std::string_view, double>> timings;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (slots[i].entry) {
      timings.emplace_back(corpus[i].id, slots[i].seconds);
      entries.push_back(std::move(*slots[i].entry));
    } else {
      failures.push_back(BuildFailure{corpus[i].id, slots[i].error});
    }
  }
  if (entries.empty()) {
    throw Error("every corpus image failed to extract; first error: " + failures.front().id + ": " +
                failures.front().message);
  }
  std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(timings.begin(), timings.end());
  std::vector<double> seconds;
  seconds.reserve(timings.size());
  for (const auto& t : timings) seconds.push_back(t.second);

  return BuildResult{Index(config, std::move(entries)), std::move(failures), std::move(seconds), total};
}

}  // namespace wordspot::retrieval
