#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordspot/descriptor.hpp"

namespace wordspot::retrieval {

struct Entry {
  std::string id;
  Descriptor descriptor;  // carries width and transcription label
  std::string page;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Immutable corpus of descriptors, sorted by id.
class Index {
 public:
  /// Throws PreconditionError on duplicate ids, mixed dimensions, zero widths or negative components.
  Index(DescriptorConfig config, std::vector<Entry> entries);

  const DescriptorConfig& config() const { return config_; }
  std::uint64_t fingerprint() const { return fingerprint_; }
  std::size_t dimension() const { return config_.dimension(); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  std::span<const Entry> entries() const { return entries_; }

  /// Position of id, if present.
  std::optional<std::size_t> find(std::string_view id) const;

  friend bool operator==(const Index&, const Index&) = default;

 private:
  DescriptorConfig config_;
  std::uint64_t fingerprint_;
  std::vector<Entry> entries_;
};

/// Query-time scoring options; none of these affect the stored descriptors.
struct ScoreOptions {
  /// Weight of the width penalty 1 - min(wq, wc) / max(wq, wc).
  double lambda = 0.1;
  /// When set, candidates whose width ratio min/max falls below this value are dropped.
  std::optional<double> width_filter;

  void validate() const;
};

/// sum |a_i - b_i| / sum (a_i + b_i); 0 when both vectors are all zero.
double bray_curtis(std::span<const double> a, std::span<const double> b);

/// 1 - min/max of two positive widths.
double width_penalty(int query_width, int candidate_width);

/// bray_curtis + lambda * width_penalty.
double score(const Descriptor& query, const Descriptor& candidate, double lambda);

struct Ranked {
  std::size_t entry;  // position in the index
  double score;
};

struct RankedList {
  std::string query_id;
  /// Ascending score; equal scores in ascending id order.
  std::vector<Ranked> items;
};

/// Exact linear scan over every entry except `exclude`, truncated to k results.
RankedList query(const Index& index, const Descriptor& q, std::size_t k, const ScoreOptions& options = {},
                 std::optional<std::string_view> exclude = std::nullopt, std::string query_id = {});

struct CorpusItem {
  std::string id;
  std::filesystem::path path;
  std::string label;
  std::string page;
};

struct BuildFailure {
  std::string id;
  std::string message;
};

struct BuildResult {
  Index index;
  std::vector<BuildFailure> failures;
  /// Wall-clock seconds per successfully extracted image, in index order.
  std::vector<double> image_seconds;
  double total_seconds = 0.0;
};

using ImageLoader = std::function<GrayImage(const CorpusItem&)>;

/// Extracts every corpus image, collecting per-image failures. Throws Error if
/// the corpus is empty or every image fails. threads == 0 uses all cores.
BuildResult build_index(std::span<const CorpusItem> corpus, const DescriptorConfig& config,
                        const ImageLoader& loader = {}, unsigned threads = 0);

}  // namespace wordspot::retrieval
