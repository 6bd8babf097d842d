#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordspot/retrieval.hpp"

namespace wordspot::eval {

struct PrecisionRecall {
  /// Absent when nothing was retrieved.
  std::optional<double> precision;
  /// Absent when nothing is relevant.
  std::optional<double> recall;
};

PrecisionRecall precision_recall(const std::set<std::string>& retrieved, const std::set<std::string>& relevant);

struct RPrecision {
  double value = 0.0;
  /// The ranking held fewer than relevant_count items; value covers the available prefix.
  bool truncated = false;
};

/// Precision over the first relevant_count ranked items. relevance[n] flags rank n + 1.
RPrecision r_precision(std::span<const bool> relevance, std::size_t relevant_count);

/// sum_n P@n * r(n) / relevant_count over the whole ranking.
double average_precision(std::span<const bool> relevance, std::size_t relevant_count);

/// Trimmed, ASCII-lowercased transcription used for relevance matching.
std::string normalize_label(std::string_view label);

struct Protocol {
  retrieval::ScoreOptions scoring;
  /// Drop each query word from its own candidate set and relevant count.
  bool exclude_self = true;
  unsigned threads = 0;
};

struct QueryResult {
  std::string id;
  std::size_t relevant_count = 0;
  double average_precision = 0.0;
  double precision_at_1 = 0.0;
  double r_precision = 0.0;
  bool r_precision_truncated = false;

  bool scoreable() const { return relevant_count > 0; }
};

struct EvalReport {
  std::vector<QueryResult> queries;  // in index order
  std::size_t query_count = 0;
  std::size_t scoreable_count = 0;
  /// Means over scoreable queries (zero when there are none).
  double mean_average_precision = 0.0;
  double mean_precision_at_1 = 0.0;
  double mean_r_precision = 0.0;
  /// P@1 averaged over every query, unscoreable ones counting as misses.
  double mean_precision_at_1_all = 0.0;
  std::size_t truncated_count = 0;
  Protocol protocol;
  double total_seconds = 0.0;
};

/// Issues every index entry as a query against the same index.
/// Throws PreconditionError listing the ids of entries without a transcription.
EvalReport evaluate(const retrieval::Index& index, const Protocol& protocol);

/// Multi-line human-readable summary.
std::string format_text(const EvalReport& report);

/// `key=value` lines. Keys prefixed `metric.` and `protocol.` are deterministic;
/// `timing.` lines carry wall-clock figures. Reals use round-trip precision.
std::string format_machine(const EvalReport& report);

/// Parses `key=value` lines, ignoring blank lines and lines without '='.
std::map<std::string, std::string> parse_machine(std::string_view text);

}  // namespace wordspot::eval
