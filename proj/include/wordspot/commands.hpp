#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "wordspot/descriptor.hpp"
#include "wordspot/eval.hpp"
#include "wordspot/manifest.hpp"
#include "wordspot/retrieval.hpp"

namespace wordspot::cli {

struct IndexOptions {
  std::filesystem::path manifest;
  std::filesystem::path output;
  DescriptorConfig config;
  /// nullopt indexes every record.
  std::optional<manifest::Split> split;
  unsigned threads = 0;
};

struct QueryOptions {
  std::filesystem::path index;
  std::filesystem::path image;
  std::size_t k = 20;
  DescriptorConfig config;
  retrieval::ScoreOptions scoring;
};

struct EvaluateOptions {
  std::filesystem::path index;
  std::filesystem::path manifest;
  DescriptorConfig config;
  eval::Protocol protocol;
  /// When non-empty, every lambda is evaluated and the best-mAP run is reported in full.
  std::vector<double> lambda_sweep;
  std::optional<std::filesystem::path> report;
};

struct DescribeOptions {
  std::filesystem::path image;
  DescriptorConfig config;
  std::optional<std::filesystem::path> label_png;
  std::optional<std::filesystem::path> zones_png;
};

// Each command writes results to `out`, warnings to `err`, and returns a process exit code.
// Errors are reported by throwing wordspot::Error.

int cmd_index(const IndexOptions& options, std::ostream& out, std::ostream& err);
int cmd_query(const QueryOptions& options, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);
int cmd_describe(const DescribeOptions& options, std::ostream& out, std::ostream& err);

/// Restricts an index to the test-split records of a manifest, checking that every
/// test record is present and labeled.
retrieval::Index test_split_index(const retrieval::Index& index, const manifest::Manifest& manifest);

}  // namespace wordspot::cli
