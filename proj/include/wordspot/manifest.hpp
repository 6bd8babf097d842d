#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wordspot/retrieval.hpp"

namespace wordspot::manifest {

enum class Split { Train, Test };

std::string_view to_string(Split split);

struct Record {
  /// Image path exactly as written, relative to the manifest directory unless absolute.
  std::string path;
  /// May be empty for unlabeled corpora; evaluation rejects such records.
  std::string transcription;
  std::string page;
  Split split = Split::Test;
  /// 1-based source line.
  std::size_t line = 0;
};

struct Manifest {
  std::filesystem::path base_dir;
  std::vector<Record> records;

  std::filesystem::path resolve(const Record& record) const;
  /// Records of one split (or all of them) as index input; ids are the manifest paths.
  std::vector<retrieval::CorpusItem> corpus(std::optional<Split> split = std::nullopt) const;
  std::size_t count(Split split) const;
};

/// Lines are `path<TAB>transcription<TAB>page<TAB>split`; blank and `#` lines are skipped.
/// Throws FormatError naming the 1-based line of the first malformed or duplicate record.
/// `source` names the input in messages.
Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir, std::string_view source = "manifest");

Manifest parse_manifest_file(const std::filesystem::path& path);

}  // namespace wordspot::manifest
