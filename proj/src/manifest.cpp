#include "wordspot/manifest.hpp"

#include <fstream>
#include <map>

#include "wordspot/error.hpp"

namespace wordspot::manifest {

namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      extra = 3;
    } else {
      return false;
    }
    for (int k = 1; k <= extra; ++k) {
      if (i + static_cast<std::size_t>(k) >= s.size()) return false;
      if ((static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]) & 0xC0) != 0x80) return false;
    }
    i += static_cast<std::size_t>(extra) + 1;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "test"; }

std::filesystem::path Manifest::resolve(const Record& record) const {
  const std::filesystem::path p(record.path);
  return p.is_absolute() ? p : base_dir / p;
}

std::vector<retrieval::CorpusItem> Manifest::corpus(std::optional<Split> split) const {
  std::vector<retrieval::CorpusItem> out;
  for (const Record& r : records) {
    if (split && r.split != *split) continue;
    out.push_back(retrieval::CorpusItem{r.path, resolve(r), r.transcription, r.page});
  }
  return out;
}

std::size_t Manifest::count(Split split) const {
  std::size_t n = 0;
  for (const Record& r : records) n += r.split == split ? 1 : 0;
  return n;
}

Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir, std::string_view source) {
  Manifest out;
  out.base_dir = base_dir;
  std::map<std::string, std::size_t> seen;
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) { throw FormatError(std::string(source) + ":" + std::to_string(line_no) + ": " + msg); };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!valid_utf8(line)) fail("line is not valid UTF-8");
    if (trim(line).empty() || trim(line).front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) {
      fail("expected 4 tab-separated fields (path, transcription, page, split), found " + std::to_string(fields.size()));
    }
    Record rec;
    rec.path = std::string(trim(fields[0]));
    rec.transcription = std::string(trim(fields[1]));
    rec.page = std::string(trim(fields[2]));
    const std::string_view split = trim(fields[3]);
    rec.line = line_no;
    if (rec.path.empty()) fail("empty image path");
    if (rec.page.empty()) fail("empty page id");
    if (split == "train") {
      rec.split = Split::Train;
    } else if (split == "test") {
      rec.split = Split::Test;
    } else {
      fail("split must be 'train' or 'test', got '" + std::string(split) + "'");
    }
    const std::string key = std::filesystem::path(rec.path).lexically_normal().generic_string();
    const auto [it, inserted] = seen.emplace(key, line_no);
    if (!inserted) {
      throw FormatError(std::string(source) + ": duplicate path '" + rec.path + "' on lines " +
                        std::to_string(it->second) + " and " + std::to_string(line_no));
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

Manifest parse_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open manifest '" + path.string() + "'");
  return parse_manifest(in, path.parent_path(), path.string());
}

}  // namespace wordspot::manifest
