#include <sstream>

#include "doctest.h"
#include "wordspot/error.hpp"
#include "wordspot/manifest.hpp"

using namespace wordspot;
using namespace wordspot::manifest;

namespace {

Manifest parse(const std::string& text) {
  std::istringstream in(text);
  return parse_manifest(in, "/data", "words.tsv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const FormatError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("empty and comment-only manifests") {
  CHECK(parse("").records.empty());
  CHECK(parse("# path\ttranscription\tpage\tsplit\n\n   \n").records.empty());
}

TEST_CASE("single record") {
  const Manifest m = parse("p270/w01.png\tLetters\t270\ttest\n");
  REQUIRE(m.records.size() == 1);
  const Record& r = m.records[0];
  CHECK(r.path == "p270/w01.png");
  CHECK(r.transcription == "Letters");
  CHECK(r.page == "270");
  CHECK(r.split == Split::Test);
  CHECK(r.line == 1);
  CHECK(m.resolve(r) == std::filesystem::path("/data/p270/w01.png"));
  const auto corpus = m.corpus();
  REQUIRE(corpus.size() == 1);
  CHECK(corpus[0].id == "p270/w01.png");
  CHECK(corpus[0].label == "Letters");
}

TEST_CASE("BOM, CRLF, comments and splits") {
  const Manifest m = parse("\xEF\xBB\xBF# header\r\na.png\tthe\t1\ttrain\r\n\r\nb.png\tof\t1\ttest\r\n/abs/c.png\t\t2\ttest\n");
  REQUIRE(m.records.size() == 3);
  CHECK(m.records[0].split == Split::Train);
  CHECK(m.records[1].line == 4);
  CHECK(m.records[1].page == "1");
  CHECK(m.records[2].transcription.empty());
  CHECK(m.resolve(m.records[2]) == std::filesystem::path("/abs/c.png"));
  CHECK(m.count(Split::Train) == 1);
  CHECK(m.count(Split::Test) == 2);
  CHECK(m.corpus(Split::Test).size() == 2);
  CHECK(m.corpus(Split::Train).size() == 1);
}

TEST_CASE("duplicate paths name both lines") {
  std::string text;
  for (int i = 1; i <= 8; ++i) text += "w" + std::to_string(i) + ".png\tword\tp\ttest\n";
  text.replace(text.find("w4.png"), 6, "dup.png");
  text += "./dup.png\tword\tp\ttest\n";
  const std::string msg = error_of(text);
  CHECK(msg.find("duplicate path") != std::string::npos);
  CHECK(msg.find("lines 4 and 9") != std::string::npos);
}

TEST_CASE("malformed lines report their line number") {
  CHECK(error_of("a.png\tthe\t1\ttest\nb.png\tthe\t1\n").find("words.tsv:2:") == 0);
  CHECK(error_of("a.png\tthe\t1\ttest\textra\n").find("found 5") != std::string::npos);
  CHECK(error_of("\n\na.png\tthe\t1\tvalidation\n").find("words.tsv:3: split") == 0);
  CHECK(error_of("a.png\tthe\t\ttest\n").find("empty page") != std::string::npos);
  CHECK(error_of("\tthe\t1\ttest\n").find("empty image path") != std::string::npos);
  CHECK(error_of("a.png\tth\xff\t1\ttest\n").find("UTF-8") != std::string::npos);
  CHECK(error_of("a.png\t\xc3\xa9t\xc3\xa9\t1\ttest\n").empty());
}

TEST_CASE("missing manifest file") {
  CHECK_THROWS_AS(parse_manifest_file("/nonexistent/words.tsv"), FormatError);
}
