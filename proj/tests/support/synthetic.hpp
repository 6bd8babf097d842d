#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "wordspot/image.hpp"

namespace synth {

wordspot::GrayImage random_gray(int width, int height, std::mt19937& rng, int lo = 0, int hi = 255);
wordspot::BinaryImage random_mask(int width, int height, std::mt19937& rng, double density = 0.3);

struct Style {
  double thickness = 2.5;
  double dx = 0.0;       // sub-pixel horizontal shift of the whole word
  double dy = 0.0;
  double slant = 0.0;    // x offset per pixel above the baseline
  int margin = 6;
  int ink = 40;
  int paper = 215;
  int noise = 0;         // uniform +-noise added per pixel
  unsigned seed = 1;
};

/// Handwriting-like rendering of a lowercase word from polyline glyphs.
wordspot::GrayImage render_word(const std::string& text, const Style& style = {});

/// Self-deleting temporary directory.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct CorpusWord {
  std::string file;  // relative to the corpus directory
  wordspot::GrayImage image;
  std::string label;
  std::string page = "p1";
  std::string split = "test";
};

/// Writes every image as PNG plus a manifest.tsv into dir; returns the manifest path.
std::filesystem::path write_corpus(const std::filesystem::path& dir, const std::vector<CorpusWord>& words);

/// Whole-file byte comparison helper.
std::string read_file(const std::filesystem::path& path);

}  // namespace synth
