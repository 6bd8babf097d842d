#pragma once

#include <filesystem>

#include "wordspot/image.hpp"

namespace wordspot {

/// Decodes PNG (any bit depth, palette, alpha) and binary PGM/PPM (P5/P6).
/// Throws FormatError for unreadable or unsupported files.
Raster load_raster(const std::filesystem::path& path);

/// load_raster followed by to_grayscale.
GrayImage load_gray(const std::filesystem::path& path);

void save_png(const std::filesystem::path& path, const GrayImage& img);
void save_png(const std::filesystem::path& path, const Raster& img);

/// Binary PGM (P5); tests and scripts use it for byte-stable fixtures.
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

}  // namespace wordspot
