#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordspot/image.hpp"
#include "wordspot/lbp.hpp"
#include "wordspot/spatial.hpp"

namespace wordspot {

/// How a zone's edge-pixel ratio is normalized.
enum class EdgeRatio : std::uint8_t {
  /// edge pixels in the zone / pixels in the zone
  Zone = 0,
  /// edge pixels in the zone / edge pixels in the whole image
  Global = 1,
};

std::string_view to_string(EdgeRatio variant);
EdgeRatio parse_edge_ratio(std::string_view text);

/// Every parameter that changes the extracted feature. Query-time scoring
/// options (the width penalty) live in retrieval::ScoreOptions instead.
struct DescriptorConfig {
  int median_radius = 1;
  lbp::Params lbp;
  int levels = 2;
  EdgeRatio edge_ratio = EdgeRatio::Zone;

  void validate() const;
  /// zones * (points + 1); 180 for the defaults.
  std::size_t dimension() const;
  int min_side() const;

  friend bool operator==(const DescriptorConfig&, const DescriptorConfig&) = default;
};

/// Canonical little-endian encoding of the config; stable across runs and platforms.
std::vector<std::uint8_t> encode_config(const DescriptorConfig& config);
/// Inverse of encode_config; throws FormatError on malformed bytes.
DescriptorConfig decode_config(std::span<const std::uint8_t> bytes);
/// FNV-1a 64 over encode_config.
std::uint64_t config_fingerprint(const DescriptorConfig& config);
/// One-line human summary, e.g. for mismatch messages.
std::string describe_config(const DescriptorConfig& config);

struct Descriptor {
  std::vector<double> values;
  int width = 0;
  std::string label;

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

using Histogram = std::vector<std::uint32_t>;

/// Counts of uniform labels 0..points over the valid pixels of zone; the nonuniform label is dropped.
Histogram zone_histogram(const lbp::LabelMap& map, const Region& zone);

/// hist / L1(hist) * edge_ratio, or zeros when the histogram is empty.
std::vector<double> normalize_and_weight(std::span<const std::uint32_t> hist, double edge_ratio);

/// Every intermediate of one extraction, for inspection tools.
struct Extraction {
  GrayImage filtered;
  OtsuResult otsu;
  BinaryImage mask;
  BinaryImage edges;
  spatial::ZoneSet zones;
  lbp::LabelMap labels;
  std::vector<double> edge_ratios;
  Descriptor descriptor;
};

/// Full pipeline: median filter, Otsu mask, quad-tree zones, LBP labels,
/// weighted per-zone histograms. `id` only decorates error messages.
Extraction extract_detailed(const GrayImage& img, const DescriptorConfig& config, std::string_view id = {});

Descriptor extract_descriptor(const GrayImage& img, const DescriptorConfig& config, std::string_view id = {});

}  // namespace wordspot
