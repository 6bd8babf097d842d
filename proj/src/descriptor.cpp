#include "wordspot/descriptor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "byte_io.hpp"
#include "wordspot/error.hpp"

namespace wordspot {

std::string_view to_string(EdgeRatio variant) { return variant == EdgeRatio::Zone ? "zone" : "global"; }

EdgeRatio parse_edge_ratio(std::string_view text) {
  if (text == "zone") return EdgeRatio::Zone;
  if (text == "global") return EdgeRatio::Global;
  throw PreconditionError("unknown edge-ratio variant '" + std::string(text) + "' (expected zone or global)");
}

void DescriptorConfig::validate() const {
  if (median_radius < 0 || median_radius > 32) throw PreconditionError("median radius must be in [0, 32]");
  lbp.validate();
  if (levels < 1 || levels > 6) throw PreconditionError("quad-tree levels must be in [1, 6]");
}

std::size_t DescriptorConfig::dimension() const {
  return spatial::zone_count(levels) * static_cast<std::size_t>(lbp.points + 1);
}

int DescriptorConfig::min_side() const {
  return std::max(spatial::min_image_side(levels), 2 * lbp.margin() + 1);
}

std::vector<std::uint8_t> encode_config(const DescriptorConfig& config) {
  detail::ByteWriter w;
  w.i32(config.median_radius);
  w.i32(config.lbp.points);
  w.f64(config.lbp.radius);
  w.f64(config.lbp.threshold);
  w.u8(static_cast<std::uint8_t>(config.lbp.mode));
  w.i32(config.levels);
  w.u8(static_cast<std::uint8_t>(config.edge_ratio));
  return w.take();
}

DescriptorConfig decode_config(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  DescriptorConfig config;
  config.median_radius = r.i32();
  config.lbp.points = r.i32();
  config.lbp.radius = r.f64();
  config.lbp.threshold = r.f64();
  const std::uint8_t mode = r.u8();
  config.levels = r.i32();
  const std::uint8_t edge = r.u8();
  if (!r.done() || mode > 1 || edge > 1) throw FormatError("malformed descriptor config block");
  config.lbp.mode = static_cast<lbp::Mode>(mode);
  config.edge_ratio = static_cast<EdgeRatio>(edge);
  try {
    config.validate();
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("stored descriptor config is invalid: ") + e.what());
  }
  return config;
}

std::uint64_t config_fingerprint(const DescriptorConfig& config) { return detail::fnv1a64(encode_config(config)); }

std::string describe_config(const DescriptorConfig& config) {
  std::ostringstream os;
  os << "median-radius=" << config.median_radius << " lbp-p=" << config.lbp.points << " lbp-r=" << config.lbp.radius
     << " lbp-t=" << config.lbp.threshold << " lbp-mode=" << lbp::to_string(config.lbp.mode)
     << " levels=" << config.levels << " edge-ratio=" << to_string(config.edge_ratio);
  return os.str();
}

Histogram zone_histogram(const lbp::LabelMap& map, const Region& zone) {
  check_region(zone, map.width(), map.height());
  const int bins = map.points() + 1;
  Histogram hist(static_cast<std::size_t>(bins), 0);
  const int m = map.margin();
  const int x0 = std::max(zone.left, m);
  const int x1 = std::min(zone.right, map.width() - m);
  const int y0 = std::max(zone.top, m);
  const int y1 = std::min(zone.bottom, map.height() - m);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const int label = map.at(x, y);
      if (label < bins) ++hist[static_cast<std::size_t>(label)];
    }
  }
  return hist;
}

std::vector<double> normalize_and_weight(std::span<const std::uint32_t> hist, double edge_ratio) {
  if (!(edge_ratio >= 0.0 && edge_ratio <= 1.0)) throw PreconditionError("edge ratio must be in [0, 1]");
  std::vector<double> out(hist.size(), 0.0);
  const std::uint64_t total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
  if (total == 0) return out;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    out[i] = static_cast<double>(hist[i]) / static_cast<double>(total) * edge_ratio;
  }
  return out;
}

Extraction extract_detailed(const GrayImage& img, const DescriptorConfig& config, std::string_view id) {
  config.validate();
  const int side = config.min_side();
  if (img.width() < side || img.height() < side) {
    std::ostringstream os;
    if (!id.empty()) os << id << ": ";
    os << "image is " << img.width() << "x" << img.height() << ", descriptor needs at least " << side << "x" << side;
    throw DimensionError(os.str());
  }

  GrayImage filtered = median_filter(img, config.median_radius);
  const OtsuResult otsu = otsu_threshold(filtered);
  BinaryImage mask = otsu.degenerate ? BinaryImage(img.width(), img.height(), false) : binarize(filtered, otsu.threshold);
  BinaryImage edges = edge_map(mask);
  spatial::ZoneSet zones = spatial::sample_zones(mask, config.levels);
  lbp::LabelMap labels = lbp::lbp_transform(filtered, config.lbp);

  const auto total_edges = static_cast<long long>(edges.count());
  std::vector<double> ratios;
  ratios.reserve(zones.size());
  Descriptor desc;
  desc.width = img.width();
  desc.values.reserve(config.dimension());
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const Region& zone = zones[i];
    const long long zone_edges = count_in(edges, zone);
    double ratio = 0.0;
    if (config.edge_ratio == EdgeRatio::Zone) {
      ratio = static_cast<double>(zone_edges) / static_cast<double>(zone.area());
    } else if (total_edges > 0) {
      ratio = static_cast<double>(zone_edges) / static_cast<double>(total_edges);
    }
    ratios.push_back(ratio);
    const std::vector<double> block = normalize_and_weight(zone_histogram(labels, zone), ratio);
    desc.values.insert(desc.values.end(), block.begin(), block.end());
  }
  return Extraction{std::move(filtered), otsu,           std::move(mask),   std::move(edges),
                    std::move(zones),    std::move(labels), std::move(ratios), std::move(desc)};
}

Descriptor extract_descriptor(const GrayImage& img, const DescriptorConfig& config, std::string_view id) {
  return std::move(extract_detailed(img, config, id).descriptor);
}

}  // namespace wordspot
