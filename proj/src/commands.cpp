#include "wordspot/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "wordspot/error.hpp"
#include "wordspot/image_io.hpp"
#include "wordspot/index_io.hpp"

namespace wordspot::cli {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Raster zone_overlay(const GrayImage& img, const spatial::ZoneSet& zones) {
  Raster out;
  out.width = img.width();
  out.height = img.height();
  out.channels = 3;
  out.data.resize(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = img.pixels()[i];
  }
  auto paint = [&](const Region& r, std::uint8_t red, std::uint8_t green) {
    for (int y = r.top; y < r.bottom; ++y) {
      for (int x = r.left; x < r.right; ++x) {
        if (x != r.left && y != r.top) continue;
        const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width()) +
                               static_cast<std::size_t>(x)) * 3;
        out.data[i] = red;
        out.data[i + 1] = green;
        out.data[i + 2] = 0;
      }
    }
  };
  for (int l = zones.levels(); l >= 1; --l) {
    for (const Region& r : zones.level(l)) paint(r, l == 1 ? 255 : 0, l == 1 ? 0 : 200);
  }
  return out;
}

GrayImage label_raster(const lbp::LabelMap& map) {
  GrayImage out(map.width(), map.height(), 0);
  const int top = map.points() + 1;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.valid(x, y)) out.at(x, y) = static_cast<std::uint8_t>(map.at(x, y) * 255 / top);
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write report '" + path.string() + "'");
  f << text;
  if (!f) throw Error("failed writing report '" + path.string() + "'");
}

}  // namespace

int cmd_index(const IndexOptions& options, std::ostream& out, std::ostream& err) {
  options.config.validate();
  const manifest::Manifest m = manifest::parse_manifest_file(options.manifest);
  const std::vector<retrieval::CorpusItem> corpus = m.corpus(options.split);
  const std::string split_name = options.split ? std::string(manifest::to_string(*options.split)) : "all";
  if (corpus.empty()) throw Error("manifest '" + options.manifest.string() + "' has no records in split " + split_name);

  // Probe the destination before spending time on extraction.
  {
    std::filesystem::path probe = options.output;
    probe += ".tmp";
    std::ofstream f(probe, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write index file '" + options.output.string() + "'");
    f.close();
    std::filesystem::remove(probe);
  }

  const retrieval::BuildResult built = retrieval::build_index(corpus, options.config, {}, options.threads);
  for (const retrieval::BuildFailure& f : built.failures) err << "warning: " << f.id << ": " << f.message << "\n";
  io::save_index(options.output, built.index);

  const double extract_sum = std::accumulate(built.image_seconds.begin(), built.image_seconds.end(), 0.0);
  const double mean_ms = built.image_seconds.empty() ? 0.0 : 1000.0 * extract_sum / static_cast<double>(built.image_seconds.size());
  const double max_ms = built.image_seconds.empty()
                            ? 0.0
                            : 1000.0 * *std::max_element(built.image_seconds.begin(), built.image_seconds.end());
  const double rate = built.total_seconds > 0.0 ? static_cast<double>(built.index.size()) / built.total_seconds : 0.0;

  out << "indexed " << built.index.size() << " of " << corpus.size() << " images (split " << split_name << ", "
      << built.failures.size() << " failed)\n"
      << "config: " << describe_config(options.config) << "\n"
      << "extraction: " << fixed(built.total_seconds, 3) << " s total, " << fixed(mean_ms, 3) << " ms/image mean, "
      << fixed(max_ms, 3) << " ms max, " << fixed(rate, 1) << " images/s\n"
      << "wrote " << options.output.string() << "\n"
      << "index.entries=" << built.index.size() << "\n"
      << "index.failures=" << built.failures.size() << "\n"
      << "index.dimension=" << built.index.dimension() << "\n"
      << "index.fingerprint=" << hex64(built.index.fingerprint()) << "\n"
      << "timing.extract_seconds=" << real(built.total_seconds) << "\n"
      << "timing.mean_ms_per_image=" << real(mean_ms) << "\n"
      << "timing.images_per_second=" << real(rate) << "\n";
  return built.failures.empty() ? 0 : 3;
}

int cmd_query(const QueryOptions& options, std::ostream& out, std::ostream& /*err*/) {
  options.scoring.validate();
  if (options.k == 0) throw PreconditionError("k must be >= 1");
  const retrieval::Index index = io::load_index(options.index, options.config);
  const GrayImage img = load_gray(options.image);
  const Descriptor q = extract_descriptor(img, options.config, options.image.string());
  const retrieval::RankedList ranked = retrieval::query(index, q, options.k, options.scoring);
  for (std::size_t i = 0; i < ranked.items.size(); ++i) {
    const retrieval::Entry& e = index[ranked.items[i].entry];
    out << i + 1 << '\t' << e.id << '\t' << fixed(ranked.items[i].score, 6) << '\t' << e.descriptor.label << '\n';
  }
  return 0;
}

retrieval::Index test_split_index(const retrieval::Index& index, const manifest::Manifest& manifest) {
  std::vector<retrieval::Entry> entries;
  std::vector<std::string> missing;
  std::vector<std::string> unlabeled;
  for (const manifest::Record& r : manifest.records) {
    if (r.split != manifest::Split::Test) continue;
    if (r.transcription.empty()) unlabeled.push_back(r.path);
    const auto pos = index.find(r.path);
    if (!pos) {
      missing.push_back(r.path);
      continue;
    }
    retrieval::Entry e = index[*pos];
    if (eval::normalize_label(e.descriptor.label).empty()) unlabeled.push_back(r.path);
    entries.push_back(std::move(e));
  }
  auto listing = [](const std::vector<std::string>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size() && i < 20; ++i) s += " " + ids[i];
    if (ids.size() > 20) s += " ...";
    return s;
  };
  if (!unlabeled.empty()) {
    std::sort(unlabeled.begin(), unlabeled.end());
    unlabeled.erase(std::unique(unlabeled.begin(), unlabeled.end()), unlabeled.end());
    throw PreconditionError(std::to_string(unlabeled.size()) + " test records have no transcription:" + listing(unlabeled));
  }
  if (entries.empty() && missing.empty()) throw PreconditionError("manifest has no test records");
  if (!missing.empty()) {
    throw PreconditionError(std::to_string(missing.size()) + " test records are missing from the index:" + listing(missing));
  }
  return retrieval::Index(index.config(), std::move(entries));
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& /*err*/) {
  options.protocol.scoring.validate();
  const retrieval::Index full = io::load_index(options.index, options.config);
  const manifest::Manifest m = manifest::parse_manifest_file(options.manifest);
  const retrieval::Index test = test_split_index(full, m);

  eval::EvalReport report;
  std::string sweep_lines;
  if (options.lambda_sweep.empty()) {
    report = eval::evaluate(test, options.protocol);
  } else {
    bool have = false;
    for (double lambda : options.lambda_sweep) {
      eval::Protocol p = options.protocol;
      p.scoring.lambda = lambda;
      eval::EvalReport r = eval::evaluate(test, p);
      sweep_lines += "sweep.lambda=" + real(lambda) + " map=" + real(r.mean_average_precision) +
                     " p_at_1=" + real(r.mean_precision_at_1) + " r_precision=" + real(r.mean_r_precision) + "\n";
      out << "lambda " << fixed(lambda, 3) << ": mAP " << fixed(100.0 * r.mean_average_precision, 2) << "%, P@1 "
          << fixed(100.0 * r.mean_precision_at_1, 2) << ", rPrecision " << fixed(100.0 * r.mean_r_precision, 2) << "\n";
      if (!have || r.mean_average_precision > report.mean_average_precision) {
        report = std::move(r);
        have = true;
      }
    }
    sweep_lines += "sweep.best_lambda=" + real(report.protocol.scoring.lambda) + "\n";
  }

  const std::string machine = sweep_lines + eval::format_machine(report);
  out << eval::format_text(report) << machine;
  if (options.report) write_text(*options.report, machine);
  return 0;
}

int cmd_describe(const DescribeOptions& options, std::ostream& out, std::ostream& /*err*/) {
  const GrayImage img = load_gray(options.image);
  const Extraction ex = extract_detailed(img, options.config, options.image.string());

  out << "image: " << options.image.string() << " (" << img.width() << "x" << img.height() << ")\n"
      << "config: " << describe_config(options.config) << "\n"
      << "otsu threshold: " << static_cast<int>(ex.otsu.threshold) << (ex.otsu.degenerate ? " (degenerate)" : "") << "\n"
      << "foreground pixels: " << ex.mask.count() << ", edge pixels: " << ex.edges.count() << "\n"
      << "zones: " << ex.zones.size() << "\n"
      << "zone\tlevel\tleft\ttop\tright\tbottom\tedge_ratio\tempty\n";
  std::size_t offset = 0;
  for (int l = 1; l <= ex.zones.levels(); ++l) {
    for (const Region& r : ex.zones.level(l)) {
      out << offset << '\t' << l << '\t' << r.left << '\t' << r.top << '\t' << r.right << '\t' << r.bottom << '\t'
          << fixed(ex.edge_ratios[offset], 6) << '\t' << (ex.zones.empty(offset) ? "yes" : "no") << '\n';
      ++offset;
    }
  }
  const std::vector<double>& v = ex.descriptor.values;
  const std::size_t bins = static_cast<std::size_t>(options.config.lbp.points + 1);
  out << "dimension: " << v.size() << "\n";
  for (std::size_t z = 0; z * bins < v.size(); ++z) {
    out << "zone " << z << ":";
    for (std::size_t b = 0; b < bins; ++b) out << ' ' << fixed(v[z * bins + b], 6);
    out << '\n';
  }
  if (options.label_png) save_png(*options.label_png, label_raster(ex.labels));
  if (options.zones_png) save_png(*options.zones_png, zone_overlay(img, ex.zones));
  return 0;
}

}  // namespace wordspot::cli
