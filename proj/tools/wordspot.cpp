// wordspot: learning-free query-by-example word spotting.
//
//   wordspot index     --manifest words.tsv --output words.idx [--split test]
//   wordspot query     --index words.idx --image query.png --k 20
//   wordspot evaluate  --index words.idx --manifest words.tsv [--lambda-sweep 0,0.05,0.1,0.2,0.5]
//   wordspot describe  --image word.png [--dump-labels l.png] [--dump-zones z.png]
//
// Every flag can also be set through an environment variable: WORDSPOT_ followed by the
// flag name upper-cased with dashes turned into underscores (WORDSPOT_LAMBDA, WORDSPOT_LBP_P).

#include <cctype>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wordspot/commands.hpp"
#include "wordspot/error.hpp"

namespace {

using namespace wordspot;

std::string env_name(std::string flag) {
  std::string out = "WORDSPOT_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name))->capture_default_str();
}

struct ConfigFlags {
  DescriptorConfig config;
  std::string mode = "block3x3";
  std::string edge = "zone";

  void attach(CLI::App* app) {
    flag(app, "median-radius", config.median_radius, "median filter radius in pixels (0 disables)")
        ->check(CLI::Range(0, 32));
    flag(app, "lbp-p", config.lbp.points, "LBP neighbor count")->check(CLI::Range(4, lbp::kMaxPoints));
    flag(app, "lbp-r", config.lbp.radius, "LBP radius in pixels")->check(CLI::Range(1.0, 64.0));
    flag(app, "lbp-t", config.lbp.threshold, "LBP difference threshold")->check(CLI::NonNegativeNumber);
    flag(app, "lbp-mode", mode, "LBP sampling")->check(CLI::IsMember({"block3x3", "circular"}));
    flag(app, "levels", config.levels, "quad-tree levels")->check(CLI::Range(1, 6));
    flag(app, "edge-ratio", edge, "edge ratio normalization")->check(CLI::IsMember({"zone", "global"}));
  }

  DescriptorConfig resolve() {
    config.lbp.mode = lbp::parse_mode(mode);
    config.edge_ratio = parse_edge_ratio(edge);
    config.validate();
    return config;
  }
};

struct ScoreFlags {
  retrieval::ScoreOptions scoring;
  double width_filter = -1.0;

  void attach(CLI::App* app) {
    flag(app, "lambda", scoring.lambda, "width-ratio penalty weight")->check(CLI::NonNegativeNumber);
    flag(app, "width-filter", width_filter, "drop candidates whose width ratio min/max is below this value")
        ->check(CLI::Range(0.0, 1.0));
  }

  retrieval::ScoreOptions resolve() {
    if (width_filter >= 0.0) scoring.width_filter = width_filter;
    return scoring;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning-free word spotting with spatially pooled uniform LBP descriptors"};
  app.require_subcommand(1);

  // index
  cli::IndexOptions index_opts;
  ConfigFlags index_cfg;
  std::string split = "all";
  std::string index_manifest;
  std::string index_output;
  unsigned threads = 0;
  CLI::App* index_cmd = app.add_subcommand("index", "extract descriptors for a manifest and write an index file");
  flag(index_cmd, "manifest", index_manifest, "TSV manifest")->required();
  flag(index_cmd, "output", index_output, "index file to write")->required();
  flag(index_cmd, "split", split, "records to index")->check(CLI::IsMember({"train", "test", "all"}));
  flag(index_cmd, "threads", threads, "worker threads (0 = all cores)");
  index_cfg.attach(index_cmd);
  // Lambda is a query-time weight; accepted here so shared flag sets work, but never stored.
  double index_lambda = 0.1;
  flag(index_cmd, "lambda", index_lambda, "query-time width penalty weight (not stored in the index)")
      ->check(CLI::NonNegativeNumber);

  // query
  cli::QueryOptions query_opts;
  ConfigFlags query_cfg;
  ScoreFlags query_score;
  std::string query_index;
  std::string query_image;
  CLI::App* query_cmd = app.add_subcommand("query", "rank an index against a query word image");
  flag(query_cmd, "index", query_index, "index file")->required();
  flag(query_cmd, "image", query_image, "query word image")->required();
  flag(query_cmd, "k", query_opts.k, "number of results")->check(CLI::PositiveNumber);
  query_cfg.attach(query_cmd);
  query_score.attach(query_cmd);

  // evaluate
  cli::EvaluateOptions eval_opts;
  ConfigFlags eval_cfg;
  ScoreFlags eval_score;
  std::string eval_index;
  std::string eval_manifest;
  std::string eval_report;
  std::string exclude_self = "on";
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "issue every test word as a query and report mAP, P@1, rPrecision");
  flag(eval_cmd, "index", eval_index, "index file")->required();
  flag(eval_cmd, "manifest", eval_manifest, "TSV manifest selecting the test split")->required();
  flag(eval_cmd, "exclude-self", exclude_self, "drop the query word from its own ranking")
      ->check(CLI::IsMember({"on", "off"}));
  flag(eval_cmd, "report", eval_report, "also write the key=value report to this file");
  eval_cmd->add_option("--lambda-sweep", eval_opts.lambda_sweep, "comma-separated lambdas; reports the best mAP")
      ->delimiter(',')
      ->envname("WORDSPOT_LAMBDA_SWEEP");
  flag(eval_cmd, "threads", eval_opts.protocol.threads, "worker threads (0 = all cores)");
  eval_cfg.attach(eval_cmd);
  eval_score.attach(eval_cmd);

  // describe
  cli::DescribeOptions describe_opts;
  ConfigFlags describe_cfg;
  std::string describe_image;
  std::string dump_labels;
  std::string dump_zones;
  CLI::App* describe_cmd = app.add_subcommand("describe", "print zone geometry, edge ratios and the descriptor of one image");
  flag(describe_cmd, "image", describe_image, "word image")->required();
  flag(describe_cmd, "dump-labels", dump_labels, "write the LBP label map as PNG");
  flag(describe_cmd, "dump-zones", dump_zones, "write the zone overlay as PNG");
  describe_cfg.attach(describe_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*index_cmd) {
      index_opts.manifest = index_manifest;
      index_opts.output = index_output;
      index_opts.config = index_cfg.resolve();
      index_opts.threads = threads;
      if (split == "train") index_opts.split = manifest::Split::Train;
      if (split == "test") index_opts.split = manifest::Split::Test;
      return cli::cmd_index(index_opts, std::cout, std::cerr);
    }
    if (*query_cmd) {
      query_opts.index = query_index;
      query_opts.image = query_image;
      query_opts.config = query_cfg.resolve();
      query_opts.scoring = query_score.resolve();
      return cli::cmd_query(query_opts, std::cout, std::cerr);
    }
    if (*eval_cmd) {
      eval_opts.index = eval_index;
      eval_opts.manifest = eval_manifest;
      eval_opts.config = eval_cfg.resolve();
      eval_opts.protocol.scoring = eval_score.resolve();
      eval_opts.protocol.exclude_self = exclude_self == "on";
      if (!eval_report.empty()) eval_opts.report = eval_report;
      return cli::cmd_evaluate(eval_opts, std::cout, std::cerr);
    }
    if (*describe_cmd) {
      describe_opts.image = describe_image;
      describe_opts.config = describe_cfg.resolve();
      if (!dump_labels.empty()) describe_opts.label_png = dump_labels;
      if (!dump_zones.empty()) describe_opts.zones_png = dump_zones;
      return cli::cmd_describe(describe_opts, std::cout, std::cerr);
    }
  } catch (const ConfigMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
