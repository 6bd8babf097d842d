#include "wordspot/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <memory>
#include <sstream>

#include "parallel.hpp"
#include "wordspot/error.hpp"

namespace wordspot::eval {

namespace {

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

}  // namespace

PrecisionRecall precision_recall(const std::set<std::string>& retrieved, const std::set<std::string>& relevant) {
  std::size_t hits = 0;
  for (const std::string& id : retrieved) hits += relevant.count(id);
  PrecisionRecall out;
  if (!retrieved.empty()) out.precision = static_cast<double>(hits) / static_cast<double>(retrieved.size());
  if (!relevant.empty()) out.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  return out;
}

RPrecision r_precision(std::span<const bool> relevance, std::size_t relevant_count) {
  if (relevant_count == 0) throw PreconditionError("rPrecision needs at least one relevant item");
  const std::size_t n = std::min(relevant_count, relevance.size());
  const auto hits = static_cast<std::size_t>(std::count(relevance.begin(), relevance.begin() + static_cast<std::ptrdiff_t>(n), true));
  return RPrecision{static_cast<double>(hits) / static_cast<double>(relevant_count), relevance.size() < relevant_count};
}

double average_precision(std::span<const bool> relevance, std::size_t relevant_count) {
  if (relevant_count == 0) throw PreconditionError("average precision needs at least one relevant item");
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t n = 0; n < relevance.size(); ++n) {
    if (!relevance[n]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(n + 1);
  }
  return sum / static_cast<double>(relevant_count);
}

std::string normalize_label(std::string_view label) {
  const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
  while (!label.empty() && space(label.front())) label.remove_prefix(1);
  while (!label.empty() && space(label.back())) label.remove_suffix(1);
  std::string out(label);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

EvalReport evaluate(const retrieval::Index& index, const Protocol& protocol) {
  protocol.scoring.validate();
  if (index.empty()) throw PreconditionError("cannot evaluate an empty index");

  std::vector<std::string> labels;
  labels.reserve(index.size());
  std::vector<std::string> unlabeled;
  for (const retrieval::Entry& e : index.entries()) {
    labels.push_back(normalize_label(e.descriptor.label));
    if (labels.back().empty()) unlabeled.push_back(e.id);
  }
  if (!unlabeled.empty()) {
    std::string msg = "cannot evaluate: " + std::to_string(unlabeled.size()) + " entries have no transcription:";
    for (std::size_t i = 0; i < unlabeled.size() && i < 20; ++i) msg += " " + unlabeled[i];
    if (unlabeled.size() > 20) msg += " ...";
    throw PreconditionError(msg);
  }

  const auto start = std::chrono::steady_clock::now();
  EvalReport report;
  report.protocol = protocol;
  report.queries.resize(index.size());
  detail::parallel_for(index.size(), protocol.threads, [&](std::size_t qi) {
    const retrieval::Entry& q = index[qi];
    std::optional<std::string_view> exclude;
    if (protocol.exclude_self) exclude = q.id;
    const retrieval::RankedList ranked =
        retrieval::query(index, q.descriptor, index.size(), protocol.scoring, exclude, q.id);

    std::size_t relevant = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (protocol.exclude_self && i == qi) continue;
      relevant += labels[i] == labels[qi] ? 1 : 0;
    }
    // std::vector<bool> is not contiguous, so the flags live in a plain array.
    const std::size_t n_ranked = ranked.items.size();
    const auto flags = std::make_unique<bool[]>(n_ranked + 1);
    for (std::size_t i = 0; i < n_ranked; ++i) flags[i] = labels[ranked.items[i].entry] == labels[qi];
    const std::span<const bool> rel(flags.get(), n_ranked);

    QueryResult& out = report.queries[qi];
    out.id = q.id;
    out.relevant_count = relevant;
    out.precision_at_1 = !rel.empty() && rel[0] ? 1.0 : 0.0;
    if (relevant > 0) {
      out.average_precision = average_precision(rel, relevant);
      const RPrecision rp = r_precision(rel, relevant);
      out.r_precision = rp.value;
      out.r_precision_truncated = rp.truncated;
    }
  });
  report.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  double ap_sum = 0.0;
  double p1_sum = 0.0;
  double p1_all_sum = 0.0;
  double rp_sum = 0.0;
  for (const QueryResult& q : report.queries) {
    p1_all_sum += q.precision_at_1;
    if (!q.scoreable()) continue;
    ++report.scoreable_count;
    ap_sum += q.average_precision;
    p1_sum += q.precision_at_1;
    rp_sum += q.r_precision;
    report.truncated_count += q.r_precision_truncated ? 1 : 0;
  }
  report.query_count = report.queries.size();
  report.mean_precision_at_1_all = p1_all_sum / static_cast<double>(report.query_count);
  if (report.scoreable_count > 0) {
    const auto n = static_cast<double>(report.scoreable_count);
    report.mean_average_precision = ap_sum / n;
    report.mean_precision_at_1 = p1_sum / n;
    report.mean_r_precision = rp_sum / n;
  }
  return report;
}

std::string format_text(const EvalReport& report) {
  std::ostringstream os;
  os << "queries:             " << report.query_count << " (" << report.scoreable_count << " with relevant items, "
     << report.query_count - report.scoreable_count << " without)\n";
  if (report.scoreable_count == 0) {
    os << "no scoreable queries: every transcription is unique\n";
  } else {
    os << "mAP:                 " << percent(report.mean_average_precision) << "%\n"
       << "accuracy (P@1):      " << percent(report.mean_precision_at_1) << "\n"
       << "accuracy (P@1, all): " << percent(report.mean_precision_at_1_all) << "\n"
       << "rPrecision:          " << percent(report.mean_r_precision) << "\n";
  }
  os << "lambda:              " << real(report.protocol.scoring.lambda) << "\n";
  if (report.protocol.scoring.width_filter) os << "width filter:        " << real(*report.protocol.scoring.width_filter) << "\n";
  os << "exclude self:        " << (report.protocol.exclude_self ? "on" : "off") << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", report.total_seconds);
  os << "query time:          " << buf << " s\n";
  return os.str();
}

std::string format_machine(const EvalReport& report) {
  std::ostringstream os;
  os << "metric.queries=" << report.query_count << "\n"
     << "metric.scoreable_queries=" << report.scoreable_count << "\n"
     << "metric.map=" << real(report.mean_average_precision) << "\n"
     << "metric.p_at_1=" << real(report.mean_precision_at_1) << "\n"
     << "metric.p_at_1_all=" << real(report.mean_precision_at_1_all) << "\n"
     << "metric.r_precision=" << real(report.mean_r_precision) << "\n"
     << "metric.r_precision_truncated=" << report.truncated_count << "\n"
     << "protocol.lambda=" << real(report.protocol.scoring.lambda) << "\n"
     << "protocol.width_filter="
     << (report.protocol.scoring.width_filter ? real(*report.protocol.scoring.width_filter) : std::string("off")) << "\n"
     << "protocol.exclude_self=" << (report.protocol.exclude_self ? "on" : "off") << "\n"
     << "timing.query_seconds=" << real(report.total_seconds) << "\n";
  return os.str();
}

std::map<std::string, std::string> parse_machine(std::string_view text) {
  std::map<std::string, std::string> out;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) continue;
    out[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
  }
  return out;
}

}  // namespace wordspot::eval
