#include "gecomb/score.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include <json.hpp>

#include "gecomb/error.hpp"

namespace gecomb {

TypeStatsMap match_edits(const M2Corpus& hyp, const M2Corpus& gold, int annotator, TpAttribution attribution) {
  check_aligned(hyp, gold);
  TypeStatsMap stats;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto gold_edits = edits_of(gold.sentences[i], annotator);
    std::vector<bool> used(gold_edits.size(), false);
    for (const auto& h : hyp.sentences[i].edits) {
      const auto key = key_of(i, h);
      bool matched = false;
      for (std::size_t g = 0; g < gold_edits.size(); ++g) {
        if (!used[g] && key_of(i, gold_edits[g]) == key) {
          used[g] = true;
          matched = true;
          const auto& label = attribution == TpAttribution::kGold ? gold_edits[g].etype : h.etype;
          ++stats[label].tp;
          break;
        }
      }
      if (!matched) ++stats[h.etype].fp;
    }
    for (std::size_t g = 0; g < gold_edits.size(); ++g) {
      if (!used[g]) ++stats[gold_edits[g].etype].fn;
    }
  }
  return stats;
}

double f_beta_from_counts(double tp, double fp, double fn, double beta) {
  if (tp <= 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * tp / ((1.0 + b2) * tp + fp + b2 * fn);
}

double f_beta_from_pr(double precision, double recall, double beta) {
  if (precision <= 0.0 || recall <= 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

Score score_counts(const TypeStats& s, double beta) {
  Score out;
  out.beta = beta;
  const auto tp = static_cast<double>(s.tp);
  out.precision = s.tp + s.fp > 0 ? tp / static_cast<double>(s.tp + s.fp) : 0.0;
  out.recall = s.tp + s.fn > 0 ? tp / static_cast<double>(s.tp + s.fn) : 0.0;
  out.f_beta = f_beta_from_counts(tp, static_cast<double>(s.fp), static_cast<double>(s.fn), beta);
  return out;
}

ScoreReport score_corpus(const M2Corpus& hyp, const M2Corpus& gold, double beta, int annotator) {
  ScoreReport report;
  report.counts = match_edits(hyp, gold, annotator);
  for (const auto& [type, counts] : report.counts) {
    report.total += counts;
    report.per_type[type] = score_counts(counts, beta);
  }
  report.overall = score_counts(report.total, beta);
  return report;
}

namespace {

std::vector<std::string> rows_by_gold_frequency(const ScoreReport& report) {
  std::vector<std::string> types;
  for (const auto& [type, _] : report.counts) types.push_back(type);
  std::stable_sort(types.begin(), types.end(), [&](const std::string& a, const std::string& b) {
    const auto& ca = report.counts.at(a);
    const auto& cb = report.counts.at(b);
    return ca.tp + ca.fn > cb.tp + cb.fn;
  });
  return types;
}

std::string table_row(const std::string& type, const TypeStats& c, const Score& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %7lld %7lld %7lld %8.4f %8.4f %8.4f\n", type.c_str(),
                static_cast<long long>(c.tp), static_cast<long long>(c.fp), static_cast<long long>(c.fn), s.precision,
                s.recall, s.f_beta);
  return buf;
}

}  // namespace

std::string format_report(const ScoreReport& report) {
  char header[160];
  char fcol[16];
  std::snprintf(fcol, sizeof fcol, "F%.2g", report.overall.beta);
  std::snprintf(header, sizeof header, "%-16s %7s %7s %7s %8s %8s %8s\n", "type", "TP", "FP", "FN", "P", "R", fcol);
  std::string out = header;
  for (const auto& type : rows_by_gold_frequency(report)) {
    out += table_row(type, report.counts.at(type), report.per_type.at(type));
  }
  out += table_row("overall", report.total, report.overall);
  return out;
}

std::string format_report_json(const ScoreReport& report) {
  auto row = [](const TypeStats& c, const Score& s) {
    nlohmann::ordered_json j;
    j["tp"] = c.tp;
    j["fp"] = c.fp;
    j["fn"] = c.fn;
    j["precision"] = s.precision;
    j["recall"] = s.recall;
    j["f_beta"] = s.f_beta;
    return j;
  };
  nlohmann::ordered_json out;
  out["beta"] = report.overall.beta;
  out["overall"] = row(report.total, report.overall);
  auto types = nlohmann::ordered_json::array();
  for (const auto& type : rows_by_gold_frequency(report)) {
    auto j = row(report.counts.at(type), report.per_type.at(type));
    j["type"] = type;
    types.push_back(std::move(j));
  }
  out["types"] = std::move(types);
  return out.dump(2) + "\n";
}

double precision_stability(std::int64_t n_samples, double prec_dev, double delta) {
  const auto n = static_cast<double>(n_samples);
  const double q = 1.0 - prec_dev;
  // Comparisons are made on counts (|k - n p| >= n delta) with a small slack so
  // that decimal inputs such as p = 0.9, delta = 0.05 hit their exact boundary.
  constexpr double kSlack = 1e-9;
  double total = 0.0;
  double log_choose = 0.0;  // log C(n, k), updated incrementally
  for (std::int64_t k = 0; k <= n_samples; ++k) {
    if (k > 0) log_choose += std::log(static_cast<double>(n_samples - k + 1)) - std::log(static_cast<double>(k));
    if (std::fabs(static_cast<double>(k) - n * prec_dev) < n * delta - kSlack) continue;
    double pk;
    if (prec_dev == 0.0) {
      pk = k == 0 ? 1.0 : 0.0;
    } else if (q == 0.0) {
      pk = k == n_samples ? 1.0 : 0.0;
    } else {
      pk = std::exp(log_choose + static_cast<double>(k) * std::log(prec_dev) +
                    static_cast<double>(n_samples - k) * std::log(q));
    }
    total += pk;
  }
  return std::min(total, 1.0);
}

}  // namespace gecomb
