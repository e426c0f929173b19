#pragma once

// Exact-identity edit matching against a gold corpus and F-beta scoring.

#include <cstdint>
#include <map>
#include <string>

#include "gecomb/m2.hpp"

namespace gecomb {

inline constexpr double kDefaultBeta = 0.5;

struct TypeStats {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  TypeStats& operator+=(const TypeStats& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const TypeStats&, const TypeStats&) = default;
};

using TypeStatsMap = std::map<std::string, TypeStats>;

struct Score {
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double beta = kDefaultBeta;
};

// Which edit's label a true positive is booked under.
enum class TpAttribution { kGold, kHypothesis };

// All hypothesis edits are scored; gold edits are restricted to `annotator`.
// A hypothesis edit is a true positive iff a gold edit with the same EditKey
// is still unmatched. FP go to the hypothesis label and FN to the gold label.
TypeStatsMap match_edits(const M2Corpus& hyp, const M2Corpus& gold, int annotator = 0,
                         TpAttribution attribution = TpAttribution::kGold);

// (1+b^2) tp / ((1+b^2) tp + fp + b^2 fn); 0 when tp == 0.
double f_beta_from_counts(double tp, double fp, double fn, double beta);

// (1+b^2) P R / (b^2 P + R); 0 when P or R is 0.
double f_beta_from_pr(double precision, double recall, double beta);

Score score_counts(const TypeStats& stats, double beta);

struct ScoreReport {
  TypeStats total;
  Score overall;
  TypeStatsMap counts;
  std::map<std::string, Score> per_type;
};

ScoreReport score_corpus(const M2Corpus& hyp, const M2Corpus& gold, double beta = kDefaultBeta, int annotator = 0);

// Fixed-width table: type, TP, FP, FN, P, R, F; rows by descending gold
// frequency (tp+fn), then type name; overall row last.
std::string format_report(const ScoreReport& report);
// Same fields as JSON.
std::string format_report_json(const ScoreReport& report);

// With X ~ Binomial(n, p), the probability that |X/n - p| >= delta.
double precision_stability(std::int64_t n_samples, double prec_dev, double delta);

}  // namespace gecomb
