#include <gtest/gtest.h>

#include <json.hpp>

#include "gecomb/m2.hpp"
#include "gecomb/score.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace gecomb {
namespace {

struct ReferenceRow {
  double precision;
  double recall;
  double f05;
};

class ReferenceFScores : public ::testing::TestWithParam<ReferenceRow> {};

TEST_P(ReferenceFScores, CountsFormReproducesReportedF) {
  const auto row = GetParam();
  // tp = 1 with fp, fn chosen so the counts realise (P, R).
  const double fp = (1.0 - row.precision) / row.precision;
  const double fn = (1.0 - row.recall) / row.recall;
  EXPECT_NEAR(f_beta_from_counts(1.0, fp, fn, 0.5), row.f05, 5e-4);
  EXPECT_NEAR(f_beta_from_pr(row.precision, row.recall, 0.5), row.f05, 5e-4);
}

INSTANTIATE_TEST_SUITE_P(Reported, ReferenceFScores,
                         ::testing::Values(ReferenceRow{0.6721, 0.5297, 0.6378}, ReferenceRow{0.4788, 0.1544, 0.3371},
                                           ReferenceRow{0.5336, 0.6977, 0.5599}));

TEST(FBeta, ZeroTruePositivesIsZero) {
  EXPECT_EQ(f_beta_from_counts(0, 5, 5, 0.5), 0.0);
  EXPECT_EQ(f_beta_from_counts(0, 0, 0, 0.5), 0.0);
  EXPECT_EQ(f_beta_from_pr(0.0, 0.3, 0.5), 0.0);
}

TEST(FBeta, AgreesWithPrecisionRecallForm) {
  Rng rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const double tp = static_cast<double>(rng.uniform_below(50));
    const double fp = static_cast<double>(rng.uniform_below(50));
    const double fn = static_cast<double>(rng.uniform_below(50));
    const double beta = 0.25 + 2.0 * rng.uniform01();
    EXPECT_NEAR(f_beta_from_counts(tp, fp, fn, beta), testing::f_beta_oracle(tp, fp, tp + fn, beta), 1e-12);
  }
}

TEST(FBeta, MonotoneInCounts) {
  Rng rng(32);
  for (int trial = 0; trial < 1000; ++trial) {
    const double tp = 1.0 + static_cast<double>(rng.uniform_below(40));
    const double fp = static_cast<double>(rng.uniform_below(40));
    const double fn = static_cast<double>(rng.uniform_below(40));
    const double f = f_beta_from_counts(tp, fp, fn, 0.5);
    EXPECT_GE(f_beta_from_counts(tp + 1, fp, fn, 0.5), f);
    EXPECT_LE(f_beta_from_counts(tp, fp + 1, fn, 0.5), f);
    EXPECT_LE(f_beta_from_counts(tp, fp, fn + 1, 0.5), f);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
}

TEST(MatchEdits, OneHitOneMissOneSpurious) {
  const auto gold = parse_m2(
      "S a b c\n"
      "A 0 1|||T|||x|||REQUIRED|||-NONE-|||0\n"
      "A 2 3|||T|||y|||REQUIRED|||-NONE-|||0\n");
  const auto hyp = parse_m2(
      "S a b c\n"
      "A 0 1|||T|||x|||REQUIRED|||-NONE-|||0\n"
      "A 1 2|||T|||z|||REQUIRED|||-NONE-|||0\n");
  const auto report = score_corpus(hyp, gold);
  EXPECT_EQ(report.counts.at("T"), (TypeStats{1, 1, 1}));
  EXPECT_DOUBLE_EQ(report.overall.precision, 0.5);
  EXPECT_DOUBLE_EQ(report.overall.recall, 0.5);
  EXPECT_DOUBLE_EQ(report.overall.f_beta, 0.5);
}

TEST(MatchEdits, TypeIsIgnoredForMatchingButLabelsTruePositive) {
  const auto gold = parse_m2("S a b\nA 0 1|||GOLD|||x|||REQUIRED|||-NONE-|||0\n");
  const auto hyp = parse_m2("S a b\nA 0 1|||HYP|||x|||REQUIRED|||-NONE-|||0\n");
  auto stats = match_edits(hyp, gold);
  EXPECT_EQ(stats.at("GOLD").tp, 1);
  EXPECT_EQ(stats.count("HYP"), 0u);
  stats = match_edits(hyp, gold, 0, TpAttribution::kHypothesis);
  EXPECT_EQ(stats.at("HYP").tp, 1);
}

TEST(MatchEdits, GoldFilteredByAnnotator) {
  const auto gold = parse_m2(
      "S a b\n"
      "A 0 1|||T|||x|||REQUIRED|||-NONE-|||0\n"
      "A 0 1|||T|||y|||REQUIRED|||-NONE-|||1\n");
  const auto hyp = parse_m2("S a b\nA 0 1|||T|||y|||REQUIRED|||-NONE-|||0\n");
  EXPECT_EQ(match_edits(hyp, gold, 0).at("T"), (TypeStats{0, 1, 1}));
  EXPECT_EQ(match_edits(hyp, gold, 1).at("T"), (TypeStats{1, 0, 0}));
}

TEST(MatchEdits, TotalsAreConserved) {
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const auto fx = testing::random_system_fixture(rng, 8, 1);
    const auto& hyp = fx.systems[0].corpus;
    const auto stats = match_edits(hyp, fx.gold);
    TypeStats total;
    for (const auto& [_, s] : stats) total += s;
    std::int64_t hyp_edits = 0;
    std::int64_t gold_edits = 0;
    for (const auto& s : hyp.sentences) hyp_edits += static_cast<std::int64_t>(s.edits.size());
    for (const auto& s : fx.gold.sentences) gold_edits += static_cast<std::int64_t>(s.edits.size());
    EXPECT_EQ(total.tp + total.fp, hyp_edits);
    EXPECT_EQ(total.tp + total.fn, gold_edits);
  }
}

TEST(ScoreCorpus, GoldAgainstItselfIsPerfect) {
  Rng rng(34);
  const auto corpus = testing::random_corpus(rng, 20);
  const auto report = score_corpus(corpus, corpus);
  if (report.total.tp > 0) {
    EXPECT_DOUBLE_EQ(report.overall.f_beta, 1.0);
  }
  EXPECT_EQ(report.total.fp, 0);
  EXPECT_EQ(report.total.fn, 0);
}

TEST(FormatReport, OverallRowLastAndSortedByGoldCount) {
  const auto gold = parse_m2(
      "S a b c\n"
      "A 0 1|||RARE|||x|||REQUIRED|||-NONE-|||0\n"
      "A 1 2|||COMMON|||y|||REQUIRED|||-NONE-|||0\n"
      "A 2 3|||COMMON|||z|||REQUIRED|||-NONE-|||0\n");
  const auto report = score_corpus(gold, gold);
  const auto text = format_report(report);
  EXPECT_LT(text.find("COMMON"), text.find("RARE"));
  EXPECT_LT(text.find("RARE"), text.find("overall"));
  EXPECT_NE(text.find("F0.5"), std::string::npos);

  const auto json = nlohmann::json::parse(format_report_json(report));
  EXPECT_EQ(json["overall"]["tp"], 3);
  EXPECT_EQ(json["types"][0]["type"], "COMMON");
}

TEST(PrecisionStability, TwentySamplesAtHalf) {
  // exact binomial: P(|X/20 - 0.5| >= 0.15) = 2 * P(X <= 7) for X ~ Bin(20, 0.5)
  EXPECT_NEAR(precision_stability(20, 0.5, 0.15), 0.263176, 1e-6);
  // n = 50: |X - 25| >= 7.5, so 2 * P(X <= 17)
  EXPECT_NEAR(precision_stability(50, 0.5, 0.15), 0.032839, 1e-6);
}

TEST(PrecisionStability, DegenerateProbabilities) {
  EXPECT_DOUBLE_EQ(precision_stability(10, 0.0, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(precision_stability(10, 1.0, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(precision_stability(10, 0.5, 0.0), 1.0);
}

TEST(PrecisionStability, DecreasesWithSampleSize) {
  // Along even n the lattice point k = n/2 is always available, so the tail
  // shrinks monotonically.
  double prev = 1.0;
  for (int n = 10; n <= 200; n += 10) {
    const double v = precision_stability(n, 0.5, 0.15);
    EXPECT_LE(v, prev + 1e-12) << n;
    prev = v;
  }
}

}  // namespace
}  // namespace gecomb
