#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gecomb/error.hpp"
#include "gecomb/score.hpp"
#include "gecomb/synth.hpp"
#include "support/generators.hpp"

namespace gecomb {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::filesystem::path kData = GECOMB_TEST_DATA_DIR;

ErrorDistribution point_mass(std::size_t k, CorrectionId id) {
  ErrorDistribution d;
  d.per_sentence_hist[k] = 1.0;
  d.correction_freq[std::move(id)] = 1.0;
  return d;
}

TEST(MeasureDistribution, TwoSentenceHistogram) {
  const auto corpus = parse_m2(
      "S a b\n\n"
      "S c d\nA 0 1|||R:X|||e|||REQUIRED|||-NONE-|||0\nA 1 2|||R:X|||e|||REQUIRED|||-NONE-|||0\n");
  const auto d = measure_distribution(corpus);
  EXPECT_EQ(d.per_sentence_hist, (std::map<std::size_t, double>{{0, 0.5}, {2, 0.5}}));
  EXPECT_EQ(d.correction_freq.size(), 2u);  // c->e and d->e
}

TEST(MeasureDistribution, IdenticalEditsArePointMass) {
  const auto corpus = parse_m2(
      "S go\nA 0 1|||R:VERB|||goes|||REQUIRED|||-NONE-|||0\n\n"
      "S go\nA 0 1|||R:VERB|||goes|||REQUIRED|||-NONE-|||0\n");
  const auto d = measure_distribution(corpus);
  ASSERT_EQ(d.correction_freq.size(), 1u);
  EXPECT_DOUBLE_EQ(d.correction_freq.begin()->second, 1.0);
}

TEST(MeasureDistribution, MatchesHandCountedGolden) {
  const auto measured = measure_distribution(read_m2_file((kData / "synth/train.m2").string()));
  const auto golden = distribution_from_json(slurp(kData / "synth/train.dist.json"));
  ASSERT_EQ(measured.per_sentence_hist.size(), golden.per_sentence_hist.size());
  for (const auto& [k, p] : golden.per_sentence_hist) EXPECT_NEAR(measured.per_sentence_hist.at(k), p, 1e-12) << k;
  ASSERT_EQ(measured.correction_freq.size(), golden.correction_freq.size());
  for (const auto& [id, p] : golden.correction_freq) {
    ASSERT_TRUE(measured.correction_freq.contains(id)) << id.source_text << "->" << id.replacement;
    EXPECT_NEAR(measured.correction_freq.at(id), p, 1e-12);
  }
}

TEST(DistributionJson, RoundTrip) {
  const auto d = measure_distribution(read_m2_file((kData / "synth/train.m2").string()));
  const auto text = distribution_to_json(d);
  EXPECT_EQ(distribution_to_json(distribution_from_json(text)), text);
}

TEST(ValidateDistribution, RejectsBadTables) {
  auto d = point_mass(1, {"go", "goes", "R:VERB"});
  EXPECT_NO_THROW(validate_distribution(d));
  d.per_sentence_hist[2] = 0.5;
  EXPECT_THROW(validate_distribution(d), ValidationError);
  d = point_mass(1, {"", "", "X"});
  EXPECT_THROW(validate_distribution(d), ValidationError);
  d = point_mass(1, {"go", "goes", "R:VERB"});
  d.correction_freq.begin()->second = -1.0;
  EXPECT_THROW(validate_distribution(d), ValidationError);
  EXPECT_THROW(distribution_from_json(R"({"per_sentence_hist": {"x": 1}, "corrections": []})"), ValidationError);
}

TEST(GeneratePair, ZeroCorrectionsLeavesSentenceClean) {
  const SentencePool pool(std::vector<Tokens>{{"a", "b"}});
  ErrorDistribution d;
  d.per_sentence_hist[0] = 1.0;
  Rng rng(1);
  const auto pair = generate_pair(pool, d, rng);
  EXPECT_EQ(pair.corrupted, pair.clean);
  EXPECT_TRUE(pair.gold.empty());
}

TEST(GeneratePair, ReplacementIsUndone) {
  const SentencePool pool({{"He", "goes", "home"}});
  Rng rng(2);
  const auto pair = generate_pair(pool, point_mass(1, {"go", "goes", "R:VERB"}), rng);
  EXPECT_EQ(pair.corrupted, (Tokens{"He", "go", "home"}));
  ASSERT_EQ(pair.gold.size(), 1u);
  EXPECT_EQ(pair.gold[0], (Edit{1, 2, "R:VERB", "goes", 0}));
}

TEST(GeneratePair, InsertionCorrectionDeletesOccurrence) {
  const SentencePool pool({{"go", "to", "school"}});
  Rng rng(3);
  const auto pair = generate_pair(pool, point_mass(1, {"", "to", "M:PREP"}), rng);
  EXPECT_EQ(pair.corrupted, (Tokens{"go", "school"}));
  EXPECT_EQ(pair.gold[0], (Edit{1, 1, "M:PREP", "to", 0}));
}

TEST(GeneratePair, DeletionCorrectionInsertsWord) {
  const SentencePool pool({{"a", "b", "c"}});
  Rng rng(4);
  const auto pair = generate_pair(pool, point_mass(1, {"the", "", "U:DET"}), rng);
  ASSERT_EQ(pair.corrupted.size(), 4u);
  ASSERT_EQ(pair.gold.size(), 1u);
  EXPECT_EQ(pair.corrupted[pair.gold[0].start], "the");
  EXPECT_EQ(apply_edits(pair.corrupted, pair.gold), pair.clean);
}

TEST(GeneratePair, ExhaustionCarriesDraw) {
  const SentencePool pool(std::vector<Tokens>{{"a", "b"}});
  Rng rng(5);
  try {
    generate_pair(pool, point_mass(1, {"go", "goes", "R:VERB"}), rng, 5);
    FAIL();
  } catch (const GenerationExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("goes"), std::string::npos) << e.what();
  }
}

TEST(GeneratePair, TwoCorrectionsNeedDisjointOccurrences) {
  // only one "goes": two go->goes corrections cannot both apply
  const SentencePool pool({{"he", "goes"}, {"goes", "and", "goes"}});
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const auto pair = generate_pair(pool, point_mass(2, {"go", "goes", "R:VERB"}), rng);
    EXPECT_EQ(pair.pool_index, 1u);
    EXPECT_EQ(pair.corrupted, (Tokens{"go", "and", "go"}));
  }
}

SentencePool random_pool(Rng& rng, std::size_t n) {
  std::vector<Tokens> sentences;
  for (std::size_t i = 0; i < n; ++i) sentences.push_back(testing::random_tokens(rng, 2, 12));
  return SentencePool(std::move(sentences));
}

ErrorDistribution mixed_distribution() {
  ErrorDistribution d;
  d.per_sentence_hist = {{0, 0.2}, {1, 0.4}, {2, 0.3}, {3, 0.1}};
  d.correction_freq = {
      {{"go", "goes", "R:VERB"}, 0.2}, {{"", "the", "M:DET"}, 0.2}, {{"a", "", "U:DET"}, 0.2},
      {{"in", "on", "R:PREP"}, 0.2},   {{"every one", "everyone", "R:ORTH"}, 0.1}, {{"", "to", "M:PREP"}, 0.1}};
  return d;
}

TEST(GenerateCorpus, ForwardConsistencyAndGoldTexts) {
  Rng rng(7);
  const auto pool = random_pool(rng, 300);
  const auto dist = mixed_distribution();
  const auto corpus = generate_corpus(pool, dist, 500, 99);
  for (std::size_t i = 0; i < corpus.clean.size(); ++i) {
    EXPECT_EQ(apply_edits(corpus.corrupted[i], corpus.gold.sentences[i].edits), corpus.clean[i]);
    for (const auto& e : corpus.gold.sentences[i].edits) {
      const std::span<const Token> toks = corpus.corrupted[i];
      const CorrectionId id{join_tokens(toks.subspan(e.start, e.end - e.start)), e.replacement, e.etype};
      EXPECT_TRUE(dist.correction_freq.contains(id)) << id.source_text << "->" << id.replacement;
    }
  }
  // the gold corpus is valid M2
  EXPECT_EQ(parse_m2(write_m2(corpus.gold)), corpus.gold);
}

TEST(GenerateCorpus, SameSeedSameOutput) {
  Rng rng(8);
  const auto pool = random_pool(rng, 100);
  const auto a = generate_corpus(pool, mixed_distribution(), 100, 5);
  const auto b = generate_corpus(pool, mixed_distribution(), 100, 5);
  const auto c = generate_corpus(pool, mixed_distribution(), 100, 6);
  EXPECT_EQ(write_m2(a.gold), write_m2(b.gold));
  EXPECT_EQ(a.clean, b.clean);
  EXPECT_NE(write_m2(a.gold), write_m2(c.gold));
}

TEST(GenerateCorpus, SelfScoreIsPerfectWhenEditsExist) {
  Rng rng(9);
  const auto pool = random_pool(rng, 50);
  const auto corpus = generate_corpus(pool, mixed_distribution(), 50, 3);
  const auto report = score_corpus(corpus.gold, corpus.gold);
  ASSERT_GT(report.total.tp, 0);
  EXPECT_DOUBLE_EQ(report.overall.f_beta, 1.0);
}

TEST(WriteSynthetic, EmitsThreeFiles) {
  const SentencePool pool({{"He", "goes", "home"}});
  const auto corpus = generate_corpus(pool, point_mass(1, {"go", "goes", "R:VERB"}), 2, 1);
  const auto dir = std::filesystem::temp_directory_path() / "gecomb_synth_test";
  std::filesystem::create_directories(dir);
  const auto prefix = (dir / "out").string();
  write_synthetic(prefix, corpus);
  EXPECT_EQ(slurp(prefix + ".src"), "He go home\nHe go home\n");
  EXPECT_EQ(slurp(prefix + ".trg"), "He goes home\nHe goes home\n");
  EXPECT_EQ(read_m2_file(prefix + ".m2"), corpus.gold);
  std::filesystem::remove_all(dir);
}

TEST(GenerateCorpus, RejectsZeroSentences) {
  const SentencePool pool(std::vector<Tokens>{{"a"}});
  ErrorDistribution d;
  d.per_sentence_hist[0] = 1.0;
  EXPECT_THROW(generate_corpus(pool, d, 0, 1), ValidationError);
}

}  // namespace
}  // namespace gecomb
