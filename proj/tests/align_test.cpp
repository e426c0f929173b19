#include <gtest/gtest.h>

#include "gecomb/align.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace gecomb {
namespace {

using Kind = AlignmentOp::Kind;

std::vector<Kind> kinds(const std::vector<AlignmentOp>& ops) {
  std::vector<Kind> out;
  for (const auto& op : ops) out.push_back(op.kind);
  return out;
}

TEST(AlignTokens, Substitution) {
  const Tokens s{"He", "go", "home"};
  const Tokens t{"He", "goes", "home"};
  const auto ops = align_tokens(s, t);
  EXPECT_EQ(kinds(ops), (std::vector<Kind>{Kind::kMatch, Kind::kSubstitute, Kind::kMatch}));
  EXPECT_EQ(alignment_cost(ops, s, t), testing::brute_force_alignment_cost(s, t));
}

TEST(AlignTokens, IdentityIsAllMatch) {
  const Tokens s{"a", "b", "c"};
  EXPECT_EQ(kinds(align_tokens(s, s)), (std::vector<Kind>(3, Kind::kMatch)));
}

TEST(AlignTokens, SingleDeletion) {
  EXPECT_EQ(kinds(align_tokens(Tokens{"a", "b"}, Tokens{"a"})), (std::vector<Kind>{Kind::kMatch, Kind::kDelete}));
}

TEST(AlignTokens, EmptySides) {
  EXPECT_TRUE(align_tokens(Tokens{}, Tokens{}).empty());
  EXPECT_EQ(kinds(align_tokens(Tokens{}, Tokens{"x"})), (std::vector<Kind>{Kind::kInsert}));
}

TEST(AlignTokens, CaseVariantsPreferSubstitution) {
  // "the" -> "The" costs half a substitution, cheaper than delete + insert.
  const auto ops = align_tokens(Tokens{"the", "cat"}, Tokens{"The", "cat"});
  EXPECT_EQ(kinds(ops), (std::vector<Kind>{Kind::kSubstitute, Kind::kMatch}));
}

TEST(AlignTokens, CostMatchesExhaustiveSearchOnShortInputs) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = testing::random_tokens(rng, 0, 6);
    const auto t = testing::random_tokens(rng, 0, 6);
    const auto ops = align_tokens(s, t);
    EXPECT_EQ(alignment_cost(ops, s, t), testing::brute_force_alignment_cost(s, t));
    // ops partition both sequences in order
    int si = 0;
    int ti = 0;
    for (const auto& op : ops) {
      EXPECT_EQ(op.src_begin, si);
      EXPECT_EQ(op.tgt_begin, ti);
      si = op.src_end;
      ti = op.tgt_end;
    }
    EXPECT_EQ(si, static_cast<int>(s.size()));
    EXPECT_EQ(ti, static_cast<int>(t.size()));
  }
}

TEST(ExtractEdits, SubstitutionReproducesTarget) {
  const Tokens s{"He", "go", "home"};
  const Tokens t{"He", "goes", "home"};
  const auto edits = extract_edits(s, t);
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].start, 1);
  EXPECT_EQ(edits[0].end, 2);
  EXPECT_EQ(edits[0].replacement, "goes");
  // go -> goes is two character insertions and "go" is not in the (empty)
  // dictionary, so the coarse typer calls it a spelling change.
  EXPECT_EQ(edits[0].etype, "R:SPELL");
  EXPECT_EQ(apply_edits(s, edits), t);
}

TEST(ExtractEdits, IdenticalIsEmpty) {
  const Tokens s{"a", "b"};
  EXPECT_TRUE(extract_edits(s, s).empty());
}

TEST(ExtractEdits, InsertionBeforeToken) {
  const auto edits = extract_edits(Tokens{"I", "saw", "dog"}, Tokens{"I", "saw", "a", "dog"});
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0], (Edit{2, 2, "M:DET", "a", 0}));
}

TEST(ExtractEdits, AdjacentChangesMerge) {
  const auto edits = extract_edits(Tokens{"a", "b", "c", "d"}, Tokens{"a", "x", "y", "d"});
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].start, 1);
  EXPECT_EQ(edits[0].end, 3);
  EXPECT_EQ(edits[0].replacement, "x y");
}

TEST(ExtractEdits, SoundOnRandomPerturbations) {
  Rng rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = testing::random_tokens(rng, 0, 12);
    const auto t = testing::perturb(rng, s);
    const auto edits = extract_edits(s, t);
    EXPECT_EQ(apply_edits(s, edits), t);
  }
}

TEST(ClassifyEdit, Rules) {
  const WordSet dict{"good"};
  EXPECT_EQ(classify_edit(Tokens{}, Tokens{"the"}), "M:DET");
  EXPECT_EQ(classify_edit(Tokens{"god"}, Tokens{"good"}, dict), "R:SPELL");
  EXPECT_EQ(classify_edit(Tokens{"."}, Tokens{","}), "R:PUNCT");
  EXPECT_EQ(classify_edit(Tokens{","}, Tokens{}), "U:PUNCT");
  EXPECT_EQ(classify_edit(Tokens{"the"}, Tokens{"The"}), "R:ORTH");
  EXPECT_EQ(classify_edit(Tokens{"every", "one"}, Tokens{"everyone"}), "R:ORTH");
  EXPECT_EQ(classify_edit(Tokens{"a"}, Tokens{"the"}), "R:DET");
  EXPECT_EQ(classify_edit(Tokens{"in"}, Tokens{"on"}), "R:PREP");
  EXPECT_EQ(classify_edit(Tokens{"at"}, Tokens{}), "U:PREP");
  EXPECT_EQ(classify_edit(Tokens{"go"}, Tokens{"went"}), "R:OTHER");
  // in the dictionary, so not a misspelling
  EXPECT_EQ(classify_edit(Tokens{"good"}, Tokens{"god"}, dict), "R:OTHER");
  EXPECT_EQ(classify_edit(Tokens{"big", "dog"}, Tokens{"large", "dog"}), "R:OTHER");
}

TEST(ClassifyEdit, Deterministic) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = testing::random_tokens(rng, 0, 2);
    auto t = testing::random_tokens(rng, s.empty() ? 1 : 0, 2);
    EXPECT_EQ(classify_edit(s, t), classify_edit(s, t));
  }
}

TEST(DamerauLevenshtein, AgreesWithLevenshteinWithoutTranspositions) {
  EXPECT_EQ(damerau_levenshtein("god", "good"), 1);
  EXPECT_EQ(damerau_levenshtein("teh", "the"), 1);
  EXPECT_EQ(testing::levenshtein("teh", "the"), 2);
  EXPECT_EQ(damerau_levenshtein("kitten", "sitting"), testing::levenshtein("kitten", "sitting"));
  EXPECT_EQ(damerau_levenshtein("", "abc"), 3);
}

}  // namespace
}  // namespace gecomb
