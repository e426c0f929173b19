#pragma once

// Edit extraction from (source, corrected) sentence pairs via token-level
// alignment, with a coarse rule-based error typer.

#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "gecomb/m2.hpp"

namespace gecomb {

using WordSet = std::unordered_set<std::string>;

struct AlignmentOp {
  enum class Kind { kMatch, kSubstitute, kInsert, kDelete };
  Kind kind;
  // Half-open token ranges; kInsert has an empty source range and kDelete an
  // empty target range.
  int src_begin = 0;
  int src_end = 0;
  int tgt_begin = 0;
  int tgt_end = 0;

  friend bool operator==(const AlignmentOp&, const AlignmentOp&) = default;
};

// Alignment costs, doubled so that every cost is an integer.
inline constexpr int kMatchCost = 0;
inline constexpr int kCaseSubstituteCost = 1;  // lowercase-equal tokens
inline constexpr int kSubstituteCost = 2;
inline constexpr int kIndelCost = 2;

// Minimum-cost alignment. Among equal-cost alignments the backtrace prefers
// match, then substitute, then delete, then insert, walking from the end.
std::vector<AlignmentOp> align_tokens(std::span<const Token> source, std::span<const Token> target);

// Total (doubled) cost of an op sequence.
int alignment_cost(std::span<const AlignmentOp> ops, std::span<const Token> source, std::span<const Token> target);

// Merges contiguous non-match runs into edits (annotator 0) labelled by
// classify_edit. apply_edits(source, result) == target.
std::vector<Edit> extract_edits(std::span<const Token> source, std::span<const Token> target,
                                const WordSet& dictionary = {});

// Label such as "M:DET", "R:SPELL", "U:PUNCT". At least one side non-empty.
std::string classify_edit(std::span<const Token> source, std::span<const Token> replacement,
                          const WordSet& dictionary = {});

// Relabels every edit of the corpus with classify_edit.
M2Corpus retype_corpus(const M2Corpus& corpus, const WordSet& dictionary = {});

// Restricted Damerau-Levenshtein (optimal string alignment) over bytes.
int damerau_levenshtein(std::string_view a, std::string_view b);

std::string to_lower_ascii(std::string_view s);

}  // namespace gecomb
