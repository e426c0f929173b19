#pragma once

// Edit data model shared by every module, plus the M2 annotation format.
//
// An M2 file is a sequence of blocks separated by blank lines:
//
//   S He go home
//   A 1 2|||R:VERB|||goes|||REQUIRED|||-NONE-|||0
//
// Offsets are token indices into the S line, end exclusive. A deletion is
// written with the replacement "-NONE-"; a sentence without corrections
// carries the sentinel "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0".

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gecomb {

using Token = std::string;
using Tokens = std::vector<Token>;

struct Edit {
  int start = 0;
  int end = 0;
  std::string etype;
  // Space-separated replacement tokens; empty for a deletion.
  std::string replacement;
  int annotator = 0;

  bool is_insertion() const noexcept { return start == end; }
  bool is_deletion() const noexcept { return replacement.empty(); }

  friend bool operator==(const Edit&, const Edit&) = default;
};

struct AnnotatedSentence {
  Tokens tokens;
  std::vector<Edit> edits;

  friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;
};

struct M2Corpus {
  std::vector<AnnotatedSentence> sentences;

  std::size_t size() const noexcept { return sentences.size(); }
  bool empty() const noexcept { return sentences.empty(); }

  friend bool operator==(const M2Corpus&, const M2Corpus&) = default;
};

// Identity of a correction for set operations and gold matching. The error
// type is not part of the key.
struct EditKey {
  std::size_t sentence = 0;
  int start = 0;
  int end = 0;
  std::string replacement;

  friend auto operator<=>(const EditKey&, const EditKey&) = default;
  friend bool operator==(const EditKey&, const EditKey&) = default;
};

EditKey key_of(std::size_t sentence, const Edit& edit);

// Whitespace tokenization; collapses runs of spaces and tabs.
Tokens split_tokens(std::string_view text);
std::string join_tokens(std::span<const Token> tokens);

// Span overlap as used for same-annotator consistency: half-open ranges
// that intersect, an insertion strictly inside a span, or two insertions at
// the same point.
bool edits_overlap(const Edit& a, const Edit& b) noexcept;

// Checks token and edit invariants for one sentence; throws ValidationError.
void validate_sentence(const AnnotatedSentence& sentence);

// Canonical order used by write_m2: (start, end, annotator).
void sort_edits(std::vector<Edit>& edits);

// Edits of one annotator, in stored order.
std::vector<Edit> edits_of(const AnnotatedSentence& sentence, int annotator);

M2Corpus parse_m2(std::string_view text);
std::string write_m2(const M2Corpus& corpus);

M2Corpus read_m2_file(const std::string& path);
void write_m2_file(const std::string& path, const M2Corpus& corpus);

// Applies non-overlapping edits right to left. Throws ValidationError naming
// the first conflicting pair when edits overlap or fall outside the tokens.
Tokens apply_edits(std::span<const Token> tokens, std::span<const Edit> edits);

// Throws AlignmentError when the corpora differ in length or source tokens.
void check_aligned(const M2Corpus& a, const M2Corpus& b);

// Same source sentences, no edits.
M2Corpus strip_edits(const M2Corpus& corpus);

// The error-injecting counterpart of a correction.
struct ReverseAction {
  enum class Kind {
    kDeleteOccurrence,   // correction inserted `find`: remove one occurrence
    kInsertAnywhere,     // correction deleted `put`: add it at some position
    kReplaceOccurrence,  // correction turned `put` into `find`: undo it
  };
  Kind kind;
  // Text that must already be present in a clean sentence; empty for
  // kInsertAnywhere.
  std::string find;
  // Text written in its place; empty for kDeleteOccurrence.
  std::string put;

  friend bool operator==(const ReverseAction&, const ReverseAction&) = default;
};

// `source_text` is the space-joined text of the span the edit covers.
ReverseAction reverse_edit(std::string_view source_text, const Edit& edit);

}  // namespace gecomb
