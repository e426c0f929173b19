#include "gecomb/m2.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gecomb/error.hpp"

namespace gecomb {
namespace {

constexpr std::string_view kFieldSep = "|||";
constexpr std::string_view kNone = "-NONE-";
constexpr std::string_view kNoopLine = "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(kFieldSep, pos);
    if (next == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + kFieldSep.size();
  }
}

std::optional<int> to_int(std::string_view s) {
  int value = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) return std::nullopt;
  return value;
}

std::string describe(const Edit& e) {
  return "[" + std::to_string(e.start) + "," + std::to_string(e.end) + ")->\"" + e.replacement + "\"";
}

// Parses "A start end|||type|||repl|||REQUIRED|||-NONE-|||annotator".
// Returns nullopt for the noop sentinel.
std::optional<Edit> parse_edit_line(std::string_view line, std::size_t lineno) {
  const auto fields = split_fields(line.substr(2));
  if (fields.size() != 6) {
    throw ParseError(lineno, "expected 6 '|||'-separated fields, found " + std::to_string(fields.size()));
  }
  const auto offsets = split_tokens(fields[0]);
  if (offsets.size() != 2) throw ParseError(lineno, "expected 'start end' offsets");
  const auto start = to_int(offsets[0]);
  const auto end = to_int(offsets[1]);
  if (!start || !end) throw ParseError(lineno, "non-integer offsets");
  const auto annotator_field = split_tokens(fields[5]);
  const auto annotator = annotator_field.size() == 1 ? to_int(annotator_field[0]) : std::nullopt;
  if (!annotator || *annotator < 0) throw ParseError(lineno, "bad annotator id");
  if (*start == -1 && *end == -1) {
    if (fields[1] != "noop") throw ParseError(lineno, "offsets -1 -1 require type noop");
    return std::nullopt;
  }
  Edit edit;
  edit.start = *start;
  edit.end = *end;
  edit.etype = std::string(fields[1]);
  edit.annotator = *annotator;
  if (fields[2] != kNone) edit.replacement = join_tokens(split_tokens(fields[2]));
  return edit;
}

}  // namespace

EditKey key_of(std::size_t sentence, const Edit& edit) {
  return EditKey{sentence, edit.start, edit.end, edit.replacement};
}

Tokens split_tokens(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const auto begin = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > begin) out.emplace_back(text.substr(begin, i - begin));
  }
  return out;
}

std::string join_tokens(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

bool edits_overlap(const Edit& a, const Edit& b) noexcept {
  if (a.is_insertion() && b.is_insertion()) return a.start == b.start;
  if (a.is_insertion()) return b.start < a.start && a.start < b.end;
  if (b.is_insertion()) return a.start < b.start && b.start < a.end;
  return a.start < b.end && b.start < a.end;
}

void validate_sentence(const AnnotatedSentence& sentence) {
  for (const auto& tok : sentence.tokens) {
    if (tok.empty() || std::any_of(tok.begin(), tok.end(), is_space)) {
      throw ValidationError("invalid token \"" + tok + "\"");
    }
  }
  const int n = static_cast<int>(sentence.tokens.size());
  for (const auto& e : sentence.edits) {
    if (e.start < 0 || e.start > e.end || e.end > n) {
      throw ValidationError("edit " + describe(e) + " outside sentence of " + std::to_string(n) + " tokens");
    }
    if (e.is_insertion() && e.is_deletion()) throw ValidationError("empty edit at " + std::to_string(e.start));
    if (e.etype.empty()) throw ValidationError("edit " + describe(e) + " has no type");
    if (e.annotator < 0) throw ValidationError("edit " + describe(e) + " has negative annotator");
  }
  for (std::size_t i = 0; i < sentence.edits.size(); ++i) {
    for (std::size_t j = i + 1; j < sentence.edits.size(); ++j) {
      const auto& a = sentence.edits[i];
      const auto& b = sentence.edits[j];
      if (a.annotator == b.annotator && edits_overlap(a, b)) {
        throw ValidationError("overlapping edits " + describe(a) + " and " + describe(b));
      }
    }
  }
}

void sort_edits(std::vector<Edit>& edits) {
  std::stable_sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
    return std::tie(a.start, a.end, a.annotator) < std::tie(b.start, b.end, b.annotator);
  });
}

std::vector<Edit> edits_of(const AnnotatedSentence& sentence, int annotator) {
  std::vector<Edit> out;
  for (const auto& e : sentence.edits) {
    if (e.annotator == annotator) out.push_back(e);
  }
  return out;
}

M2Corpus parse_m2(std::string_view text) {
  M2Corpus corpus;
  bool in_block = false;
  std::size_t block_start = 0;
  std::size_t lineno = 0;
  std::size_t pos = 0;

  auto close_block = [&] {
    if (!in_block) return;
    try {
      validate_sentence(corpus.sentences.back());
    } catch (const ValidationError& e) {
      throw ParseError(block_start, e.what());
    }
    in_block = false;
  };

  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      close_block();
      continue;
    }
    if (line == "S" || line.starts_with("S ")) {
      close_block();
      corpus.sentences.push_back({split_tokens(line.substr(1)), {}});
      in_block = true;
      block_start = lineno;
      continue;
    }
    if (line.starts_with("A ")) {
      if (!in_block) throw ParseError(lineno, "annotation line outside a sentence block");
      auto& sentence = corpus.sentences.back();
      if (auto edit = parse_edit_line(line, lineno)) {
        const int n = static_cast<int>(sentence.tokens.size());
        if (edit->start < 0 || edit->start > edit->end || edit->end > n) {
          throw ParseError(lineno, "span " + describe(*edit) + " outside sentence of " + std::to_string(n) + " tokens");
        }
        try {
          validate_sentence({sentence.tokens, {*edit}});
          for (const auto& other : sentence.edits) {
            if (other.annotator == edit->annotator && edits_overlap(other, *edit)) {
              throw ValidationError("overlaps " + describe(other));
            }
          }
        } catch (const ValidationError& e) {
          throw ParseError(lineno, e.what());
        }
        sentence.edits.push_back(std::move(*edit));
      }
      continue;
    }
    throw ParseError(lineno, "expected 'S ' or 'A ' line");
  }
  close_block();
  return corpus;
}

std::string write_m2(const M2Corpus& corpus) {
  std::string out;
  for (const auto& sentence : corpus.sentences) {
    out += "S ";
    out += join_tokens(sentence.tokens);
    out += '\n';
    if (sentence.edits.empty()) {
      out += kNoopLine;
      out += "0\n\n";
      continue;
    }
    auto edits = sentence.edits;
    sort_edits(edits);
    for (const auto& e : edits) {
      out += "A ";
      out += std::to_string(e.start);
      out += ' ';
      out += std::to_string(e.end);
      out += kFieldSep;
      out += e.etype;
      out += kFieldSep;
      out += e.replacement.empty() ? std::string(kNone) : e.replacement;
      out += "|||REQUIRED|||-NONE-|||";
      out += std::to_string(e.annotator);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

M2Corpus read_m2_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_m2(buf.str());
}

void write_m2_file(const std::string& path, const M2Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << write_m2(corpus);
  if (!out) throw IoError("write failed for " + path);
}

Tokens apply_edits(std::span<const Token> tokens, std::span<const Edit> edits) {
  const int n = static_cast<int>(tokens.size());
  for (const auto& e : edits) {
    if (e.start < 0 || e.start > e.end || e.end > n) {
      throw ValidationError("edit " + describe(e) + " outside sentence of " + std::to_string(n) + " tokens");
    }
  }
  for (std::size_t i = 0; i < edits.size(); ++i) {
    for (std::size_t j = i + 1; j < edits.size(); ++j) {
      if (edits_overlap(edits[i], edits[j])) {
        throw ValidationError("overlapping edits " + describe(edits[i]) + " and " + describe(edits[j]));
      }
    }
  }
  std::vector<const Edit*> order;
  order.reserve(edits.size());
  for (const auto& e : edits) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Edit* a, const Edit* b) {
    return std::tie(b->start, b->end) < std::tie(a->start, a->end);
  });

  Tokens out(tokens.begin(), tokens.end());
  for (const Edit* e : order) {
    auto repl = split_tokens(e->replacement);
    out.erase(out.begin() + e->start, out.begin() + e->end);
    out.insert(out.begin() + e->start, repl.begin(), repl.end());
  }
  return out;
}

void check_aligned(const M2Corpus& a, const M2Corpus& b) {
  if (a.size() != b.size()) {
    throw AlignmentError(std::min(a.size(), b.size()),
                         "corpora differ in length (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.sentences[i].tokens != b.sentences[i].tokens) throw AlignmentError(i, "source sentences differ");
  }
}

M2Corpus strip_edits(const M2Corpus& corpus) {
  M2Corpus out;
  out.sentences.reserve(corpus.size());
  for (const auto& s : corpus.sentences) out.sentences.push_back({s.tokens, {}});
  return out;
}

ReverseAction reverse_edit(std::string_view source_text, const Edit& edit) {
  if (edit.is_insertion()) return {ReverseAction::Kind::kDeleteOccurrence, edit.replacement, {}};
  if (edit.is_deletion()) return {ReverseAction::Kind::kInsertAnywhere, {}, std::string(source_text)};
  return {ReverseAction::Kind::kReplaceOccurrence, edit.replacement, std::string(source_text)};
}

}  // namespace gecomb
