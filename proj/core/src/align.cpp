#include "gecomb/align.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

namespace gecomb {
namespace {

using Kind = AlignmentOp::Kind;

int substitute_cost(const Token& a, const Token& b) {
  if (a == b) return kMatchCost;
  return to_lower_ascii(a) == to_lower_ascii(b) ? kCaseSubstituteCost : kSubstituteCost;
}

constexpr std::array<std::string_view, 3> kDeterminers = {"a", "an", "the"};

constexpr std::array<std::string_view, 25> kPrepositions = {
    "about", "above", "across", "after", "against", "along", "among", "around", "at",
    "before", "behind", "below", "between", "by", "during", "for", "from", "in",
    "into", "of", "on", "over", "through", "to", "with"};

template <std::size_t N>
bool all_in(std::span<const Token> tokens, const std::array<std::string_view, N>& words) {
  return std::all_of(tokens.begin(), tokens.end(), [&](const Token& t) {
    const auto lower = to_lower_ascii(t);
    return std::find(words.begin(), words.end(), lower) != words.end();
  });
}

bool all_punct(std::span<const Token> tokens) {
  return std::all_of(tokens.begin(), tokens.end(), [](const Token& t) {
    return std::all_of(t.begin(), t.end(), [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; });
  });
}

std::string squash(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) out += to_lower_ascii(t);
  return out;
}

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

int damerau_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

std::vector<AlignmentOp> align_tokens(std::span<const Token> source, std::span<const Token> target) {
  const std::size_t n = source.size();
  const std::size_t m = target.size();

  // Intern exact and lowercased forms so the DP compares integers.
  std::unordered_map<std::string_view, int> exact_ids;
  std::unordered_map<std::string, int> lower_ids;
  auto intern = [&](std::span<const Token> tokens, std::vector<int>& exact, std::vector<int>& lower) {
    for (const auto& t : tokens) {
      exact.push_back(exact_ids.emplace(t, static_cast<int>(exact_ids.size())).first->second);
      lower.push_back(lower_ids.emplace(to_lower_ascii(t), static_cast<int>(lower_ids.size())).first->second);
    }
  };
  std::vector<int> src_exact, src_lower, tgt_exact, tgt_lower;
  intern(source, src_exact, src_lower);
  intern(target, tgt_exact, tgt_lower);
  auto sub_cost = [&](std::size_t i, std::size_t j) {
    if (src_exact[i] == tgt_exact[j]) return kMatchCost;
    return src_lower[i] == tgt_lower[j] ? kCaseSubstituteCost : kSubstituteCost;
  };

  const std::size_t w = m + 1;
  std::vector<int> cost((n + 1) * w);
  auto at = [&](std::size_t i, std::size_t j) -> int& { return cost[i * w + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int>(i) * kIndelCost;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j) * kIndelCost;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      at(i, j) = std::min({at(i - 1, j - 1) + sub_cost(i - 1, j - 1), at(i - 1, j) + kIndelCost,
                           at(i, j - 1) + kIndelCost});
    }
  }

  std::vector<AlignmentOp> ops;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const int here = at(i, j);
    const int ii = static_cast<int>(i);
    const int jj = static_cast<int>(j);
    if (i > 0 && j > 0) {
      const int sub = sub_cost(i - 1, j - 1);
      if (at(i - 1, j - 1) + sub == here) {
        ops.push_back({sub == kMatchCost ? Kind::kMatch : Kind::kSubstitute, ii - 1, ii, jj - 1, jj});
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i - 1, j) + kIndelCost == here) {
      ops.push_back({Kind::kDelete, ii - 1, ii, jj, jj});
      --i;
      continue;
    }
    ops.push_back({Kind::kInsert, ii, ii, jj - 1, jj});
    --j;
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

int alignment_cost(std::span<const AlignmentOp> ops, std::span<const Token> source, std::span<const Token> target) {
  int total = 0;
  for (const auto& op : ops) {
    switch (op.kind) {
      case Kind::kMatch:
      case Kind::kSubstitute:
        total += substitute_cost(source[op.src_begin], target[op.tgt_begin]);
        break;
      case Kind::kInsert:
      case Kind::kDelete:
        total += kIndelCost;
        break;
    }
  }
  return total;
}

std::string classify_edit(std::span<const Token> source, std::span<const Token> replacement,
                          const WordSet& dictionary) {
  std::string prefix = source.empty() ? "M:" : replacement.empty() ? "U:" : "R:";
  if (all_punct(source) && all_punct(replacement)) return prefix + "PUNCT";
  if (squash(source) == squash(replacement)) return prefix + "ORTH";
  if (all_in(source, kDeterminers) && all_in(replacement, kDeterminers)) return prefix + "DET";
  if (all_in(source, kPrepositions) && all_in(replacement, kPrepositions)) return prefix + "PREP";
  if (source.size() == 1 && replacement.size() == 1 && !dictionary.contains(source[0]) &&
      damerau_levenshtein(source[0], replacement[0]) <= 2) {
    return prefix + "SPELL";
  }
  return prefix + "OTHER";
}

std::vector<Edit> extract_edits(std::span<const Token> source, std::span<const Token> target,
                                const WordSet& dictionary) {
  const auto ops = align_tokens(source, target);
  std::vector<Edit> edits;
  std::size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].kind == Kind::kMatch) {
      ++k;
      continue;
    }
    const auto first = k;
    while (k < ops.size() && ops[k].kind != Kind::kMatch) ++k;
    const auto& head = ops[first];
    const auto& tail = ops[k - 1];
    const auto src = source.subspan(head.src_begin, tail.src_end - head.src_begin);
    const auto tgt = target.subspan(head.tgt_begin, tail.tgt_end - head.tgt_begin);
    edits.push_back({head.src_begin, tail.src_end, classify_edit(src, tgt, dictionary), join_tokens(tgt), 0});
  }
  return edits;
}

M2Corpus retype_corpus(const M2Corpus& corpus, const WordSet& dictionary) {
  M2Corpus out = corpus;
  for (auto& sentence : out.sentences) {
    const std::span<const Token> tokens = sentence.tokens;
    for (auto& e : sentence.edits) {
      const auto repl = split_tokens(e.replacement);
      e.etype = classify_edit(tokens.subspan(e.start, e.end - e.start), repl, dictionary);
    }
  }
  return out;
}

}  // namespace gecomb
