#include "gecomb/spellcheck.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>

#include "gecomb/align.hpp"
#include "gecomb/error.hpp"

namespace gecomb {
namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool countable(std::string_view w) { return w.size() >= 3 && std::all_of(w.begin(), w.end(), is_alpha); }

bool all_upper(std::string_view w) {
  return std::any_of(w.begin(), w.end(), is_upper) && std::none_of(w.begin(), w.end(), is_lower);
}

std::vector<std::pair<std::string, std::int64_t>> sorted_counts(const WordCounts& counts) {
  std::vector<std::pair<std::string, std::int64_t>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return rows;
}

bool close_enough(std::string_view word, std::string_view candidate) {
  return differs_by_one_swap(word, candidate) || one_edit_apart(word, candidate);
}

}  // namespace

void count_words(std::string_view line, WordCounts& counts) {
  for (const auto& tok : split_tokens(line)) {
    if (countable(tok)) ++counts[tok];
  }
}

void merge_counts(WordCounts& into, const WordCounts& from) {
  for (const auto& [w, c] : from) into[w] += c;
}

FrequencyModel::FrequencyModel(WordCounts counts, std::unordered_set<std::string> dictionary,
                               std::int64_t known_min_count, std::int64_t candidate_min_count)
    : counts_(std::move(counts)),
      dictionary_(std::move(dictionary)),
      known_min_count_(known_min_count),
      candidate_min_count_(candidate_min_count) {
  for (const auto& [word, count] : sorted_counts(counts_)) {
    if (count > candidate_min_count_) frequent_.push_back(word);
  }
  sorted_dictionary_.assign(dictionary_.begin(), dictionary_.end());
  std::sort(sorted_dictionary_.begin(), sorted_dictionary_.end());
}

std::int64_t FrequencyModel::count(std::string_view word) const {
  const auto it = counts_.find(std::string(word));
  return it == counts_.end() ? 0 : it->second;
}

bool FrequencyModel::in_dictionary(std::string_view word) const {
  return dictionary_.contains(std::string(word)) || dictionary_.contains(to_lower_ascii(word));
}

bool FrequencyModel::is_known(std::string_view word) const {
  return count(word) >= known_min_count_ || in_dictionary(word);
}

FrequencyModel build_model(std::span<const std::string> corpus_lines, std::span<const std::string> dictionary_words,
                           std::int64_t known_min_count, std::int64_t candidate_min_count) {
  WordCounts counts;
  for (const auto& line : corpus_lines) count_words(line, counts);
  std::unordered_set<std::string> dict;
  for (const auto& w : dictionary_words) {
    if (!w.empty()) dict.insert(w);
  }
  return FrequencyModel(std::move(counts), std::move(dict), known_min_count, candidate_min_count);
}

FrequencyModel build_model_sharded(std::span<const std::string> corpus_lines,
                                   std::span<const std::string> dictionary_words, std::size_t shards,
                                   std::int64_t known_min_count, std::int64_t candidate_min_count) {
  shards = std::max<std::size_t>(shards, 1);
  std::vector<WordCounts> partial(shards);
  for (std::size_t i = 0; i < corpus_lines.size(); ++i) count_words(corpus_lines[i], partial[i % shards]);
  WordCounts counts;
  for (const auto& p : partial) merge_counts(counts, p);
  std::unordered_set<std::string> dict;
  for (const auto& w : dictionary_words) {
    if (!w.empty()) dict.insert(w);
  }
  return FrequencyModel(std::move(counts), std::move(dict), known_min_count, candidate_min_count);
}

bool is_suspect(std::string_view word, const FrequencyModel& model) {
  return word.size() >= 3 && model.count(word) < model.known_min_count() && !model.in_dictionary(word) &&
         std::none_of(word.begin(), word.end(), is_digit) && !all_upper(word);
}

bool differs_by_one_swap(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  std::size_t first = a.size();
  std::size_t second = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    if (first == a.size()) {
      first = i;
    } else if (second == a.size()) {
      second = i;
    } else {
      return false;
    }
  }
  return second != a.size() && a[first] == b[second] && a[second] == b[first];
}

bool one_edit_apart(std::string_view a, std::string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (b.size() - a.size() > 1) return false;
  std::size_t i = 0;
  while (i < a.size() && a[i] == b[i]) ++i;
  if (a.size() == b.size()) {
    // exactly one substitution
    return i < a.size() && a.substr(i + 1) == b.substr(i + 1);
  }
  // one insertion into a
  return a.substr(i) == b.substr(i + 1);
}

std::optional<std::string> suggest(std::string_view word, const FrequencyModel& model) {
  for (const auto& candidate : model.frequent_words()) {
    if (close_enough(word, candidate)) return candidate;
  }
  for (const auto& candidate : model.sorted_dictionary()) {
    if (close_enough(word, candidate)) return candidate;
  }
  for (std::size_t i = 1; i < word.size(); ++i) {
    const auto left = word.substr(0, i);
    const auto right = word.substr(i);
    if (model.is_known(left) && model.is_known(right)) return std::string(left) + " " + std::string(right);
  }
  return std::nullopt;
}

Tokens correct_sentence(std::span<const Token> tokens, const FrequencyModel& model) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (!is_suspect(tok, model)) {
      out.push_back(tok);
      continue;
    }
    const bool capitalized = is_upper(tok.front());
    std::string lookup = tok;
    if (capitalized) {
      lookup.front() = static_cast<char>(std::tolower(static_cast<unsigned char>(lookup.front())));
      if (!is_suspect(lookup, model)) {
        out.push_back(tok);
        continue;
      }
    }
    auto fix = suggest(lookup, model);
    if (!fix) {
      out.push_back(tok);
      continue;
    }
    if (capitalized) fix->front() = static_cast<char>(std::toupper(static_cast<unsigned char>(fix->front())));
    for (auto& piece : split_tokens(*fix)) out.push_back(std::move(piece));
  }
  return out;
}

std::string write_model_tsv(const WordCounts& counts) {
  std::string out;
  for (const auto& [word, count] : sorted_counts(counts)) {
    out += word;
    out += '\t';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

WordCounts parse_model_tsv(std::string_view text) {
  WordCounts counts;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) throw ParseError(lineno, "expected word<TAB>count");
    const auto num = line.substr(tab + 1);
    std::int64_t count = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), count);
    if (ec != std::errc() || ptr != num.data() + num.size() || count < 1) {
      throw ParseError(lineno, "bad count \"" + std::string(num) + "\"");
    }
    counts[std::string(line.substr(0, tab))] += count;
  }
  return counts;
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> read_lines_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_lines(in);
}

}  // namespace gecomb
