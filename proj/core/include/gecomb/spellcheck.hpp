#pragma once

// Frequency-dictionary spellchecker. Unknown words are corrected to the most
// frequent corpus word one character swap or one edit away, then to the
// first such dictionary word, then split in two known words.

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gecomb/m2.hpp"

namespace gecomb {

using WordCounts = std::unordered_map<std::string, std::int64_t>;

// Counts whitespace tokens of at least 3 characters made only of ASCII
// letters.
void count_words(std::string_view line, WordCounts& counts);
void merge_counts(WordCounts& into, const WordCounts& from);

class FrequencyModel {
 public:
  static constexpr std::int64_t kDefaultKnownMinCount = 3;
  static constexpr std::int64_t kDefaultCandidateMinCount = 20;

  FrequencyModel() = default;
  FrequencyModel(WordCounts counts, std::unordered_set<std::string> dictionary,
                 std::int64_t known_min_count = kDefaultKnownMinCount,
                 std::int64_t candidate_min_count = kDefaultCandidateMinCount);

  std::int64_t count(std::string_view word) const;
  // Exact match, then lowercase.
  bool in_dictionary(std::string_view word) const;
  // Counted at least known_min_count times, or in the dictionary.
  bool is_known(std::string_view word) const;

  const WordCounts& counts() const { return counts_; }
  const std::unordered_set<std::string>& dictionary() const { return dictionary_; }
  std::int64_t known_min_count() const { return known_min_count_; }
  std::int64_t candidate_min_count() const { return candidate_min_count_; }

  // Words counted more than candidate_min_count times, by descending count
  // then lexicographically.
  const std::vector<std::string>& frequent_words() const { return frequent_; }
  const std::vector<std::string>& sorted_dictionary() const { return sorted_dictionary_; }

 private:
  WordCounts counts_;
  std::unordered_set<std::string> dictionary_;
  std::int64_t known_min_count_ = kDefaultKnownMinCount;
  std::int64_t candidate_min_count_ = kDefaultCandidateMinCount;
  std::vector<std::string> frequent_;
  std::vector<std::string> sorted_dictionary_;
};

FrequencyModel build_model(std::span<const std::string> corpus_lines, std::span<const std::string> dictionary_words,
                           std::int64_t known_min_count = FrequencyModel::kDefaultKnownMinCount,
                           std::int64_t candidate_min_count = FrequencyModel::kDefaultCandidateMinCount);

// Sharded variant: each shard is counted separately and merged.
FrequencyModel build_model_sharded(std::span<const std::string> corpus_lines,
                                   std::span<const std::string> dictionary_words, std::size_t shards,
                                   std::int64_t known_min_count = FrequencyModel::kDefaultKnownMinCount,
                                   std::int64_t candidate_min_count = FrequencyModel::kDefaultCandidateMinCount);

bool is_suspect(std::string_view word, const FrequencyModel& model);

// True when b equals a with exactly one pair of positions exchanged.
bool differs_by_one_swap(std::string_view a, std::string_view b);
// True when the Levenshtein distance between a and b is exactly 1.
bool one_edit_apart(std::string_view a, std::string_view b);

// A replacement word, or two words separated by a space for a split.
std::optional<std::string> suggest(std::string_view word, const FrequencyModel& model);

// Suspect tokens are replaced by their suggestion; tokens starting with a
// capital letter are looked up lowercased and re-capitalized.
Tokens correct_sentence(std::span<const Token> tokens, const FrequencyModel& model);

// Model file: "word\tcount" lines, descending count then lexicographic.
std::string write_model_tsv(const WordCounts& counts);
WordCounts parse_model_tsv(std::string_view text);

std::vector<std::string> read_lines(std::istream& in);
std::vector<std::string> read_lines_file(const std::string& path);

}  // namespace gecomb
