#pragma once

// Synthetic error generation: corrections measured on an annotated corpus are
// applied backwards to clean sentences, reproducing the number of
// corrections per sentence and the frequency of each specific correction.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gecomb/error.hpp"
#include "gecomb/m2.hpp"
#include "gecomb/random.hpp"

namespace gecomb {

struct CorrectionId {
  std::string source_text;  // span text before correction, may be empty
  std::string replacement;  // may be empty
  std::string etype;

  friend auto operator<=>(const CorrectionId&, const CorrectionId&) = default;
  friend bool operator==(const CorrectionId&, const CorrectionId&) = default;
};

struct ErrorDistribution {
  std::map<std::size_t, double> per_sentence_hist;
  std::map<CorrectionId, double> correction_freq;
};

ErrorDistribution measure_distribution(const M2Corpus& train, int annotator = 0);

// Throws ValidationError if a table is empty where needed, has negative
// entries, or does not sum to 1 within 1e-9.
void validate_distribution(const ErrorDistribution& dist);

std::string distribution_to_json(const ErrorDistribution& dist);
ErrorDistribution distribution_from_json(std::string_view text);

class GenerationExhausted : public Error {
 public:
  using Error::Error;
};

// Clean sentences with a token -> sentence id index.
class SentencePool {
 public:
  explicit SentencePool(std::vector<Tokens> sentences);

  const std::vector<Tokens>& sentences() const { return sentences_; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }

  // Ids of sentences containing `token`, ascending.
  const std::vector<std::size_t>& containing(const std::string& token) const;

 private:
  std::vector<Tokens> sentences_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
};

struct SyntheticPair {
  Tokens corrupted;
  Tokens clean;
  // Forward corrections over `corrupted`; apply_edits(corrupted, gold) == clean.
  std::vector<Edit> gold;
  std::size_t pool_index = 0;
};

// One draw: k corrections per the histogram, then k corrections i.i.d., then
// a uniformly chosen pool sentence where all of them can be undone on
// disjoint occurrences. Redraws up to max_attempts times.
SyntheticPair generate_pair(const SentencePool& pool, const ErrorDistribution& dist, Rng& rng,
                            std::size_t max_attempts = 1000);

struct SyntheticCorpus {
  std::vector<Tokens> corrupted;
  std::vector<Tokens> clean;
  M2Corpus gold;  // gold edits over the corrupted side
};

SyntheticCorpus generate_corpus(const SentencePool& pool, const ErrorDistribution& dist, std::size_t n_sentences,
                                std::uint64_t seed, std::size_t max_attempts = 1000);

// Writes prefix.src, prefix.trg and prefix.m2.
void write_synthetic(const std::string& prefix, const SyntheticCorpus& corpus);

}  // namespace gecomb
