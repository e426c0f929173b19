#include "gecomb/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>

#include <json.hpp>

namespace gecomb {
namespace {

using Json = nlohmann::ordered_json;
using Kind = ReverseAction::Kind;

// Backtracking budget per sentence when checking applicability.
constexpr std::size_t kSearchBudget = 20000;

struct Requirement {
  Kind kind;
  Tokens find;
  Tokens put;
  const CorrectionId* correction;
};

struct Interval {
  int start;
  int end;
  Kind kind;
};

bool conflicts(const Interval& a, const Interval& b) {
  if (a.start < b.end && b.start < a.end) return true;
  // Two removed occurrences that touch would leave two insertions at the
  // same point of the corrupted sentence.
  return a.kind == Kind::kDeleteOccurrence && b.kind == Kind::kDeleteOccurrence &&
         (a.end == b.start || b.end == a.start);
}

std::vector<int> occurrences(const Tokens& sentence, const Tokens& needle) {
  std::vector<int> out;
  if (needle.empty() || needle.size() > sentence.size()) return out;
  for (std::size_t i = 0; i + needle.size() <= sentence.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), sentence.begin() + static_cast<std::ptrdiff_t>(i))) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

// Insertion points of a sentence of n tokens not strictly inside a chosen
// interval.
std::vector<int> free_points(int n, const std::vector<Interval>& chosen) {
  std::vector<int> points;
  for (int p = 0; p <= n; ++p) {
    const bool inside = std::any_of(chosen.begin(), chosen.end(), [p](const Interval& iv) { return iv.start < p && p < iv.end; });
    if (!inside) points.push_back(p);
  }
  return points;
}

// Finds pairwise compatible occurrences for every occurrence requirement,
// leaving at least `insertions` free points. Candidate occurrences are tried
// in the given order, so shuffled lists give a random assignment.
class AssignmentSearch {
 public:
  AssignmentSearch(int n, const std::vector<const Requirement*>& reqs, std::vector<std::vector<int>> options,
                   std::size_t insertions)
      : n_(n), reqs_(reqs), options_(std::move(options)), insertions_(insertions) {}

  std::optional<std::vector<Interval>> run() {
    chosen_.clear();
    budget_ = kSearchBudget;
    if (dfs(0)) return chosen_;
    return std::nullopt;
  }

 private:
  bool dfs(std::size_t r) {
    if (budget_ == 0) return false;
    --budget_;
    if (r == reqs_.size()) return free_points(n_, chosen_).size() >= insertions_;
    const int len = static_cast<int>(reqs_[r]->find.size());
    for (int start : options_[r]) {
      const Interval iv{start, start + len, reqs_[r]->kind};
      if (std::any_of(chosen_.begin(), chosen_.end(), [&](const Interval& o) { return conflicts(o, iv); })) continue;
      chosen_.push_back(iv);
      if (dfs(r + 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  int n_;
  const std::vector<const Requirement*>& reqs_;
  std::vector<std::vector<int>> options_;
  std::size_t insertions_;
  std::vector<Interval> chosen_;
  std::size_t budget_ = 0;
};

template <typename Key>
const Key& draw_from(const std::map<Key, double>& table, Rng& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  const Key* last = nullptr;
  for (const auto& [key, p] : table) {
    if (p <= 0.0) continue;
    acc += p;
    last = &key;
    if (u < acc) return key;
  }
  return *last;  // rounding slack at the top of the cumulative sum
}

std::string describe_draw(const std::vector<Requirement>& reqs) {
  std::string out = std::to_string(reqs.size()) + " correction(s):";
  for (const auto& r : reqs) {
    out += " [\"" + r.correction->source_text + "\" -> \"" + r.correction->replacement + "\" " + r.correction->etype + "]";
  }
  return out;
}

void check_table_sum(double sum, const char* name) {
  if (std::fabs(sum - 1.0) > 1e-9) throw ValidationError(std::string(name) + " sums to " + std::to_string(sum));
}

}  // namespace

ErrorDistribution measure_distribution(const M2Corpus& train, int annotator) {
  std::map<std::size_t, std::int64_t> per_sentence;
  std::map<CorrectionId, std::int64_t> corrections;
  std::int64_t total_edits = 0;
  for (const auto& sentence : train.sentences) {
    const auto edits = edits_of(sentence, annotator);
    ++per_sentence[edits.size()];
    const std::span<const Token> tokens = sentence.tokens;
    for (const auto& e : edits) {
      CorrectionId id{join_tokens(tokens.subspan(e.start, e.end - e.start)), e.replacement, e.etype};
      ++corrections[id];
      ++total_edits;
    }
  }
  ErrorDistribution dist;
  const auto n = static_cast<double>(train.size());
  for (const auto& [k, c] : per_sentence) dist.per_sentence_hist[k] = static_cast<double>(c) / n;
  for (const auto& [id, c] : corrections) {
    dist.correction_freq[id] = static_cast<double>(c) / static_cast<double>(total_edits);
  }
  return dist;
}

void validate_distribution(const ErrorDistribution& dist) {
  if (dist.per_sentence_hist.empty()) throw ValidationError("per-sentence histogram is empty");
  double sum = 0.0;
  bool needs_corrections = false;
  for (const auto& [k, p] : dist.per_sentence_hist) {
    if (p < 0.0) throw ValidationError("negative probability in per-sentence histogram");
    if (k > 0 && p > 0.0) needs_corrections = true;
    sum += p;
  }
  check_table_sum(sum, "per-sentence histogram");
  if (!needs_corrections) return;
  if (dist.correction_freq.empty()) throw ValidationError("correction table is empty");
  sum = 0.0;
  for (const auto& [id, p] : dist.correction_freq) {
    if (p < 0.0) throw ValidationError("negative probability in correction table");
    if (id.source_text.empty() && id.replacement.empty()) throw ValidationError("correction with empty source and replacement");
    sum += p;
  }
  check_table_sum(sum, "correction table");
}

std::string distribution_to_json(const ErrorDistribution& dist) {
  Json j;
  Json hist = Json::object();
  for (const auto& [k, p] : dist.per_sentence_hist) hist[std::to_string(k)] = p;
  j["per_sentence_hist"] = std::move(hist);
  auto rows = Json::array();
  for (const auto& [id, p] : dist.correction_freq) {
    Json row;
    row["source"] = id.source_text;
    row["replacement"] = id.replacement;
    row["etype"] = id.etype;
    row["prob"] = p;
    rows.push_back(std::move(row));
  }
  j["corrections"] = std::move(rows);
  return j.dump(2) + "\n";
}

ErrorDistribution distribution_from_json(std::string_view text) {
  try {
    const auto j = Json::parse(text);
    ErrorDistribution dist;
    for (const auto& [key, value] : j.at("per_sentence_hist").items()) {
      std::size_t pos = 0;
      const auto k = std::stoull(key, &pos);
      if (pos != key.size()) throw ValidationError("bad histogram key \"" + key + "\"");
      dist.per_sentence_hist[k] = value.get<double>();
    }
    for (const auto& row : j.at("corrections")) {
      CorrectionId id{row.at("source").get<std::string>(), row.at("replacement").get<std::string>(),
                      row.at("etype").get<std::string>()};
      dist.correction_freq[id] += row.at("prob").get<double>();
    }
    return dist;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("distribution: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ValidationError(std::string("distribution: ") + e.what());
  }
}

SentencePool::SentencePool(std::vector<Tokens> sentences) : sentences_(std::move(sentences)) {
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    for (const auto& tok : sentences_[i]) {
      auto& ids = index_[tok];
      if (ids.empty() || ids.back() != i) ids.push_back(i);
    }
  }
}

const std::vector<std::size_t>& SentencePool::containing(const std::string& token) const {
  static const std::vector<std::size_t> kNone;
  const auto it = index_.find(token);
  return it == index_.end() ? kNone : it->second;
}

SyntheticPair generate_pair(const SentencePool& pool, const ErrorDistribution& dist, Rng& rng,
                            std::size_t max_attempts) {
  if (pool.empty()) throw ValidationError("sentence pool is empty");
  validate_distribution(dist);

  std::string last_draw;
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(max_attempts, 1); ++attempt) {
    const std::size_t k = draw_from(dist.per_sentence_hist, rng);
    std::vector<Requirement> reqs;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& id = draw_from(dist.correction_freq, rng);
      Edit forward{0, id.source_text.empty() ? 0 : 1, id.etype, id.replacement, 0};
      const auto action = reverse_edit(id.source_text, forward);
      reqs.push_back({action.kind, split_tokens(action.find), split_tokens(action.put), &id});
    }
    last_draw = describe_draw(reqs);

    std::vector<const Requirement*> occurrence_reqs;
    std::size_t insertions = 0;
    for (const auto& r : reqs) {
      if (r.kind == Kind::kInsertAnywhere) {
        ++insertions;
      } else {
        occurrence_reqs.push_back(&r);
      }
    }

    // Candidate sentences contain the first token of every required text.
    std::vector<std::size_t> candidates(pool.size());
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    for (const auto* r : occurrence_reqs) {
      const auto& ids = pool.containing(r->find.front());
      std::vector<std::size_t> next;
      std::set_intersection(candidates.begin(), candidates.end(), ids.begin(), ids.end(), std::back_inserter(next));
      candidates = std::move(next);
    }

    std::vector<std::size_t> applicable;
    for (auto id : candidates) {
      const auto& sentence = pool.sentences()[id];
      std::vector<std::vector<int>> options;
      for (const auto* r : occurrence_reqs) options.push_back(occurrences(sentence, r->find));
      AssignmentSearch search(static_cast<int>(sentence.size()), occurrence_reqs, std::move(options), insertions);
      if (search.run()) applicable.push_back(id);
    }
    if (applicable.empty()) continue;

    const auto chosen_id = applicable[rng.uniform_below(applicable.size())];
    const auto& clean = pool.sentences()[chosen_id];
    std::vector<std::vector<int>> options;
    for (const auto* r : occurrence_reqs) {
      auto occ = occurrences(clean, r->find);
      for (std::size_t i = occ.size(); i > 1; --i) std::swap(occ[i - 1], occ[rng.uniform_below(i)]);
      options.push_back(std::move(occ));
    }
    AssignmentSearch search(static_cast<int>(clean.size()), occurrence_reqs, std::move(options), insertions);
    const auto intervals = search.run();
    if (!intervals) continue;  // unreachable: the unshuffled search succeeded

    // Inverse edits over the clean sentence.
    std::vector<Edit> inverse;
    for (std::size_t r = 0; r < occurrence_reqs.size(); ++r) {
      const auto& iv = (*intervals)[r];
      inverse.push_back({iv.start, iv.end, occurrence_reqs[r]->correction->etype, join_tokens(occurrence_reqs[r]->put), 0});
    }
    auto points = free_points(static_cast<int>(clean.size()), *intervals);
    for (const auto& r : reqs) {
      if (r.kind != Kind::kInsertAnywhere) continue;
      const auto pick = rng.uniform_below(points.size());
      inverse.push_back({points[pick], points[pick], r.correction->etype, join_tokens(r.put), 0});
      points.erase(points.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    SyntheticPair pair;
    pair.clean = clean;
    pair.pool_index = chosen_id;
    pair.corrupted = apply_edits(clean, inverse);
    std::sort(inverse.begin(), inverse.end(),
              [](const Edit& a, const Edit& b) { return std::tie(a.start, a.end) < std::tie(b.start, b.end); });
    int offset = 0;
    const std::span<const Token> clean_span = clean;
    for (const auto& inv : inverse) {
      const int put_len = static_cast<int>(split_tokens(inv.replacement).size());
      const int start = inv.start + offset;
      pair.gold.push_back(
          {start, start + put_len, inv.etype, join_tokens(clean_span.subspan(inv.start, inv.end - inv.start)), 0});
      offset += put_len - (inv.end - inv.start);
    }
    return pair;
  }
  throw GenerationExhausted("no applicable sentence after " + std::to_string(max_attempts) + " draws; last draw " +
                            last_draw);
}

SyntheticCorpus generate_corpus(const SentencePool& pool, const ErrorDistribution& dist, std::size_t n_sentences,
                                std::uint64_t seed, std::size_t max_attempts) {
  if (n_sentences == 0) throw ValidationError("number of sentences must be at least 1");
  Rng rng(seed);
  SyntheticCorpus out;
  for (std::size_t i = 0; i < n_sentences; ++i) {
    SyntheticPair pair;
    try {
      pair = generate_pair(pool, dist, rng, max_attempts);
    } catch (const GenerationExhausted& e) {
      throw GenerationExhausted("after " + std::to_string(i) + " of " + std::to_string(n_sentences) +
                                " sentences: " + e.what());
    }
    out.gold.sentences.push_back({pair.corrupted, std::move(pair.gold)});
    out.corrupted.push_back(std::move(pair.corrupted));
    out.clean.push_back(std::move(pair.clean));
  }
  return out;
}

void write_synthetic(const std::string& prefix, const SyntheticCorpus& corpus) {
  auto write_lines = [](const std::string& path, const std::vector<Tokens>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    for (const auto& l : lines) out << join_tokens(l) << '\n';
    if (!out) throw IoError("write failed for " + path);
  };
  write_lines(prefix + ".src", corpus.corrupted);
  write_lines(prefix + ".trg", corpus.clean);
  write_m2_file(prefix + ".m2", corpus.gold);
}

}  // namespace gecomb
