#pragma once

// Learns which (error type, agreement subset) groups of two systems' edits to
// keep so that F-beta on a development set is maximal, and applies the
// learned selection to new outputs of the same systems.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gecomb/align.hpp"
#include "gecomb/m2.hpp"
#include "gecomb/score.hpp"

namespace gecomb {

enum class Subset { kOnlyA = 0, kOnlyB = 1, kBoth = 2 };

inline constexpr std::array<Subset, 3> kAllSubsets = {Subset::kOnlyA, Subset::kOnlyB, Subset::kBoth};

std::string_view subset_name(Subset s);
std::optional<Subset> parse_subset(std::string_view name);

struct SystemOutput {
  std::string name;
  M2Corpus corpus;
};

// The three disjoint edit sets of a system pair over shared source sentences.
struct Partition {
  std::array<M2Corpus, 3> parts;

  M2Corpus& operator[](Subset s) { return parts[static_cast<int>(s)]; }
  const M2Corpus& operator[](Subset s) const { return parts[static_cast<int>(s)]; }
};

// Edits are keyed by EditKey; a key present in both systems goes to kBoth
// with a's label. Duplicate keys within one system are kept once.
Partition partition_pair(const SystemOutput& a, const SystemOutput& b);

struct CellStats {
  std::string etype;
  Subset subset = Subset::kOnlyA;
  std::int64_t tp = 0;
  std::int64_t fp = 0;

  std::int64_t samples() const { return tp + fp; }
  friend bool operator==(const CellStats&, const CellStats&) = default;
};

struct StatsTable {
  // Sorted by (etype, subset); cells with tp == fp == 0 are absent.
  std::vector<CellStats> cells;
  std::map<std::string, std::int64_t> gold_total_per_type;
  std::int64_t gold_total = 0;
};

StatsTable build_stats(const Partition& parts, const M2Corpus& gold, int annotator = 0);

enum class Rounding { kRound, kSample };

std::string_view rounding_name(Rounding r);
std::optional<Rounding> parse_rounding(std::string_view name);

struct PolicyEntry {
  std::string etype;
  Subset subset = Subset::kOnlyA;
  double s = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  double precision = 0.0;
};

struct PolicyMetadata {
  std::string dev_name;
  std::vector<std::string> system_names;
  // Creation statistics.
  std::int64_t gold_total = 0;
  double objective = 0.0;     // F-beta predicted by the optimizer on dev
  double dev_f = 0.0;         // F-beta realized on dev after application
  std::string selected = "optimized";  // optimized | system_a | system_b
  bool retyped = true;        // edits relabelled by classify_edit
};

struct SelectionPolicy {
  double beta = kDefaultBeta;
  std::int64_t min_samples = 2;
  Rounding rounding = Rounding::kRound;
  std::vector<PolicyEntry> entries;
  PolicyMetadata metadata;

  // Selection value of a cell; unseen cells are 0.
  double value(std::string_view etype, Subset subset) const;
};

// F-beta of the relaxed objective for selection values `s` (one per cell).
double selection_objective(const StatsTable& stats, const std::vector<double>& s, double beta);

// Maximizes F-beta over s in [0,1]^cells with the Dinkelbach iteration.
// Cells with tp + fp < min_samples are fixed to 0.
SelectionPolicy optimize_selection(const StatsTable& stats, double beta = kDefaultBeta, std::int64_t min_samples = 2,
                                   Rounding rounding = Rounding::kRound);

struct CombineOptions {
  double beta = kDefaultBeta;
  int annotator = 0;
  std::int64_t min_samples = 2;
  Rounding rounding = Rounding::kRound;
  std::uint64_t seed = 0;
  // Relabel all edits (systems and gold) with classify_edit before use.
  bool retype = true;
  const WordSet* dictionary = nullptr;
  std::string dev_name;
};

// Keeps each edit of the pair whose cell is selected (with probability s for
// fractional values), then resolves overlaps: Both before OnlyA before
// OnlyB, then lower start, shorter span, smaller replacement.
M2Corpus apply_policy(const SystemOutput& a, const SystemOutput& b, const SelectionPolicy& policy,
                      std::uint64_t seed = 0, const WordSet* dictionary = nullptr);

struct TrainResult {
  SelectionPolicy policy;
  M2Corpus combined;  // policy applied to the dev inputs
  Score score_a;
  Score score_b;
  Score score_combined;
};

// Optimizes a policy on dev, applies it, and keeps whichever of the optimized
// policy and the two single-system policies scores best on dev, so the
// result is never worse than either input.
TrainResult train_pair(const SystemOutput& a, const SystemOutput& b, const M2Corpus& gold,
                       const CombineOptions& options = {});

struct IterativeResult {
  M2Corpus combined;
  std::vector<SelectionPolicy> policies;
  std::vector<Score> step_scores;  // dev score after each fold step
};

// Left fold: combine(s1, s2), then combine(result, s3), ... Each step trains
// on the same gold.
IterativeResult combine_iterative(const std::vector<SystemOutput>& systems, const M2Corpus& gold,
                                  const CombineOptions& options = {});

// Replays the fold on unseen outputs with stored policies.
M2Corpus replay_iterative(const std::vector<SystemOutput>& systems, const std::vector<SelectionPolicy>& policies,
                          std::uint64_t seed = 0, const WordSet* dictionary = nullptr);

// Combination with an empty second system: drops error types that hurt F.
TrainResult filter_system(const SystemOutput& a, const M2Corpus& gold, const CombineOptions& options = {});

// Policy file (JSON) with a stable field order.
std::string policy_to_json(const SelectionPolicy& policy);
SelectionPolicy policy_from_json(std::string_view text);
void write_policy_file(const std::string& path, const SelectionPolicy& policy);
SelectionPolicy read_policy_file(const std::string& path);

}  // namespace gecomb
