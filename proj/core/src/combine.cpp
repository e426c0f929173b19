#include "gecomb/combine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gecomb/error.hpp"
#include "gecomb/random.hpp"

namespace gecomb {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kPolicyVersion = 1;
constexpr int kMaxDinkelbachIterations = 100;
// Relative tolerance below which a cell's linearized gain counts as a tie.
constexpr double kTieTolerance = 1e-12;

int arbitration_rank(Subset s) {
  switch (s) {
    case Subset::kBoth:
      return 0;
    case Subset::kOnlyA:
      return 1;
    case Subset::kOnlyB:
      return 2;
  }
  return 3;
}

SystemOutput typed(const SystemOutput& system, bool retype, const WordSet* dictionary) {
  if (!retype) return system;
  static const WordSet kEmpty;
  return {system.name, retype_corpus(system.corpus, dictionary ? *dictionary : kEmpty)};
}

SelectionPolicy single_system_policy(const SelectionPolicy& base, Subset dropped) {
  SelectionPolicy policy = base;
  for (auto& e : policy.entries) e.s = e.subset == dropped ? 0.0 : 1.0;
  return policy;
}

}  // namespace

std::string_view subset_name(Subset s) {
  switch (s) {
    case Subset::kOnlyA:
      return "only_a";
    case Subset::kOnlyB:
      return "only_b";
    case Subset::kBoth:
      return "both";
  }
  return "?";
}

std::optional<Subset> parse_subset(std::string_view name) {
  for (auto s : kAllSubsets) {
    if (subset_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view rounding_name(Rounding r) { return r == Rounding::kRound ? "round" : "sample"; }

std::optional<Rounding> parse_rounding(std::string_view name) {
  if (name == "round") return Rounding::kRound;
  if (name == "sample") return Rounding::kSample;
  return std::nullopt;
}

double SelectionPolicy::value(std::string_view etype, Subset subset) const {
  for (const auto& e : entries) {
    if (e.subset == subset && e.etype == etype) return e.s;
  }
  return 0.0;
}

Partition partition_pair(const SystemOutput& a, const SystemOutput& b) {
  check_aligned(a.corpus, b.corpus);
  Partition out;
  for (auto& part : out.parts) part = strip_edits(a.corpus);

  for (std::size_t i = 0; i < a.corpus.size(); ++i) {
    std::set<EditKey> keys_a;
    std::set<EditKey> keys_b;
    for (const auto& e : b.corpus.sentences[i].edits) keys_b.insert(key_of(i, e));
    for (const auto& e : a.corpus.sentences[i].edits) {
      const auto key = key_of(i, e);
      if (!keys_a.insert(key).second) continue;
      const Subset s = keys_b.contains(key) ? Subset::kBoth : Subset::kOnlyA;
      out[s].sentences[i].edits.push_back(e);
    }
    std::set<EditKey> seen_b;
    for (const auto& e : b.corpus.sentences[i].edits) {
      const auto key = key_of(i, e);
      if (!seen_b.insert(key).second || keys_a.contains(key)) continue;
      out[Subset::kOnlyB].sentences[i].edits.push_back(e);
    }
  }
  return out;
}

StatsTable build_stats(const Partition& parts, const M2Corpus& gold, int annotator) {
  StatsTable table;
  std::map<std::pair<std::string, Subset>, CellStats> cells;
  for (auto s : kAllSubsets) {
    for (const auto& [etype, counts] : match_edits(parts[s], gold, annotator)) {
      if (counts.tp == 0 && counts.fp == 0) continue;
      cells[{etype, s}] = CellStats{etype, s, counts.tp, counts.fp};
    }
  }
  for (auto& [_, cell] : cells) table.cells.push_back(std::move(cell));
  for (const auto& sentence : gold.sentences) {
    for (const auto& e : sentence.edits) {
      if (e.annotator != annotator) continue;
      ++table.gold_total_per_type[e.etype];
      ++table.gold_total;
    }
  }
  return table;
}

double selection_objective(const StatsTable& stats, const std::vector<double>& s, double beta) {
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t c = 0; c < stats.cells.size(); ++c) {
    tp += static_cast<double>(stats.cells[c].tp) * s[c];
    fp += static_cast<double>(stats.cells[c].fp) * s[c];
  }
  return f_beta_from_counts(tp, fp, static_cast<double>(stats.gold_total) - tp, beta);
}

SelectionPolicy optimize_selection(const StatsTable& stats, double beta, std::int64_t min_samples,
                                   Rounding rounding) {
  const double w = 1.0 + beta * beta;
  const std::size_t n = stats.cells.size();
  std::vector<bool> eligible(n);
  for (std::size_t c = 0; c < n; ++c) {
    eligible[c] = stats.cells[c].samples() > 0 && stats.cells[c].samples() >= min_samples;
  }

  // Dinkelbach: maximize N(s) - lambda * D(s) cell by cell, where
  // N = (1+b^2) TP and D = TP + FP + b^2 G, then move lambda to N/D.
  auto best_response = [&](double lambda) {
    std::vector<double> s(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      if (!eligible[c]) continue;
      const auto tp = static_cast<double>(stats.cells[c].tp);
      const auto fp = static_cast<double>(stats.cells[c].fp);
      const double gain = w * tp - lambda * (tp + fp);
      if (gain > kTieTolerance * (w * tp + lambda * (tp + fp))) s[c] = 1.0;
    }
    return s;
  };

  double lambda = 0.0;
  std::vector<double> best(n, 0.0);
  double best_value = 0.0;
  for (int iter = 0; iter < kMaxDinkelbachIterations; ++iter) {
    auto s = best_response(lambda);
    const double value = selection_objective(stats, s, beta);
    if (value >= best_value) {
      best = s;
      best_value = value;
    }
    if (value <= lambda) break;
    lambda = value;
  }

  if (rounding == Rounding::kSample) {
    // Cells whose gain vanishes at the optimum leave F unchanged for any
    // selection value; sampling mode keeps them half the time.
    for (std::size_t c = 0; c < n; ++c) {
      if (!eligible[c] || best[c] != 0.0 || stats.cells[c].tp == 0) continue;
      const auto tp = static_cast<double>(stats.cells[c].tp);
      const auto fp = static_cast<double>(stats.cells[c].fp);
      const double gain = w * tp - best_value * (tp + fp);
      if (std::fabs(gain) <= kTieTolerance * (w * tp + best_value * (tp + fp))) best[c] = 0.5;
    }
  }

  SelectionPolicy policy;
  policy.beta = beta;
  policy.min_samples = min_samples;
  policy.rounding = rounding;
  policy.metadata.gold_total = stats.gold_total;
  policy.metadata.objective = selection_objective(stats, best, beta);
  for (std::size_t c = 0; c < n; ++c) {
    const auto& cell = stats.cells[c];
    const double precision = cell.samples() > 0 ? static_cast<double>(cell.tp) / static_cast<double>(cell.samples()) : 0.0;
    policy.entries.push_back({cell.etype, cell.subset, best[c], cell.tp, cell.fp, precision});
  }
  return policy;
}

M2Corpus apply_policy(const SystemOutput& a, const SystemOutput& b, const SelectionPolicy& policy,
                      std::uint64_t seed, const WordSet* dictionary) {
  const bool retype = policy.metadata.retyped;
  const auto parts = partition_pair(typed(a, retype, dictionary), typed(b, retype, dictionary));
  std::map<std::pair<std::string, Subset>, double> lookup;
  for (const auto& e : policy.entries) lookup[{e.etype, e.subset}] = e.s;

  Rng rng(seed);
  M2Corpus out = strip_edits(a.corpus);
  for (std::size_t i = 0; i < out.size(); ++i) {
    struct Candidate {
      Subset subset;
      const Edit* edit;
    };
    std::vector<Candidate> kept;
    for (auto s : kAllSubsets) {
      for (const auto& e : parts[s].sentences[i].edits) {
        const auto it = lookup.find({e.etype, s});
        const double value = it == lookup.end() ? 0.0 : it->second;
        if (value >= 1.0 || (value > 0.0 && rng.bernoulli(value))) kept.push_back({s, &e});
      }
    }
    std::stable_sort(kept.begin(), kept.end(), [](const Candidate& x, const Candidate& y) {
      const auto kx = std::make_tuple(arbitration_rank(x.subset), x.edit->start, x.edit->end - x.edit->start);
      const auto ky = std::make_tuple(arbitration_rank(y.subset), y.edit->start, y.edit->end - y.edit->start);
      if (kx != ky) return kx < ky;
      return x.edit->replacement < y.edit->replacement;
    });
    auto& edits = out.sentences[i].edits;
    for (const auto& c : kept) {
      const bool clash = std::any_of(edits.begin(), edits.end(), [&](const Edit& e) { return edits_overlap(e, *c.edit); });
      if (clash) continue;
      Edit e = *c.edit;
      e.annotator = 0;
      edits.push_back(std::move(e));
    }
    sort_edits(edits);
  }
  return out;
}

TrainResult train_pair(const SystemOutput& a, const SystemOutput& b, const M2Corpus& gold,
                       const CombineOptions& options) {
  check_aligned(a.corpus, gold);
  check_aligned(b.corpus, gold);
  static const WordSet kEmpty;
  const WordSet& dict = options.dictionary ? *options.dictionary : kEmpty;
  const M2Corpus dev_gold = options.retype ? retype_corpus(gold, dict) : gold;
  const auto ta = typed(a, options.retype, options.dictionary);
  const auto tb = typed(b, options.retype, options.dictionary);

  const auto stats = build_stats(partition_pair(ta, tb), dev_gold, options.annotator);
  SelectionPolicy optimized = optimize_selection(stats, options.beta, options.min_samples, options.rounding);
  optimized.metadata.dev_name = options.dev_name;
  optimized.metadata.system_names = {a.name, b.name};
  optimized.metadata.retyped = options.retype;

  TrainResult result;
  result.score_a = score_corpus(ta.corpus, dev_gold, options.beta, options.annotator).overall;
  result.score_b = score_corpus(tb.corpus, dev_gold, options.beta, options.annotator).overall;

  struct Candidate {
    SelectionPolicy policy;
    const char* label;
  };
  std::vector<Candidate> candidates = {
      {optimized, "optimized"},
      {single_system_policy(optimized, Subset::kOnlyB), "system_a"},
      {single_system_policy(optimized, Subset::kOnlyA), "system_b"},
  };
  bool first = true;
  for (auto& [policy, label] : candidates) {
    auto combined = apply_policy(a, b, policy, options.seed, options.dictionary);
    const auto score = score_corpus(combined, dev_gold, options.beta, options.annotator).overall;
    if (first || score.f_beta > result.score_combined.f_beta) {
      policy.metadata.selected = label;
      policy.metadata.dev_f = score.f_beta;
      result.policy = std::move(policy);
      result.combined = std::move(combined);
      result.score_combined = score;
      first = false;
    }
  }
  return result;
}

IterativeResult combine_iterative(const std::vector<SystemOutput>& systems, const M2Corpus& gold,
                                  const CombineOptions& options) {
  if (systems.size() < 2) throw ValidationError("combination needs at least 2 systems");
  IterativeResult result;
  SystemOutput current = systems[0];
  for (std::size_t k = 1; k < systems.size(); ++k) {
    auto step = train_pair(current, systems[k], gold, options);
    result.policies.push_back(std::move(step.policy));
    result.step_scores.push_back(step.score_combined);
    current = {current.name + "+" + systems[k].name, std::move(step.combined)};
  }
  result.combined = std::move(current.corpus);
  return result;
}

M2Corpus replay_iterative(const std::vector<SystemOutput>& systems, const std::vector<SelectionPolicy>& policies,
                          std::uint64_t seed, const WordSet* dictionary) {
  if (systems.size() < 2) throw ValidationError("combination needs at least 2 systems");
  if (policies.size() != systems.size() - 1) {
    throw ValidationError("expected " + std::to_string(systems.size() - 1) + " policies for " +
                          std::to_string(systems.size()) + " systems, got " + std::to_string(policies.size()));
  }
  SystemOutput current = systems[0];
  for (std::size_t k = 1; k < systems.size(); ++k) {
    current.corpus = apply_policy(current, systems[k], policies[k - 1], seed, dictionary);
    current.name += "+" + systems[k].name;
  }
  return current.corpus;
}

TrainResult filter_system(const SystemOutput& a, const M2Corpus& gold, const CombineOptions& options) {
  const SystemOutput empty{"<none>", strip_edits(a.corpus)};
  return train_pair(a, empty, gold, options);
}

std::string policy_to_json(const SelectionPolicy& policy) {
  Json j;
  j["version"] = kPolicyVersion;
  j["beta"] = policy.beta;
  j["min_samples"] = policy.min_samples;
  auto entries = Json::array();
  for (const auto& e : policy.entries) {
    Json row;
    row["etype"] = e.etype;
    row["subset"] = subset_name(e.subset);
    row["s"] = e.s;
    row["tp"] = e.tp;
    row["fp"] = e.fp;
    row["precision"] = e.precision;
    entries.push_back(std::move(row));
  }
  j["entries"] = std::move(entries);
  Json meta;
  meta["dev_name"] = policy.metadata.dev_name;
  Json created;
  created["rounding"] = rounding_name(policy.rounding);
  created["retyped"] = policy.metadata.retyped;
  created["gold_total"] = policy.metadata.gold_total;
  created["objective"] = policy.metadata.objective;
  created["dev_f"] = policy.metadata.dev_f;
  created["selected"] = policy.metadata.selected;
  meta["created"] = std::move(created);
  meta["system_names"] = policy.metadata.system_names;
  j["metadata"] = std::move(meta);
  return j.dump(2) + "\n";
}

SelectionPolicy policy_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("policy: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != kPolicyVersion) throw ValidationError("policy: unsupported version");
    SelectionPolicy policy;
    policy.beta = j.at("beta").get<double>();
    policy.min_samples = j.at("min_samples").get<std::int64_t>();
    if (!(policy.beta > 0.0)) throw ValidationError("policy: beta must be positive");
    for (const auto& row : j.at("entries")) {
      PolicyEntry e;
      e.etype = row.at("etype").get<std::string>();
      const auto subset = parse_subset(row.at("subset").get<std::string>());
      if (!subset) throw ValidationError("policy: unknown subset " + row.at("subset").dump());
      e.subset = *subset;
      e.s = row.at("s").get<double>();
      if (!(e.s >= 0.0 && e.s <= 1.0)) throw ValidationError("policy: selection value outside [0,1]");
      e.tp = row.at("tp").get<std::int64_t>();
      e.fp = row.at("fp").get<std::int64_t>();
      e.precision = row.at("precision").get<double>();
      policy.entries.push_back(std::move(e));
    }
    const auto& meta = j.at("metadata");
    policy.metadata.dev_name = meta.at("dev_name").get<std::string>();
    policy.metadata.system_names = meta.at("system_names").get<std::vector<std::string>>();
    const auto& created = meta.at("created");
    const auto rounding = parse_rounding(created.at("rounding").get<std::string>());
    if (!rounding) throw ValidationError("policy: unknown rounding mode");
    policy.rounding = *rounding;
    policy.metadata.retyped = created.at("retyped").get<bool>();
    policy.metadata.gold_total = created.at("gold_total").get<std::int64_t>();
    policy.metadata.objective = created.at("objective").get<double>();
    policy.metadata.dev_f = created.at("dev_f").get<double>();
    policy.metadata.selected = created.at("selected").get<std::string>();
    return policy;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("policy: ") + e.what());
  }
}

void write_policy_file(const std::string& path, const SelectionPolicy& policy) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << policy_to_json(policy);
  if (!out) throw IoError("write failed for " + path);
}

SelectionPolicy read_policy_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return policy_from_json(buf.str());
}

}  // namespace gecomb
