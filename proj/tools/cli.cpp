#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "gecomb/align.hpp"
#include "gecomb/combine.hpp"
#include "gecomb/error.hpp"
#include "gecomb/m2.hpp"
#include "gecomb/parallel.hpp"
#include "gecomb/random.hpp"
#include "gecomb/score.hpp"
#include "gecomb/spellcheck.hpp"
#include "gecomb/synth.hpp"

namespace gecomb::cli {
namespace {

using Json = nlohmann::ordered_json;

// Systems are named by file name so reports and policies do not depend on
// where the inputs live.
SystemOutput load_system(const std::string& path) {
  return {std::filesystem::path(path).filename().string(), read_m2_file(path)};
}

struct RunConfig {
  double beta = kDefaultBeta;
  int annotator = 0;
  std::int64_t min_samples = 2;
  std::uint64_t seed = 0;
  std::optional<double> holdout;
  std::string rounding = "round";
  std::size_t threads = 1;
  bool json = false;
  std::string dict_path;
};

void add_beta(CLI::App* app, RunConfig& cfg) {
  app->add_option("--beta", cfg.beta, "F-beta weight of precision over recall")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}
void add_annotator(CLI::App* app, RunConfig& cfg) {
  app->add_option("--annotator", cfg.annotator, "Gold annotator id")->check(CLI::NonNegativeNumber)->capture_default_str();
}
void add_seed(CLI::App* app, RunConfig& cfg) {
  app->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
}
void add_threads(CLI::App* app, RunConfig& cfg) {
  app->add_option("--threads", cfg.threads, "Worker threads for per-sentence work")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}
void add_json(CLI::App* app, RunConfig& cfg) { app->add_flag("--json", cfg.json, "Machine-readable JSON report"); }
void add_dict(CLI::App* app, RunConfig& cfg) {
  app->add_option("--dict", cfg.dict_path, "Dictionary, one word per line (used by the edit typer)");
}
void add_training(CLI::App* app, RunConfig& cfg) {
  add_beta(app, cfg);
  add_annotator(app, cfg);
  app->add_option("--min-samples", cfg.min_samples, "Cells with fewer TP+FP are never selected (0 disables)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_seed(app, cfg);
  app->add_option("--rounding", cfg.rounding, "Selection values: round or sample")
      ->check(CLI::IsMember({"round", "sample"}))
      ->capture_default_str();
  add_json(app, cfg);
  add_dict(app, cfg);
}

WordSet load_dict(const std::string& path) {
  WordSet words;
  if (path.empty()) return words;
  for (auto& w : read_lines_file(path)) {
    auto toks = split_tokens(w);
    if (!toks.empty()) words.insert(std::move(toks.front()));
  }
  return words;
}

std::vector<std::string> read_text_lines(const std::string& path) { return read_lines_file(path); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

std::string fmt_score_row(const std::string& name, const Score& s) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-24s %8.4f %8.4f %8.4f\n", name.c_str(), s.precision, s.recall, s.f_beta);
  return buf;
}

std::string score_header(double beta) {
  char buf[128];
  char fcol[16];
  std::snprintf(fcol, sizeof fcol, "F%.2g", beta);
  std::snprintf(buf, sizeof buf, "%-24s %8s %8s %8s\n", "system", "P", "R", fcol);
  return buf;
}

Json score_json(const Score& s) {
  Json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f_beta"] = s.f_beta;
  return j;
}

M2Corpus select_sentences(const M2Corpus& corpus, const std::vector<std::size_t>& ids) {
  M2Corpus out;
  for (auto i : ids) out.sentences.push_back(corpus.sentences[i]);
  return out;
}

// Seeded random split; returns (train ids, held-out ids), each ascending.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> holdout_split(std::size_t n, double fraction,
                                                                           std::uint64_t seed) {
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(ids[i - 1], ids[rng.uniform_below(i)]);
  const auto held = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> test(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(held));
  std::vector<std::size_t> train(ids.begin() + static_cast<std::ptrdiff_t>(held), ids.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

CombineOptions combine_options(const RunConfig& cfg, const WordSet* dict, const std::string& dev_name) {
  CombineOptions opt;
  opt.beta = cfg.beta;
  opt.annotator = cfg.annotator;
  opt.min_samples = cfg.min_samples;
  opt.rounding = *parse_rounding(cfg.rounding);
  opt.seed = cfg.seed;
  opt.dictionary = dict;
  opt.dev_name = dev_name;
  return opt;
}

// Scores a corpus against gold with the same typing the combiner uses.
Score typed_score(const M2Corpus& hyp, const M2Corpus& gold, const RunConfig& cfg, const WordSet& dict) {
  return score_corpus(retype_corpus(hyp, dict), retype_corpus(gold, dict), cfg.beta, cfg.annotator).overall;
}

// ---- subcommands -------------------------------------------------------

struct ExtractArgs {
  std::string orig, cor, out;
};

int cmd_extract(const ExtractArgs& a, const RunConfig& cfg, std::ostream&, std::ostream& err) {
  const auto orig = read_text_lines(a.orig);
  const auto cor = read_text_lines(a.cor);
  if (orig.size() != cor.size()) {
    err << "error: line counts differ (" << orig.size() << " vs " << cor.size() << ")\n";
    return kExitValidation;
  }
  const auto dict = load_dict(cfg.dict_path);
  M2Corpus corpus;
  corpus.sentences.resize(orig.size());
  parallel_for(orig.size(), cfg.threads, [&](std::size_t i) {
    auto src = split_tokens(orig[i]);
    const auto trg = split_tokens(cor[i]);
    corpus.sentences[i].edits = extract_edits(src, trg, dict);
    corpus.sentences[i].tokens = std::move(src);
  });
  write_m2_file(a.out, corpus);
  return kExitOk;
}

struct TrainArgs {
  std::string a, b, gold, out, dev_name;
};

int cmd_train(const TrainArgs& args, const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto dict = load_dict(cfg.dict_path);
  SystemOutput a = load_system(args.a);
  SystemOutput b = load_system(args.b);
  const auto gold = read_m2_file(args.gold);
  check_aligned(a.corpus, gold);
  check_aligned(b.corpus, gold);

  SystemOutput train_a = a;
  SystemOutput train_b = b;
  M2Corpus train_gold = gold;
  std::vector<std::size_t> test_ids;
  if (cfg.holdout) {
    auto [train_ids, held] = holdout_split(gold.size(), *cfg.holdout, cfg.seed);
    train_a.corpus = select_sentences(a.corpus, train_ids);
    train_b.corpus = select_sentences(b.corpus, train_ids);
    train_gold = select_sentences(gold, train_ids);
    test_ids = std::move(held);
  }

  const auto result = train_pair(train_a, train_b, train_gold,
                                 combine_options(cfg, &dict, args.dev_name.empty() ? args.gold : args.dev_name));
  write_policy_file(args.out, result.policy);
  const bool dominates =
      result.score_combined.f_beta >= std::max(result.score_a.f_beta, result.score_b.f_beta) - 1e-9;

  std::optional<std::array<Score, 3>> held_scores;
  if (cfg.holdout) {
    const SystemOutput ha{a.name, select_sentences(a.corpus, test_ids)};
    const SystemOutput hb{b.name, select_sentences(b.corpus, test_ids)};
    const auto hg = select_sentences(gold, test_ids);
    const auto combined = apply_policy(ha, hb, result.policy, cfg.seed, &dict);
    held_scores = {typed_score(ha.corpus, hg, cfg, dict), typed_score(hb.corpus, hg, cfg, dict),
                   typed_score(combined, hg, cfg, dict)};
  }

  if (cfg.json) {
    Json j;
    Json dev;
    dev["a"] = score_json(result.score_a);
    dev["b"] = score_json(result.score_b);
    dev["combined"] = score_json(result.score_combined);
    j["dev"] = std::move(dev);
    if (held_scores) {
      Json held;
      held["a"] = score_json((*held_scores)[0]);
      held["b"] = score_json((*held_scores)[1]);
      held["combined"] = score_json((*held_scores)[2]);
      j["heldout"] = std::move(held);
    }
    j["selected"] = result.policy.metadata.selected;
    j["dominates"] = dominates;
    out << j.dump(2) << "\n";
  } else {
    out << score_header(cfg.beta);
    out << fmt_score_row("dev A", result.score_a);
    out << fmt_score_row("dev B", result.score_b);
    out << fmt_score_row("dev combined", result.score_combined);
    if (held_scores) {
      out << fmt_score_row("heldout A", (*held_scores)[0]);
      out << fmt_score_row("heldout B", (*held_scores)[1]);
      out << fmt_score_row("heldout combined", (*held_scores)[2]);
    }
    out << "selected policy: " << result.policy.metadata.selected << "\n";
    out << "dev F(combined) >= max(F(A), F(B)): " << (dominates ? "yes" : "NO") << "\n";
  }
  return kExitOk;
}

struct ApplyPolicyArgs {
  std::string a, b, policy, out;
};

int cmd_apply_policy(const ApplyPolicyArgs& args, const RunConfig& cfg, std::ostream&, std::ostream&) {
  const auto dict = load_dict(cfg.dict_path);
  const SystemOutput a = load_system(args.a);
  const SystemOutput b = load_system(args.b);
  const auto policy = read_policy_file(args.policy);
  write_m2_file(args.out, apply_policy(a, b, policy, cfg.seed, &dict));
  return kExitOk;
}

struct CombineArgs {
  std::vector<std::string> systems;
  std::string gold, out, policy_prefix;
};

int cmd_combine(const CombineArgs& args, const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto dict = load_dict(cfg.dict_path);
  std::vector<SystemOutput> systems;
  for (const auto& path : args.systems) systems.push_back(load_system(path));
  const auto gold = read_m2_file(args.gold);
  const auto result = combine_iterative(systems, gold, combine_options(cfg, &dict, args.gold));
  write_m2_file(args.out, result.combined);
  for (std::size_t k = 0; k < result.policies.size(); ++k) {
    write_policy_file(args.policy_prefix + "." + std::to_string(k + 1) + ".json", result.policies[k]);
  }
  if (cfg.json) {
    Json j = Json::array();
    for (std::size_t k = 0; k < result.step_scores.size(); ++k) {
      Json row = score_json(result.step_scores[k]);
      row["step"] = k + 1;
      row["selected"] = result.policies[k].metadata.selected;
      j.push_back(std::move(row));
    }
    out << j.dump(2) << "\n";
  } else {
    out << score_header(cfg.beta);
    for (const auto& s : systems) out << fmt_score_row(s.name, typed_score(s.corpus, gold, cfg, dict));
    for (std::size_t k = 0; k < result.step_scores.size(); ++k) {
      out << fmt_score_row("step " + std::to_string(k + 1), result.step_scores[k]);
    }
  }
  return kExitOk;
}

struct ReplayArgs {
  std::vector<std::string> systems, policies;
  std::string out;
};

int cmd_replay(const ReplayArgs& args, const RunConfig& cfg, std::ostream&, std::ostream&) {
  const auto dict = load_dict(cfg.dict_path);
  std::vector<SystemOutput> systems;
  for (const auto& path : args.systems) systems.push_back(load_system(path));
  std::vector<SelectionPolicy> policies;
  for (const auto& path : args.policies) policies.push_back(read_policy_file(path));
  write_m2_file(args.out, replay_iterative(systems, policies, cfg.seed, &dict));
  return kExitOk;
}

struct FilterArgs {
  std::string system, gold, out, policy_out;
};

int cmd_filter(const FilterArgs& args, const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto dict = load_dict(cfg.dict_path);
  const SystemOutput a = load_system(args.system);
  const auto gold = read_m2_file(args.gold);
  const auto result = filter_system(a, gold, combine_options(cfg, &dict, args.gold));
  write_m2_file(args.out, result.combined);
  if (!args.policy_out.empty()) write_policy_file(args.policy_out, result.policy);
  if (cfg.json) {
    Json j;
    j["original"] = score_json(result.score_a);
    j["filtered"] = score_json(result.score_combined);
    out << j.dump(2) << "\n";
  } else {
    out << score_header(cfg.beta);
    out << fmt_score_row("original", result.score_a);
    out << fmt_score_row("filtered", result.score_combined);
  }
  return kExitOk;
}

struct ScoreArgs {
  std::string hyp, ref;
};

int cmd_score(const ScoreArgs& args, const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto report = score_corpus(read_m2_file(args.hyp), read_m2_file(args.ref), cfg.beta, cfg.annotator);
  out << (cfg.json ? format_report_json(report) : format_report(report));
  return kExitOk;
}

struct ApplyArgs {
  std::string m2, out;
};

int cmd_apply(const ApplyArgs& args, const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto corpus = read_m2_file(args.m2);
  std::string text;
  for (const auto& s : corpus.sentences) {
    const auto edits = edits_of(s, cfg.annotator);
    text += join_tokens(apply_edits(s.tokens, edits));
    text += '\n';
  }
  if (args.out.empty() || args.out == "-") {
    out << text;
  } else {
    write_text(args.out, text);
  }
  return kExitOk;
}

struct SpellBuildArgs {
  std::vector<std::string> corpora;
  std::string dict, out;
};

int cmd_spell_build(const SpellBuildArgs& args, const RunConfig& cfg, std::ostream&, std::ostream&) {
  std::vector<std::string> lines;
  for (const auto& path : args.corpora) {
    auto more = read_text_lines(path);
    lines.insert(lines.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  }
  std::vector<WordCounts> shards(cfg.threads);
  const std::size_t block = (lines.size() + cfg.threads - 1) / std::max<std::size_t>(cfg.threads, 1);
  parallel_for(cfg.threads, cfg.threads, [&](std::size_t t) {
    for (std::size_t i = t * block; i < std::min(lines.size(), (t + 1) * block); ++i) count_words(lines[i], shards[t]);
  });
  WordCounts counts;
  for (const auto& s : shards) merge_counts(counts, s);
  // The dictionary is stored separately; it is only validated here.
  if (!args.dict.empty()) (void)read_text_lines(args.dict);
  write_text(args.out, write_model_tsv(counts));
  return kExitOk;
}

struct SpellCorrectArgs {
  std::string model, dict, input, output;
  std::int64_t known_min = FrequencyModel::kDefaultKnownMinCount;
  std::int64_t candidate_min = FrequencyModel::kDefaultCandidateMinCount;
};

int cmd_spell_correct(const SpellCorrectArgs& args, const RunConfig& cfg, std::istream& in, std::ostream& out,
                      std::ostream&) {
  std::ifstream model_in(args.model, std::ios::binary);
  if (!model_in) throw IoError("cannot open " + args.model);
  std::string model_text((std::istreambuf_iterator<char>(model_in)), std::istreambuf_iterator<char>());
  std::unordered_set<std::string> dict;
  if (!args.dict.empty()) {
    for (auto& w : read_text_lines(args.dict)) {
      auto toks = split_tokens(w);
      if (!toks.empty()) dict.insert(std::move(toks.front()));
    }
  }
  const FrequencyModel model(parse_model_tsv(model_text), std::move(dict), args.known_min, args.candidate_min);

  std::vector<std::string> lines;
  if (args.input.empty() || args.input == "-") {
    lines = read_lines(in);
  } else {
    lines = read_text_lines(args.input);
  }
  std::vector<std::string> fixed(lines.size());
  parallel_for(lines.size(), cfg.threads,
               [&](std::size_t i) { fixed[i] = join_tokens(correct_sentence(split_tokens(lines[i]), model)); });
  std::string text;
  for (const auto& l : fixed) {
    text += l;
    text += '\n';
  }
  if (args.output.empty() || args.output == "-") {
    out << text;
  } else {
    write_text(args.output, text);
  }
  return kExitOk;
}

struct SynthMeasureArgs {
  std::string train, out;
};

int cmd_synth_measure(const SynthMeasureArgs& args, const RunConfig& cfg, std::ostream&, std::ostream&) {
  write_text(args.out, distribution_to_json(measure_distribution(read_m2_file(args.train), cfg.annotator)));
  return kExitOk;
}

struct SynthGenerateArgs {
  std::string pool, dist, prefix;
  std::size_t n = 1;
  std::size_t max_attempts = 1000;
};

int cmd_synth_generate(const SynthGenerateArgs& args, const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::vector<Tokens> sentences;
  for (const auto& line : read_text_lines(args.pool)) {
    auto toks = split_tokens(line);
    if (!toks.empty()) sentences.push_back(std::move(toks));
  }
  std::ifstream dist_in(args.dist, std::ios::binary);
  if (!dist_in) throw IoError("cannot open " + args.dist);
  std::string dist_text((std::istreambuf_iterator<char>(dist_in)), std::istreambuf_iterator<char>());
  const auto dist = distribution_from_json(dist_text);
  const auto corpus = generate_corpus(SentencePool(std::move(sentences)), dist, args.n, cfg.seed, args.max_attempts);
  write_synthetic(args.prefix, corpus);

  // Realized edits-per-sentence histogram, for comparison with the target.
  std::map<std::size_t, std::size_t> realized;
  for (const auto& s : corpus.gold.sentences) ++realized[s.edits.size()];
  if (cfg.json) {
    Json j = Json::object();
    for (const auto& [k, c] : realized) j[std::to_string(k)] = static_cast<double>(c) / static_cast<double>(args.n);
    out << Json{{"realized_hist", j}}.dump(2) << "\n";
  } else {
    out << "edits  target  realized\n";
    std::set<std::size_t> keys;
    for (const auto& [k, _] : dist.per_sentence_hist) keys.insert(k);
    for (const auto& [k, _] : realized) keys.insert(k);
    for (auto k : keys) {
      const auto t = dist.per_sentence_hist.contains(k) ? dist.per_sentence_hist.at(k) : 0.0;
      const auto r = realized.contains(k) ? static_cast<double>(realized.at(k)) / static_cast<double>(args.n) : 0.0;
      char buf[96];
      std::snprintf(buf, sizeof buf, "%5zu  %6.4f  %8.4f\n", k, t, r);
      out << buf;
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"gecomb - combine grammatical error correction systems by F-beta optimal edit selection"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  RunConfig cfg;
  double holdout = 0.0;
  std::function<int()> action;

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "Extract M2 edits from original/corrected text files");
  extract->add_option("--orig", extract_args.orig, "Original sentences, one per line")->required();
  extract->add_option("--cor", extract_args.cor, "Corrected sentences, one per line")->required();
  extract->add_option("-o,--out", extract_args.out, "Output M2 file")->required();
  add_dict(extract, cfg);
  add_threads(extract, cfg);
  extract->callback([&] { action = [&] { return cmd_extract(extract_args, cfg, out, err); }; });

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Learn a selection policy for two systems on a dev set");
  train->add_option("--a", train_args.a, "System A M2")->required();
  train->add_option("--b", train_args.b, "System B M2")->required();
  train->add_option("--gold", train_args.gold, "Gold M2 of the dev set")->required();
  train->add_option("-o,--out", train_args.out, "Output policy JSON")->required();
  train->add_option("--dev-name", train_args.dev_name, "Dev-set identifier stored in the policy (default: gold path)");
  add_training(train, cfg);
  train->add_option("--holdout", holdout, "Fraction of sentences held out for reporting (0 < f < 1)")
      ->check(CLI::Validator(
          [](std::string& v) {
            const double f = std::stod(v);
            return f > 0.0 && f < 1.0 ? std::string{} : std::string("holdout must lie strictly between 0 and 1");
          },
          "(0,1)"));
  train->callback([&] {
    if (train->count("--holdout")) cfg.holdout = holdout;
    action = [&] { return cmd_train(train_args, cfg, out, err); };
  });

  ApplyPolicyArgs apply_policy_args;
  auto* applyp = app.add_subcommand("apply-policy", "Combine two systems with a learned policy");
  applyp->add_option("--a", apply_policy_args.a, "System A M2")->required();
  applyp->add_option("--b", apply_policy_args.b, "System B M2")->required();
  applyp->add_option("--policy", apply_policy_args.policy, "Policy JSON")->required();
  applyp->add_option("-o,--out", apply_policy_args.out, "Output M2")->required();
  add_seed(applyp, cfg);
  add_dict(applyp, cfg);
  applyp->callback([&] { action = [&] { return cmd_apply_policy(apply_policy_args, cfg, out, err); }; });

  CombineArgs combine_args;
  auto* combine = app.add_subcommand("combine", "Iteratively combine N systems on a dev set");
  combine->add_option("--sys", combine_args.systems, "System M2 files, in fold order")->required()->expected(2, -1);
  combine->add_option("--gold", combine_args.gold, "Gold M2 of the dev set")->required();
  combine->add_option("-o,--out", combine_args.out, "Output combined M2")->required();
  combine->add_option("--policy-prefix", combine_args.policy_prefix, "Policies are written to PREFIX.<step>.json")
      ->required();
  add_training(combine, cfg);
  combine->callback([&] { action = [&] { return cmd_combine(combine_args, cfg, out, err); }; });

  ReplayArgs replay_args;
  auto* replay = app.add_subcommand("replay", "Apply stored iterative policies to unseen system outputs");
  replay->add_option("--sys", replay_args.systems, "System M2 files, in fold order")->required()->expected(2, -1);
  replay->add_option("--policies", replay_args.policies, "Policy JSON files, one per fold step")->required();
  replay->add_option("-o,--out", replay_args.out, "Output combined M2")->required();
  add_seed(replay, cfg);
  add_dict(replay, cfg);
  replay->callback([&] { action = [&] { return cmd_replay(replay_args, cfg, out, err); }; });

  FilterArgs filter_args;
  auto* filter = app.add_subcommand("filter", "Drop error types that lower a single system's F-beta");
  filter->add_option("--sys", filter_args.system, "System M2")->required();
  filter->add_option("--gold", filter_args.gold, "Gold M2 of the dev set")->required();
  filter->add_option("-o,--out", filter_args.out, "Filtered M2")->required();
  filter->add_option("--policy-out", filter_args.policy_out, "Write the policy JSON here");
  add_training(filter, cfg);
  filter->callback([&] { action = [&] { return cmd_filter(filter_args, cfg, out, err); }; });

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "Score a hypothesis M2 against a reference M2");
  score->add_option("--hyp", score_args.hyp, "Hypothesis M2")->required();
  score->add_option("--ref", score_args.ref, "Reference M2")->required();
  add_beta(score, cfg);
  add_annotator(score, cfg);
  add_json(score, cfg);
  score->callback([&] { action = [&] { return cmd_score(score_args, cfg, out, err); }; });

  ApplyArgs apply_args;
  auto* apply = app.add_subcommand("apply", "Apply the edits of an M2 file and print corrected text");
  apply->add_option("--m2", apply_args.m2, "M2 file")->required();
  apply->add_option("-o,--out", apply_args.out, "Output text (default: stdout)");
  add_annotator(apply, cfg);
  apply->callback([&] { action = [&] { return cmd_apply(apply_args, cfg, out, err); }; });

  auto* spell = app.add_subcommand("spell", "Frequency-dictionary spellchecker");
  spell->require_subcommand(1);
  SpellBuildArgs spell_build_args;
  auto* build = spell->add_subcommand("build-model", "Count words of a monolingual corpus");
  build->add_option("--corpus", spell_build_args.corpora, "Corpus text files")->required();
  build->add_option("--dict", spell_build_args.dict, "Dictionary (checked for readability)");
  build->add_option("-o,--out", spell_build_args.out, "Output model TSV")->required();
  add_threads(build, cfg);
  build->callback([&] { action = [&] { return cmd_spell_build(spell_build_args, cfg, out, err); }; });

  SpellCorrectArgs spell_correct_args;
  auto* correct = spell->add_subcommand("correct", "Correct tokenized sentences from stdin");
  correct->add_option("--model", spell_correct_args.model, "Model TSV")->required();
  correct->add_option("--dict", spell_correct_args.dict, "Dictionary, one word per line");
  correct->add_option("-i,--input", spell_correct_args.input, "Input text (default: stdin)");
  correct->add_option("-o,--out", spell_correct_args.output, "Output text (default: stdout)");
  correct->add_option("--known-min", spell_correct_args.known_min, "Counts below this are unknown words")
      ->capture_default_str();
  correct->add_option("--candidate-min", spell_correct_args.candidate_min,
                      "Only words counted more often are frequency candidates")
      ->capture_default_str();
  add_threads(correct, cfg);
  correct->callback([&] { action = [&] { return cmd_spell_correct(spell_correct_args, cfg, in, out, err); }; });

  auto* synth = app.add_subcommand("synth", "Synthetic error generation");
  synth->require_subcommand(1);
  SynthMeasureArgs measure_args;
  auto* measure = synth->add_subcommand("measure", "Measure the correction distribution of an M2 corpus");
  measure->add_option("--train", measure_args.train, "Annotated M2 corpus")->required();
  measure->add_option("-o,--out", measure_args.out, "Output distribution JSON")->required();
  add_annotator(measure, cfg);
  measure->callback([&] { action = [&] { return cmd_synth_measure(measure_args, cfg, out, err); }; });

  SynthGenerateArgs generate_args;
  auto* generate = synth->add_subcommand("generate", "Inject errors into clean sentences");
  generate->add_option("--pool", generate_args.pool, "Clean sentences, one per line")->required();
  generate->add_option("--dist", generate_args.dist, "Distribution JSON")->required();
  generate->add_option("-n", generate_args.n, "Number of sentences")->required()->check(CLI::PositiveNumber);
  generate->add_option("-o,--out", generate_args.prefix, "Output prefix (.src, .trg, .m2)")->required();
  generate->add_option("--max-attempts", generate_args.max_attempts, "Draws per sentence before giving up")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_seed(generate, cfg);
  add_json(generate, cfg);
  generate->callback([&] { action = [&] { return cmd_synth_generate(generate_args, cfg, out, err); }; });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    return action ? action() : kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace gecomb::cli
