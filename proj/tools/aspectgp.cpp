// aspectgp: telicity classification over clause corpora.
//
// Pipeline: retrieve the clauses most similar to an input clause, read the
// aspectual indicators off each one, combine them with an evolved
// expression tree, and compare the summed score against a calibrated
// threshold.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "aspectgp/batch.hpp"
#include "aspectgp/classifier.hpp"
#include "aspectgp/corpus.hpp"
#include "aspectgp/index.hpp"
#include "aspectgp/synth.hpp"

namespace {

using namespace aspectgp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  std::string corpus_path;
  std::string model_path;
  std::string out_path;
  std::string spec_path;
  int k = 100;
  std::uint64_t seed = 42;
  std::string objective = "accuracy";
  int runs = 1;
  double train_fraction = 0.5;
  int pop = 500;
  int inserts = 10000;
  int tournament = 4;
  double mutation = 0.0;
  int jobs = 1;
};

void add_gp_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--pop", o.pop, "population size");
  cmd->add_option("--inserts", o.inserts, "total inserted individuals");
  cmd->add_option("--tournament", o.tournament, "tournament size");
  cmd->add_option("--mutation", o.mutation, "mutation rate");
}

GPConfig gp_config(const CommonOpts& o) {
  GPConfig gp;
  gp.population_size = o.pop;
  gp.total_inserts = o.inserts;
  gp.tournament_size = o.tournament;
  gp.mutation_rate = o.mutation;
  gp.seed = o.seed;
  return gp;
}

Objective objective_of(const CommonOpts& o) {
  const auto obj = parse_objective(o.objective);
  if (!obj)
    throw CLI::ValidationError("--objective",
                               "must be accuracy or non_telic_f");
  return *obj;
}

Corpus load_corpus(const CommonOpts& o, bool print_issues) {
  if (o.corpus_path.empty()) throw DataError("--corpus is required");
  IngestReport report;
  Corpus corpus = read_corpus_file(o.corpus_path, report);
  if (print_issues)
    for (const auto& [line, msg] : report.issues)
      std::cerr << o.corpus_path << ":" << line << ": " << msg << "\n";
  return corpus;
}

// Output goes to --out when given, else stdout.
void emit(const CommonOpts& o, const std::string& text) {
  if (o.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + o.out_path);
  out << text;
}

ProgressSink stderr_progress(int total_inserts) {
  const int stride = std::max(1, total_inserts / 20);
  return [stride](const ProgressEvent& ev) {
    if (ev.insert_count % stride == 0)
      std::fprintf(stderr, "insert %d best %.4f\n", ev.insert_count,
                   ev.best_fitness);
  };
}

std::string mask_string(int mask) {
  std::string s(kNumSlots, '.');
  for (int i = 0; i < kNumSlots; ++i)
    if (mask & (1 << i)) s[i] = '*';
  return s;
}

// key=value lines; '#' starts a comment. Returned as flag arguments.
std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    const std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const std::size_t end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CLI::ParseError("config " + path + ":" + std::to_string(line_no) +
                                ": expected key=value",
                            CLI::ExitCodes::InvalidError);
    args.push_back("--" + line.substr(0, eq));
    args.push_back(line.substr(eq + 1));
  }
  return args;
}

// Strips --config PATH from raw arguments and splices the file's values in
// right after the subcommand, so explicit flags given later take
// precedence under the TakeLast policy.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string config_path;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config") {
      if (it + 1 == args.end())
        throw CLI::ParseError("--config requires a path",
                              CLI::ExitCodes::InvalidError);
      config_path = *(it + 1);
      it = args.erase(it, it + 2);
    } else if (it->rfind("--config=", 0) == 0) {
      config_path = it->substr(9);
      it = args.erase(it);
    } else {
      ++it;
    }
  }
  if (config_path.empty()) return args;

  const std::vector<std::string> injected = config_file_args(config_path);
  auto anchor = args.begin();
  while (anchor != args.end() && !anchor->empty() && (*anchor)[0] == '-')
    ++anchor;
  if (anchor != args.end()) ++anchor;  // just past the subcommand name
  args.insert(anchor, injected.begin(), injected.end());
  return args;
}

int cmd_ingest(const CommonOpts& o) {
  if (o.corpus_path.empty()) throw DataError("--corpus is required");
  IngestReport report;
  Corpus corpus = read_corpus_file(o.corpus_path, report);
  for (const auto& [line, msg] : report.issues)
    std::cerr << o.corpus_path << ":" << line << ": " << msg << "\n";
  std::ostringstream out;
  out << "accepted " << report.accepted << "\n"
      << "rejected " << report.rejected << "\n";
  emit(o, out.str());
  (void)corpus;
  return kExitOk;
}

int cmd_stats(const CommonOpts& o) {
  const Corpus corpus = load_corpus(o, true);
  const CorpusIndex index(corpus);
  const auto labeled = corpus.labeled_event_ids();
  const SimilarityConfig config{o.k, true};
  const FrequencyTable table = frequency_table(index, labeled, config);

  std::string out = "indicator\ttelic_frequency\tnon_telic_frequency\n";
  for (int i = 0; i < kNumIndicators; ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s\t%.2f\t%.2f\n",
                  std::string(kIndicatorNames[i]).c_str(), table.telic_pct[i],
                  table.non_telic_pct[i]);
    out += buf;
  }
  emit(o, out);
  std::cerr << "telic inputs " << table.telic_inputs << ", non-telic inputs "
            << table.non_telic_inputs << "\n";
  return kExitOk;
}

int cmd_similar(const CommonOpts& o) {
  const Corpus corpus = load_corpus(o, true);
  const CorpusIndex index(corpus);
  const SimilarityConfig config{o.k, true};

  std::ostringstream out;
  std::string line;
  std::size_t line_no = 0, parsed = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> errors;
    auto rec = parse_record_line(line, errors);
    if (!rec) {
      for (const auto& e : errors)
        std::cerr << "stdin:" << line_no << ": " << e << "\n";
      return kExitData;
    }
    rec->id = static_cast<std::uint32_t>(corpus.size() + parsed);
    ++parsed;

    const SimilarSet sim = index.retrieve_similar(rec->key, config, rec->id);
    out << "clause " << (parsed - 1) << ": members=" << sim.member_ids.size()
        << " level_reached=" << sim.level_reached
        << " exact_count=" << sim.exact_count << "\n";
    for (int level = 0; level <= sim.level_reached; ++level) {
      out << "  level " << level << " masks:";
      for (int mask = 0; mask < kNumMasks; ++mask)
        if (mask_level(static_cast<std::uint8_t>(mask)) == level)
          out << " " << mask_string(mask);
      out << "\n";
    }
    out << "  ids:";
    for (std::uint32_t id : sim.member_ids) out << " " << id;
    out << "\n";
  }
  emit(o, out.str());
  return kExitOk;
}

int cmd_train(const CommonOpts& o) {
  if (o.model_path.empty()) throw DataError("--model is required");
  const Corpus corpus = load_corpus(o, true);
  const CorpusIndex index(corpus);
  const auto labeled = corpus.labeled_event_ids();

  TrainOptions options;
  options.objective = objective_of(o);
  options.gp = gp_config(o);
  options.similarity = SimilarityConfig{o.k, true};
  options.progress = stderr_progress(options.gp.total_inserts);

  const TrainReport report = train(index, labeled, options);
  save_model(report.model, o.model_path);

  std::ostringstream summary;
  summary << "trained_on " << report.training_set_size << "\n"
          << "objective " << objective_name(report.model.objective) << "\n"
          << "objective_value " << report.model.training_objective_value
          << "\n"
          << "tree " << print_tree(report.model.tree) << "\n";
  std::cout << summary.str();
  std::cerr << "elapsed_ms " << report.elapsed.count() << "\n";

  if (!o.out_path.empty()) {
    std::string history = "insert\tbest_objective\n";
    for (const auto& [insert, best] : report.history) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%d\t%.6f\n", insert, best);
      history += buf;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw DataError("cannot open output file: " + o.out_path);
    out << history;
  }
  return kExitOk;
}

int cmd_classify(const CommonOpts& o) {
  if (o.model_path.empty()) throw DataError("--model is required");
  const ClassifierModel model = load_model(o.model_path);
  const Corpus corpus = load_corpus(o, true);
  const CorpusIndex index(corpus);

  std::ostringstream out;
  std::string line;
  std::size_t line_no = 0, parsed = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> errors;
    auto rec = parse_record_line(line, errors);
    if (!rec) {
      for (const auto& e : errors)
        std::cerr << "stdin:" << line_no << ": " << e << "\n";
      return kExitData;
    }
    rec->id = static_cast<std::uint32_t>(corpus.size() + parsed);
    const auto [label, s] = classify(model, index, *rec);
    out << parsed << "\t" << label_name(label) << "\t" << s << "\n";
    ++parsed;
  }
  emit(o, out.str());
  return kExitOk;
}

int cmd_evaluate(const CommonOpts& o) {
  const Corpus corpus = load_corpus(o, true);
  const CorpusIndex index(corpus);
  const auto labeled = corpus.labeled_event_ids();

  BatchConfig config;
  config.objective = objective_of(o);
  config.n_runs = o.runs;
  config.base_seed = o.seed;
  config.train_fraction = o.train_fraction;
  config.gp = gp_config(o);
  config.similarity = SimilarityConfig{o.k, true};
  config.jobs = o.jobs;

  try {
    const BatchReport report = run_batch(index, labeled, config);
    emit(o, render_report(report));
  } catch (const BatchError& e) {
    std::cerr << e.what() << "\n";
    for (const RunRow& row : e.completed())
      std::cerr << "completed run " << row.run << ": accuracy "
                << row.metrics.accuracy << "\n";
    return kExitData;
  }
  return kExitOk;
}

int cmd_synth(const CommonOpts& o, bool seed_given) {
  if (o.out_path.empty()) throw DataError("--out is required");

  GenSpec spec;
  if (!o.spec_path.empty()) {
    std::ifstream in(o.spec_path);
    if (!in) throw DataError("cannot open spec file: " + o.spec_path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    try {
      spec = genspec_from_json(text);
    } catch (const std::exception& e) {
      throw DataError("bad generator spec: " + std::string(e.what()));
    }
  } else {
    spec = default_planted_spec();
  }
  if (seed_given) spec.seed = o.seed;

  const auto [corpus, report] = generate(spec);
  write_corpus_file(corpus, o.out_path);
  std::ofstream side(o.out_path + ".report.json", std::ios::binary);
  if (!side) throw DataError("cannot open report sidecar");
  side << genreport_to_json(report) << "\n";

  std::cout << "clauses " << corpus.size() << "\n"
            << "telic " << report.telic_count << "\n"
            << "non_telic " << report.non_telic_count << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"telicity classification from corpus co-occurrence statistics"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* ingest_cmd = app.add_subcommand("ingest", "validate and count a corpus file");
  ingest_cmd->add_option("--corpus", o.corpus_path, "corpus JSON-lines file");
  ingest_cmd->add_option("--out", o.out_path, "output path (default stdout)");

  auto* stats_cmd = app.add_subcommand(
      "stats", "per-class indicator frequencies over the labeled clauses");
  stats_cmd->add_option("--corpus", o.corpus_path, "corpus JSON-lines file");
  stats_cmd->add_option("--k", o.k, "similar clauses per input");
  stats_cmd->add_option("--out", o.out_path, "output path (default stdout)");

  auto* similar_cmd = app.add_subcommand(
      "similar", "print the similar set of each clause read from stdin");
  similar_cmd->add_option("--corpus", o.corpus_path, "corpus JSON-lines file");
  similar_cmd->add_option("--k", o.k, "similar clauses per input");
  similar_cmd->add_option("--out", o.out_path, "output path (default stdout)");

  auto* train_cmd =
      app.add_subcommand("train", "evolve a classifier over the labeled clauses");
  train_cmd->add_option("--corpus", o.corpus_path, "corpus JSON-lines file");
  train_cmd->add_option("--model", o.model_path, "model output path");
  train_cmd->add_option("--out", o.out_path, "best-objective history TSV");
  train_cmd->add_option("--k", o.k, "similar clauses per input");
  train_cmd->add_option("--objective", o.objective, "accuracy|non_telic_f");
  add_gp_flags(train_cmd, o);

  auto* classify_cmd = app.add_subcommand(
      "classify", "label clauses read from stdin with a trained model");
  classify_cmd->add_option("--corpus", o.corpus_path, "corpus JSON-lines file");
  classify_cmd->add_option("--model", o.model_path, "model file");
  classify_cmd->add_option("--out", o.out_path, "output path (default stdout)");

  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "train/test batches with baseline rows");
  evaluate_cmd->add_option("--corpus", o.corpus_path, "corpus JSON-lines file");
  evaluate_cmd->add_option("--out", o.out_path, "report path (default stdout)");
  evaluate_cmd->add_option("--k", o.k, "similar clauses per input");
  evaluate_cmd->add_option("--objective", o.objective, "accuracy|non_telic_f");
  evaluate_cmd->add_option("--runs", o.runs, "number of runs");
  evaluate_cmd->add_option("--train-fraction", o.train_fraction,
                           "training fraction of the labeled pool");
  evaluate_cmd->add_option("--jobs", o.jobs, "concurrent runs");
  add_gp_flags(evaluate_cmd, o);

  auto* synth_cmd = app.add_subcommand(
      "synth", "generate a labeled synthetic corpus");
  synth_cmd->add_option("--spec", o.spec_path, "generator spec JSON file");
  synth_cmd->add_option("--out", o.out_path, "corpus output path");
  auto* synth_seed = synth_cmd->add_option("--seed", o.seed, "generator seed");

  // values may arrive twice (config file, then explicit flag); last wins
  for (CLI::App* cmd : app.get_subcommands({}))
    for (CLI::Option* opt : cmd->get_options())
      if (opt->get_expected_min() > 0)
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    std::vector<std::string> args =
        apply_config_file(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(ingest_cmd)) return cmd_ingest(o);
    if (app.got_subcommand(stats_cmd)) return cmd_stats(o);
    if (app.got_subcommand(similar_cmd)) return cmd_similar(o);
    if (app.got_subcommand(train_cmd)) return cmd_train(o);
    if (app.got_subcommand(classify_cmd)) return cmd_classify(o);
    if (app.got_subcommand(evaluate_cmd)) return cmd_evaluate(o);
    if (app.got_subcommand(synth_cmd))
      return cmd_synth(o, synth_seed->count() > 0);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
