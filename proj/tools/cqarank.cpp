// cqarank: command-line front end for the answer ranker.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cqarank/config.hpp"
#include "cqarank/corpus.hpp"
#include "cqarank/error.hpp"
#include "cqarank/evaluator.hpp"
#include "cqarank/features.hpp"
#include "cqarank/metrics.hpp"
#include "cqarank/model_io.hpp"
#include "cqarank/pipeline.hpp"
#include "cqarank/synthetic.hpp"

namespace fs = std::filesystem;
using namespace cqarank;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct ConfigArgs {
  std::string file;
  std::vector<std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", file, "key = value configuration file");
    cmd->add_option("--set", overrides, "override one key (key=value); repeatable");
  }

  RunConfig resolve() const {
    RunConfig cfg = file.empty() ? RunConfig{} : load_config(file);
    for (const std::string& o : overrides) apply_override(cfg, o);
    return cfg;
  }
};

std::ofstream open_output(const std::string& path) {
  if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

std::vector<Thread> load_split(const std::string& path) {
  std::vector<Thread> threads = load_corpus(path);
  make_split(SplitName::Custom, threads, path);  // rejects duplicate ids
  return threads;
}

int cmd_ingest(const std::string& input, const std::string& output) {
  const std::vector<Thread> threads = load_split(input);
  std::size_t comments = 0;
  for (const Thread& t : threads) comments += t.comments.size();
  if (output.empty() || output == "-") {
    write_records(std::cout, threads);
  } else {
    std::ofstream out = open_output(output);
    write_records(out, threads);
  }
  std::cerr << "ingested " << threads.size() << " threads, " << comments << " comments\n";
  return kExitOk;
}

int cmd_extract(const ConfigArgs& args, std::string corpus, const std::string& output) {
  RunConfig cfg = args.resolve();
  if (corpus.empty()) corpus = cfg.paths.train;
  validate(cfg, 0);
  const std::vector<Thread> threads = load_split(corpus);
  const std::vector<Thread> train = cfg.features.corpus_nist_weights ? load_split(cfg.paths.train) : std::vector<Thread>{};
  const ResourceSet res = load_resources(cfg, train);
  const FeatureContext ctx(cfg.features, res.view());
  const std::vector<PreparedThread> prepared = prepare_threads(threads, ctx);
  std::ofstream out = open_output(output);
  write_feature_dump(out, ctx.schema(), prepared);
  std::cerr << "schema " << schema_id_hex(ctx.schema_id()) << ", " << ctx.schema().total_dim() << " features\n";
  return kExitOk;
}

int cmd_train(const ConfigArgs& args, const std::string& log_path) {
  const RunConfig cfg = args.resolve();
  validate(cfg, static_cast<unsigned>(Need::Train) | static_cast<unsigned>(Need::Model));
  const std::vector<Thread> train = load_split(cfg.paths.train);
  const std::vector<Thread> validation = cfg.paths.validation.empty() ? std::vector<Thread>{} : load_split(cfg.paths.validation);
  if (validation.empty()) std::cerr << "note: no validation split; selecting the epoch on the training pairs\n";
  const ResourceSet res = load_resources(cfg, train);
  const FeatureContext ctx(cfg.features, res.view());
  std::optional<FeatureDump> dump;
  if (!cfg.paths.train_features.empty()) dump = read_feature_dump(cfg.paths.train_features);

  std::ofstream log_file;
  std::ostream* log = &std::cout;
  if (!log_path.empty()) {
    log_file = open_output(log_path);
    log = &log_file;
  }
  *log << "# epoch\tloss\tvalidation\tseconds\n";
  const TrainedSystem sys = train_system(train, validation, ctx, cfg.train, log, dump ? &*dump : nullptr);
  std::ofstream out = open_output(cfg.paths.model);
  save_model(out, sys.model);
  std::cerr << "best epoch " << sys.model.epoch << " (validation " << sys.model.validation_score << "), schema "
            << schema_id_hex(sys.model.schema_id) << ", model written to " << cfg.paths.model << '\n';
  if (ctx.missing_syntax_vectors() > 0) {
    std::cerr << "warning: " << ctx.missing_syntax_vectors() << " text(s) had no syntax vector\n";
  }
  return kExitOk;
}

int cmd_rank(const ConfigArgs& args, const std::string& method_name, std::string corpus, const std::string& output,
             const std::string& label) {
  const RunConfig cfg = args.resolve();
  const RankMethod method = parse_rank_method(method_name);
  if (corpus.empty()) corpus = cfg.paths.test;
  const bool needs_model = method == RankMethod::Pairwise || method == RankMethod::Classification;
  if (corpus.empty()) throw ConfigError("no corpus to rank: set paths.test or pass --corpus");
  const std::vector<Thread> threads = load_split(corpus);

  std::vector<RankedThread> ranked;
  if (needs_model) {
    validate(cfg, static_cast<unsigned>(Need::Model));
    const std::vector<Thread> train = cfg.features.corpus_nist_weights ? load_split(cfg.paths.train) : std::vector<Thread>{};
    const ResourceSet res = load_resources(cfg, train);
    const FeatureContext ctx(cfg.features, res.view());
    const ModelFile model = load_model(cfg.paths.model, ctx.schema_id());
    const Variant wanted = method == RankMethod::Pairwise ? Variant::Pairwise : Variant::Classification;
    if (model.net.variant != wanted) {
      throw ConfigError("method " + method_name + " needs a " +
                        (wanted == Variant::Pairwise ? "pairwise" : "classification") + " model, but " +
                        cfg.paths.model + " holds the other variant");
    }
    ranked = rank_with_model(model, threads, ctx, cfg.accumulation);
  } else {
    ranked = rank_baseline(method, threads, cfg.random_seed);
  }
  if (!label.empty()) {
    for (RankedThread& t : ranked) t.label = label;
  }
  if (output.empty() || output == "-") {
    write_rankings(std::cout, ranked);
  } else {
    std::ofstream out = open_output(output);
    write_rankings(out, ranked);
  }
  return kExitOk;
}

int cmd_evaluate(const std::string& gold_path, const std::vector<std::string>& files, int cutoff,
                 const std::string& summary_path) {
  const std::vector<Thread> gold = load_split(gold_path);
  const GoldIndex index = gold_index(gold);
  std::vector<RankingLine> lines;
  for (const std::string& f : files) {
    auto part = read_rankings(f);
    lines.insert(lines.end(), part.begin(), part.end());
  }
  std::vector<MethodScores> rows;
  for (const auto& [method, rankings] : label_rankings(lines, index)) rows.push_back(evaluate(method, rankings, cutoff));
  std::cout << render_report(rows);
  if (!summary_path.empty()) {
    std::ofstream out = open_output(summary_path);
    out << render_summary(rows);
  }
  return kExitOk;
}

int cmd_ablate(const ConfigArgs& args, const std::string& log_path) {
  const RunConfig cfg = args.resolve();
  validate(cfg, static_cast<unsigned>(Need::Train) | static_cast<unsigned>(Need::Test));
  const std::vector<Thread> train = load_split(cfg.paths.train);
  const std::vector<Thread> validation = cfg.paths.validation.empty() ? std::vector<Thread>{} : load_split(cfg.paths.validation);
  const std::vector<Thread> test = load_split(cfg.paths.test);
  const ResourceSet res = load_resources(cfg, train);
  std::ofstream log_file;
  std::ostream* log = nullptr;
  if (!log_path.empty()) {
    log_file = open_output(log_path);
    log = &log_file;
  }
  const AblationResult r = run_ablation(train, validation, test, cfg, res, log);
  std::vector<MethodScores> rows;
  for (const AblationRow& v : r.variants) rows.push_back(v.scores);
  std::cout << render_ablation(r.full, rows);
  for (const AblationRow& v : r.variants) {
    if (v.reused_full) std::cout << "# " << v.name << ": group already off; full-system result reused\n";
  }
  return kExitOk;
}

int cmd_score_metrics(const std::string& hyp_text, const std::string& ref_text) {
  const TokenSeq hyp = tokenize(hyp_text);
  const TokenSeq ref = tokenize(ref_text);
  const MetricBundle m = metric_bundle(hyp, ref);
  const BleuComponents b = bleu_components(hyp, ref);
  std::printf("bleu\t%.6f\nnist\t%.6f\nter\t%.6f\nmeteor_lite\t%.6f\nunigram_precision\t%.6f\nunigram_recall\t%.6f\n",
              m.bleu, m.nist, m.ter, m.meteor_lite, m.unigram_precision, m.unigram_recall);
  std::printf("brevity_penalty\t%.6f\nlength_ratio\t%.6f\n", b.brevity_penalty, b.length_ratio);
  for (int n = 0; n < 4; ++n) {
    std::printf("p%d\t%.6f\t%d/%d\n", n + 1, b.precisions[n], b.matches[n], b.totals[n]);
  }
  return kExitOk;
}

int cmd_synth(const std::string& dir, const std::string& mode, std::uint64_t seed, std::size_t train_n,
              std::size_t test_n) {
  SyntheticConfig sc;
  sc.seed = seed;
  sc.train_threads = train_n;
  sc.test_threads = test_n;
  if (mode == "lexical") sc.mode = SyntheticMode::Lexical;
  else if (mode == "stem") sc.mode = SyntheticMode::StemOnly;
  else throw ConfigError("--mode must be lexical or stem");
  const SyntheticCorpus c = make_synthetic(sc);
  fs::create_directories(dir);
  const fs::path d(dir);
  {
    std::ofstream out = open_output((d / "train.jsonl").string());
    write_records(out, c.train);
  }
  {
    std::ofstream out = open_output((d / "test.jsonl").string());
    write_records(out, c.test);
  }
  {
    std::ofstream out = open_output((d / "google.txt").string());
    write_rows(out, c.google, true);
  }
  {
    std::ofstream out = open_output((d / "domain.txt").string());
    write_rows(out, c.domain, true);
  }
  {
    std::ofstream out = open_output((d / "syntax.txt").string());
    write_rows(out, c.syntax, false);
  }
  std::ofstream cfg = open_output((d / "run.conf").string());
  cfg << "# synthetic corpus, seed " << seed << "\n"
      << "paths.train = train.jsonl\n"
      << "paths.test = test.jsonl\n"
      << "paths.google_embeddings = google.txt\n"
      << "paths.domain_embeddings = domain.txt\n"
      << "paths.syntax_vectors = syntax.txt\n"
      << "paths.model = model.bin\n"
      << "features.syntax_dim = " << sc.syntax_dim << "\n";
  std::cerr << "wrote " << c.train.size() << " training and " << c.test.size() << " test threads to " << dir << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise answer ranker for community question answering"};
  app.require_subcommand(1);

  std::string ingest_in, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "parse XML or records and write canonical records");
  ingest->add_option("input", ingest_in, "corpus file")->required();
  ingest->add_option("-o,--output", ingest_out, "records file (default stdout)");

  ConfigArgs extract_args;
  std::string extract_corpus, extract_out;
  auto* extract = app.add_subcommand("extract-features", "compute skip-arc feature vectors");
  extract_args.attach(extract);
  extract->add_option("--corpus", extract_corpus, "corpus (default paths.train)");
  extract->add_option("-o,--output", extract_out, "feature dump")->required();

  ConfigArgs train_args;
  std::string train_log;
  auto* train_cmd = app.add_subcommand("train", "train a model and write it to paths.model");
  train_args.attach(train_cmd);
  train_cmd->add_option("--log", train_log, "per-epoch log file (default stdout)");

  ConfigArgs rank_args;
  std::string rank_method = "pairwise", rank_corpus, rank_out, rank_label;
  auto* rank = app.add_subcommand("rank", "rank the comments of every thread");
  rank_args.attach(rank);
  rank->add_option("-m,--method", rank_method, "pairwise, classification, baseline-time or baseline-random");
  rank->add_option("--corpus", rank_corpus, "corpus (default paths.test)");
  rank->add_option("-o,--output", rank_out, "ranking file (default stdout)");
  rank->add_option("--label", rank_label, "method name written to the output");

  std::string eval_gold, eval_summary;
  std::vector<std::string> eval_files;
  int eval_cutoff = kDefaultCutoff;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "MAP / AvgRec / MRR table for ranking files");
  evaluate_cmd->add_option("--gold", eval_gold, "corpus with gold labels")->required();
  evaluate_cmd->add_option("rankings", eval_files, "ranking files")->required();
  evaluate_cmd->add_option("-k,--cutoff", eval_cutoff, "rank cutoff");
  evaluate_cmd->add_option("--summary", eval_summary, "machine-readable summary file");

  ConfigArgs ablate_args;
  std::string ablate_log;
  auto* ablate = app.add_subcommand("ablate", "train and evaluate with each feature group removed");
  ablate_args.attach(ablate);
  ablate->add_option("--log", ablate_log, "training log file");

  std::string hyp, ref;
  auto* metrics = app.add_subcommand("score-metrics", "MT evaluation metrics for one hypothesis/reference pair");
  metrics->add_option("--hyp", hyp, "hypothesis text")->required();
  metrics->add_option("--ref", ref, "reference text")->required();

  std::string synth_dir, synth_mode = "lexical";
  std::uint64_t synth_seed = 7;
  std::size_t synth_train = 200, synth_test = 50;
  auto* synth = app.add_subcommand("synth", "write a synthetic corpus with embeddings and a config");
  synth->add_option("-o,--output-dir", synth_dir, "output directory")->required();
  synth->add_option("--mode", synth_mode, "lexical or stem");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--train", synth_train, "training threads");
  synth->add_option("--test", synth_test, "test threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_in, ingest_out);
    if (*extract) return cmd_extract(extract_args, extract_corpus, extract_out);
    if (*train_cmd) return cmd_train(train_args, train_log);
    if (*rank) return cmd_rank(rank_args, rank_method, rank_corpus, rank_out, rank_label);
    if (*evaluate_cmd) return cmd_evaluate(eval_gold, eval_files, eval_cutoff, eval_summary);
    if (*ablate) return cmd_ablate(ablate_args, ablate_log);
    if (*metrics) return cmd_score_metrics(hyp, ref);
    if (*synth) return cmd_synth(synth_dir, synth_mode, synth_seed, synth_train, synth_test);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
