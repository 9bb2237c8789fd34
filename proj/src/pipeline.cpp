#include "cqarank/pipeline.hpp"

#include <ostream>

#include "cqarank/error.hpp"

namespace cqarank {

FeatureResources ResourceSet::view() const {
  FeatureResources r;
  r.google = google ? &*google : nullptr;
  r.domain = domain ? &*domain : nullptr;
  r.syntax = syntax ? &*syntax : nullptr;
  r.pos = pos ? &*pos : nullptr;
  r.nist_weights = nist_weights ? &*nist_weights : nullptr;
  return r;
}

NistStats question_nist_stats(std::span<const Thread> threads, QuestionText mode) {
  NistStats s;
  for (const Thread& t : threads) add_nist_stats(s, tokenize(question_text(t.question, mode)));
  return s;
}

ResourceSet load_resources(const RunConfig& cfg, std::span<const Thread> train_threads) {
  ResourceSet r;
  const FeatureConfig& f = cfg.features;
  if (f.google) r.google = load_table(cfg.paths.google_embeddings, "google");
  if (f.domain) r.domain = load_table(cfg.paths.domain_embeddings, "domain");
  if (f.syntax) r.syntax = load_sidecar_vectors(cfg.paths.syntax_vectors, cfg.syntax_dim);
  if (!cfg.paths.pos_annotations.empty()) r.pos = load_pos_annotations(cfg.paths.pos_annotations);
  if (f.corpus_nist_weights) r.nist_weights = question_nist_stats(train_threads, f.question_text);
  return r;
}

TrainedSystem train_system(std::span<const Thread> train_threads, std::span<const Thread> validation,
                           const FeatureContext& ctx, const TrainConfig& cfg, std::ostream* log,
                           const FeatureDump* train_features) {
  std::vector<PreparedThread> tr = prepare_threads(train_threads, ctx, train_features);
  std::vector<PreparedThread> va;
  if (!validation.empty()) va = prepare_threads(validation, ctx);
  const Normalizer norm = fit_normalizer(tr, ctx.config().normalize_inputs);
  apply_normalizer(norm, tr);
  if (validation.empty()) va = tr;
  else apply_normalizer(norm, va);

  TrainedSystem out;
  out.training = train(tr, va, cfg, ctx.schema_id(), log);
  out.model.net = out.training.best.params;
  out.model.schema_id = ctx.schema_id();
  out.model.normalizer = norm;
  out.model.epoch = out.training.best.epoch;
  out.model.validation_score = out.training.best.validation_score;
  return out;
}

std::vector<RankedThread> rank_with_model(const ModelFile& model, std::span<const Thread> threads,
                                          const FeatureContext& ctx, Accumulation rule) {
  if (model.schema_id != ctx.schema_id()) {
    throw SchemaError("model was trained with feature schema " + schema_id_hex(model.schema_id) +
                      " but the current configuration has schema " + schema_id_hex(ctx.schema_id()));
  }
  std::vector<RankedThread> out;
  out.reserve(threads.size());
  for (const Thread& t : threads) {
    PreparedThread p = prepare_thread(t, ctx);
    apply_normalizer(model.normalizer, p);
    out.push_back(model.net.variant == Variant::Pairwise ? score_pairwise(model.net, p, rule)
                                                         : score_classification(model.net, p));
  }
  return out;
}

std::vector<RankedThread> rank_baseline(RankMethod method, std::span<const Thread> threads, std::uint64_t seed) {
  std::vector<RankedThread> out;
  for (const Thread& t : threads) {
    if (method == RankMethod::BaselineTime) out.push_back(baseline_time(t));
    else if (method == RankMethod::BaselineRandom) out.push_back(baseline_random(t, seed));
    else throw ConfigError("method " + std::string(to_string(method)) + " needs a trained model");
  }
  return out;
}

MethodScores score_rankings(const std::string& name, std::span<const RankedThread> rankings,
                            std::span<const Thread> gold, int K) {
  const GoldIndex index = gold_index(gold);
  const std::vector<LabelRanking> labels = label_rankings(rankings, index);
  return evaluate(name, labels, K);
}

std::vector<AblationVariant> ablation_variants(const FeatureConfig& full) {
  std::vector<AblationVariant> out;
  auto variant = [&](std::string name, auto change) {
    FeatureConfig f = full;
    change(f);
    out.push_back({std::move(name), f});
  };
  variant("-BLEUcomp", [](FeatureConfig& f) { f.bleucomp = false; });
  variant("-MTfeats", [](FeatureConfig& f) { f.mtfeats = false; });
  variant("-Syntax", [](FeatureConfig& f) { f.syntax = false; });
  variant("-google", [](FeatureConfig& f) { f.google = false; });
  variant("-domain", [](FeatureConfig& f) { f.domain = false; });
  variant("-TaskFeats", [](FeatureConfig& f) {
    f.task_comment = false;
    f.task_pair = false;
    f.task_meta = false;
  });
  return out;
}

AblationResult run_ablation(std::span<const Thread> train_threads, std::span<const Thread> validation,
                            std::span<const Thread> test, const RunConfig& cfg, const ResourceSet& resources,
                            std::ostream* log) {
  auto run = [&](const std::string& name, const FeatureConfig& features) {
    if (log != nullptr) *log << "# system " << name << '\n';
    const FeatureContext ctx(features, resources.view());
    const TrainedSystem sys = train_system(train_threads, validation, ctx, cfg.train, log);
    const auto ranked = rank_with_model(sys.model, test, ctx, cfg.accumulation);
    return score_rankings(name, ranked, test, cfg.cutoff);
  };
  AblationResult result;
  result.full = run("full", cfg.features);
  for (const AblationVariant& v : ablation_variants(cfg.features)) {
    AblationRow row;
    row.name = v.name;
    if (v.features == cfg.features) {
      row.scores = result.full;
      row.scores.name = v.name;
      row.reused_full = true;
    } else {
      row.scores = run(v.name, v.features);
    }
    result.variants.push_back(std::move(row));
  }
  return result;
}

}  // namespace cqarank
