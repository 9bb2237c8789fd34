#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqarank/config.hpp"
#include "cqarank/corpus.hpp"
#include "cqarank/embeddings.hpp"
#include "cqarank/evaluator.hpp"
#include "cqarank/features.hpp"
#include "cqarank/model_io.hpp"
#include "cqarank/ranker.hpp"

namespace cqarank {

/// Loaded resources; a FeatureContext points into this, so keep it alive.
struct ResourceSet {
  std::optional<EmbeddingTable> google;
  std::optional<EmbeddingTable> domain;
  std::optional<SidecarVectors> syntax;
  std::optional<PosAnnotations> pos;
  std::optional<NistStats> nist_weights;

  FeatureResources view() const;
};

/// Loads whatever the configuration enables. Corpus NIST statistics are
/// taken from the questions of `train_threads`.
ResourceSet load_resources(const RunConfig& cfg, std::span<const Thread> train_threads = {});

NistStats question_nist_stats(std::span<const Thread> threads, QuestionText mode);

struct TrainedSystem {
  ModelFile model;
  TrainResult training;
};

/// Feature extraction, normaliser fitted on `train` only, training with
/// per-epoch validation (on `validation`, or on `train` when it is empty).
TrainedSystem train_system(std::span<const Thread> train, std::span<const Thread> validation,
                           const FeatureContext& ctx, const TrainConfig& cfg, std::ostream* log = nullptr,
                           const FeatureDump* train_features = nullptr);

/// Ranks threads with a trained model after checking its schema against
/// `ctx` and applying its normaliser.
std::vector<RankedThread> rank_with_model(const ModelFile& model, std::span<const Thread> threads,
                                          const FeatureContext& ctx, Accumulation rule = Accumulation::Antisymmetric);

std::vector<RankedThread> rank_baseline(RankMethod method, std::span<const Thread> threads, std::uint64_t seed);

MethodScores score_rankings(const std::string& name, std::span<const RankedThread> rankings,
                            std::span<const Thread> gold, int K);

struct AblationVariant {
  std::string name;
  FeatureConfig features;
};

/// The feature groups of the ablation study, each switched off in turn:
/// -BLEUcomp, -MTfeats, -Syntax, -google, -domain, -TaskFeats.
std::vector<AblationVariant> ablation_variants(const FeatureConfig& full);

struct AblationRow {
  std::string name;
  MethodScores scores;
  bool reused_full = false;  // variant equals the full system
};

struct AblationResult {
  MethodScores full;
  std::vector<AblationRow> variants;
};

AblationResult run_ablation(std::span<const Thread> train, std::span<const Thread> validation,
                            std::span<const Thread> test, const RunConfig& cfg, const ResourceSet& resources,
                            std::ostream* log = nullptr);

}  // namespace cqarank
