#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cqarank/evaluator.hpp"
#include "cqarank/features.hpp"
#include "cqarank/ranker.hpp"
#include "cqarank/trainer.hpp"

namespace cqarank {

struct RunPaths {
  std::string train;
  std::string validation;
  std::string test;
  std::string train_features;  // optional feature dump for the training corpus
  std::string google_embeddings;
  std::string domain_embeddings;
  std::string syntax_vectors;
  std::string pos_annotations;
  std::string model;
  std::string output_dir = ".";
};

struct RunConfig {
  RunPaths paths;
  FeatureConfig features;
  TrainConfig train;
  std::size_t syntax_dim = 25;
  Accumulation accumulation = Accumulation::Antisymmetric;
  std::uint64_t random_seed = 1;  // Baseline_random
  int cutoff = kDefaultCutoff;
};

/// Sets one key. Keys are dotted ("train.epochs", "features.task_meta",
/// "paths.test"); `preset` switches a group of feature toggles at once.
/// Unknown keys and malformed values raise ConfigError.
void set_option(RunConfig& cfg, const std::string& key, const std::string& value);

/// "key = value" per line; '#' starts a comment. Errors name the line.
void read_config(std::istream& in, RunConfig& cfg);
RunConfig load_config(const std::string& path);

/// "key=value"
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Every key with its current value, in the file format.
std::string dump_config(const RunConfig& cfg);

// "full" restores the defaults; "mte_vanilla" drops the task features and the
// domain embeddings.
void apply_preset(RunConfig& cfg, const std::string& name);

enum class Need : unsigned {
  Train = 1,
  Test = 2,
  Model = 4,
};

/// Checks toggles against resources and that every referenced file exists,
/// before any work starts. Throws ConfigError naming the offending path or
/// key.
void validate(const RunConfig& cfg, unsigned needs);

}  // namespace cqarank
