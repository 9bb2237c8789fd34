#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cqarank/corpus.hpp"
#include "cqarank/features.hpp"
#include "cqarank/network.hpp"

namespace cqarank {

/// One training example. For the pairwise net (i, j) are two comments of
/// the thread and label is 1 iff i is Good and j is Bad. For the
/// classifier j == i and label is 1 iff the comment is Good.
struct PairInstance {
  std::size_t thread = 0;  // index into the thread list
  std::size_t i = 0;
  std::size_t j = 0;
  int label = 0;

  bool operator==(const PairInstance&) const = default;
};

/// Every Good/Bad combination in both orders; ties produce nothing.
std::vector<PairInstance> make_pairs(std::span<const BinaryLabel> labels, std::size_t thread_index = 0);
std::vector<PairInstance> make_pairs(const Thread& thread, std::size_t thread_index = 0);
std::vector<PairInstance> make_pairs(std::span<const PreparedThread> threads);

// One instance per comment, for the classification variant.
std::vector<PairInstance> make_comment_instances(std::span<const PreparedThread> threads);

enum class Selection { PairAccuracy, KendallTau };

struct TrainConfig {
  int epochs = 100;
  int minibatch = 30;
  double lambda = 0.005;
  double decay = 0.0001;
  double eta = 0.1;
  std::uint64_t seed = 1;
  bool shuffle = true;
  int hidden = 3;
  Variant variant = Variant::Pairwise;
  Selection selection = Selection::PairAccuracy;
};

struct Checkpoint {
  int epoch = 0;  // 1-based
  NetParams params;
  double validation_score = 0.0;
};

struct EpochLog {
  int epoch = 0;
  double mean_loss = 0.0;
  double validation_score = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  Checkpoint best;
  std::vector<EpochLog> epochs;
};

/// Output of the model on one instance.
double instance_output(const NetParams& model, std::span<const PreparedThread> threads, const PairInstance& x);

/// Fraction of instances where (output >= 0.5) agrees with the label; 0
/// for an empty list.
double pair_accuracy(const NetParams& model, std::span<const PreparedThread> threads,
                     std::span<const PairInstance> instances);

/// Mean over threads with both labels of (concordant - discordant) /
/// (Good x Bad pairs), comparing ranking scores against gold labels.
double kendall_tau(const NetParams& model, std::span<const PreparedThread> threads);

/// Index of the highest score; the earliest wins ties.
std::size_t select_best_epoch(std::span<const double> scores);

/// Trains from scratch on `train`, evaluates on `validation` after each
/// epoch and returns the best epoch. Inputs must already be normalised and
/// share `schema_id`. Each epoch writes "epoch\tloss\tscore\tseconds" to
/// `log` when given.
TrainResult train(std::span<const PreparedThread> train, std::span<const PreparedThread> validation,
                  const TrainConfig& cfg, std::uint64_t schema_id, std::ostream* log = nullptr);

}  // namespace cqarank
