#include "cqarank/trainer.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>

#include "cqarank/error.hpp"
#include "cqarank/ranker.hpp"

namespace cqarank {

namespace {

ForwardCache run_instance(const NetParams& m, std::span<const PreparedThread> threads, const PairInstance& x) {
  const PreparedThread& t = threads[x.thread];
  if (m.variant == Variant::Classification) {
    return forward_classify(m, ClassifyInput{t.question_input.values, t.comment_inputs[x.i].values,
                                             t.pair_features[x.i].values});
  }
  return forward(m, PairInput{t.question_input.values, t.comment_inputs[x.i].values, t.comment_inputs[x.j].values,
                              t.pair_features[x.i].values, t.pair_features[x.j].values});
}

void check_threads(std::span<const PreparedThread> threads, std::uint64_t schema_id, const NetConfig& cfg,
                   const char* split) {
  for (const PreparedThread& t : threads) {
    auto bad = [&](const std::string& what) {
      return SchemaError(std::string(split) + " thread " + t.id + ": " + what);
    };
    if (t.question_input.schema_id != schema_id || t.question_input.values.size() != cfg.input_dim) {
      throw bad("question input does not match the model schema");
    }
    for (std::size_t i = 0; i < t.comment_ids.size(); ++i) {
      if (t.comment_inputs[i].schema_id != schema_id || t.comment_inputs[i].values.size() != cfg.input_dim) {
        throw bad("input of comment " + t.comment_ids[i] + " does not match the model schema");
      }
      if (t.pair_features[i].schema_id != schema_id || t.pair_features[i].values.size() != cfg.skip_dim) {
        throw bad("features of comment " + t.comment_ids[i] + " do not match the model schema");
      }
    }
  }
}

// Fisher-Yates over a 64-bit Mersenne twister; spelled out so the order
// does not depend on the standard library's shuffle.
void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

std::vector<PairInstance> instances_for(Variant v, std::span<const PreparedThread> threads) {
  return v == Variant::Pairwise ? make_pairs(threads) : make_comment_instances(threads);
}

}  // namespace

std::vector<PairInstance> make_pairs(std::span<const BinaryLabel> labels, std::size_t thread_index) {
  std::vector<PairInstance> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != BinaryLabel::Good) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != BinaryLabel::Bad) continue;
      out.push_back({thread_index, i, j, 1});
      out.push_back({thread_index, j, i, 0});
    }
  }
  return out;
}

std::vector<PairInstance> make_pairs(const Thread& thread, std::size_t thread_index) {
  std::vector<BinaryLabel> labels;
  for (const Comment& c : thread.comments) labels.push_back(c.binary_label());
  return make_pairs(labels, thread_index);
}

std::vector<PairInstance> make_pairs(std::span<const PreparedThread> threads) {
  std::vector<PairInstance> out;
  for (std::size_t t = 0; t < threads.size(); ++t) {
    auto p = make_pairs(threads[t].labels, t);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::vector<PairInstance> make_comment_instances(std::span<const PreparedThread> threads) {
  std::vector<PairInstance> out;
  for (std::size_t t = 0; t < threads.size(); ++t) {
    for (std::size_t i = 0; i < threads[t].labels.size(); ++i) {
      out.push_back({t, i, i, threads[t].labels[i] == BinaryLabel::Good ? 1 : 0});
    }
  }
  return out;
}

double instance_output(const NetParams& model, std::span<const PreparedThread> threads, const PairInstance& x) {
  return run_instance(model, threads, x).p;
}

double pair_accuracy(const NetParams& model, std::span<const PreparedThread> threads,
                     std::span<const PairInstance> instances) {
  if (instances.empty()) {
    std::cerr << "warning: accuracy requested on an empty instance list; reporting 0\n";
    return 0.0;
  }
  std::size_t correct = 0;
  for (const PairInstance& x : instances) {
    const int predicted = instance_output(model, threads, x) >= 0.5 ? 1 : 0;
    if (predicted == x.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(instances.size());
}

double kendall_tau(const NetParams& model, std::span<const PreparedThread> threads) {
  double total = 0.0;
  std::size_t counted = 0;
  for (const PreparedThread& t : threads) {
    const RankedThread r = model.variant == Variant::Pairwise ? score_pairwise(model, t) : score_classification(model, t);
    std::map<int, double> score_at;
    for (const RankedComment& c : r.comments) score_at[c.position] = c.score;
    long concordant = 0;
    long discordant = 0;
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
      if (t.labels[i] != BinaryLabel::Good) continue;
      for (std::size_t j = 0; j < t.labels.size(); ++j) {
        if (t.labels[j] != BinaryLabel::Bad) continue;
        const double si = score_at[t.positions[i]];
        const double sj = score_at[t.positions[j]];
        if (si > sj) ++concordant;
        if (si < sj) ++discordant;
      }
    }
    const std::size_t pairs = make_pairs(t.labels).size() / 2;
    if (pairs == 0) continue;
    total += static_cast<double>(concordant - discordant) / static_cast<double>(pairs);
    ++counted;
  }
  return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

std::size_t select_best_epoch(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

TrainResult train(std::span<const PreparedThread> train_threads, std::span<const PreparedThread> validation,
                  const TrainConfig& cfg, std::uint64_t schema_id, std::ostream* log) {
  if (cfg.epochs < 1 || cfg.minibatch < 1 || cfg.hidden < 1 || cfg.eta <= 0.0 || cfg.lambda < 0.0 ||
      cfg.decay < 0.0) {
    throw ConfigError("training parameters must be positive (epochs, minibatch, hidden, eta) and non-negative "
                      "(lambda, decay)");
  }
  const std::vector<PairInstance> instances = instances_for(cfg.variant, train_threads);
  if (instances.empty() || (cfg.variant == Variant::Pairwise && make_pairs(train_threads).empty())) {
    throw InputError("no trainable pairs: the training data has no thread with both Good and Bad comments");
  }
  const PreparedThread& first = train_threads[instances.front().thread];
  NetConfig net_cfg;
  net_cfg.hidden = cfg.hidden;
  net_cfg.input_dim = first.question_input.values.size();
  net_cfg.skip_dim = first.pair_features.front().values.size();
  net_cfg.seed = cfg.seed;
  check_threads(train_threads, schema_id, net_cfg, "training");
  check_threads(validation, schema_id, net_cfg, "validation");

  const std::vector<PairInstance> val_instances = instances_for(cfg.variant, validation);
  NetParams params = init_params(net_cfg, cfg.variant);
  Adagrad opt(params, cfg.eta, cfg.decay);
  std::mt19937_64 rng(cfg.seed ^ 0x5deece66dULL);
  std::vector<std::size_t> order(instances.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;

  TrainResult result;
  std::vector<double> scores;
  const auto batch = static_cast<std::size_t>(cfg.minibatch);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    if (cfg.shuffle) shuffle(order, rng);
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < order.size(); b += batch) {
      const std::size_t end = std::min(order.size(), b + batch);
      NetParams grad = zeros_like(params);
      for (std::size_t k = b; k < end; ++k) {
        const PairInstance& x = instances[order[k]];
        const ForwardCache c = run_instance(params, train_threads, x);
        loss_sum += loss(params, c, x.label, cfg.lambda);
        add_scaled(grad, backward(params, c, x.label, cfg.lambda), 1.0);
      }
      // Mean over the minibatch: lambda enters once per example, so the
      // regulariser weight per step stays lambda.
      const double inv = 1.0 / static_cast<double>(end - b);
      for (auto block : grad.blocks()) {
        for (double& g : block) g *= inv;
      }
      opt.step(params, grad);
    }
    const double score = cfg.selection == Selection::KendallTau ? kendall_tau(params, validation)
                                                                : pair_accuracy(params, validation, val_instances);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const EpochLog entry{epoch, loss_sum / static_cast<double>(instances.size()), score, seconds};
    result.epochs.push_back(entry);
    scores.push_back(score);
    if (log != nullptr) {
      char line[128];
      std::snprintf(line, sizeof line, "%d\t%.6f\t%.6f\t%.3f\n", entry.epoch, entry.mean_loss, entry.validation_score,
                    entry.seconds);
      *log << line << std::flush;
    }
    if (select_best_epoch(scores) == scores.size() - 1) result.best = Checkpoint{epoch, params, score};
  }
  return result;
}

}  // namespace cqarank
