#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "cqarank/error.hpp"
#include "cqarank/model_io.hpp"
#include "cqarank/trainer.hpp"

using namespace cqarank;

namespace {

constexpr auto G = BinaryLabel::Good;
constexpr auto B = BinaryLabel::Bad;

// Threads where the first input coordinate of a Good comment is +1 and of
// a Bad comment -1, so the task is linearly separable.
std::vector<PreparedThread> separable(std::size_t n, std::uint64_t schema, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-0.3, 0.3);
  std::vector<PreparedThread> out;
  for (std::size_t t = 0; t < n; ++t) {
    PreparedThread p;
    p.id = "T" + std::to_string(t);
    p.question_input = {{noise(rng), noise(rng)}, schema};
    for (int c = 0; c < 4; ++c) {
      const bool good = c == static_cast<int>(t % 4) || c == static_cast<int>((t + 1) % 4);
      p.comment_ids.push_back(p.id + "_C" + std::to_string(c + 1));
      p.positions.push_back(c + 1);
      p.labels.push_back(good ? G : B);
      p.comment_inputs.push_back({{good ? 1.0 : -1.0, noise(rng)}, schema});
      p.pair_features.push_back({{good ? 0.5 : -0.5, noise(rng), noise(rng)}, schema});
    }
    out.push_back(std::move(p));
  }
  return out;
}

TrainConfig quick() {
  TrainConfig c;
  c.epochs = 5;
  c.minibatch = 8;
  return c;
}

}  // namespace

TEST(MakePairs, GoodBadGood) {
  const std::vector<BinaryLabel> labels{G, B, G};
  const auto pairs = make_pairs(labels);
  const std::vector<PairInstance> expected{{0, 0, 1, 1}, {0, 1, 0, 0}, {0, 2, 1, 1}, {0, 1, 2, 0}};
  EXPECT_EQ(pairs, expected);
}

TEST(MakePairs, SingleLabelThreadsContributeNothing) {
  EXPECT_TRUE(make_pairs(std::vector<BinaryLabel>{G, G, G}).empty());
  EXPECT_TRUE(make_pairs(std::vector<BinaryLabel>{B}).empty());
  EXPECT_TRUE(make_pairs(std::vector<BinaryLabel>{}).empty());
}

TEST(MakePairs, ThreadIndexAndCommentInstances) {
  const auto threads = separable(3, 1, 1);
  const auto pairs = make_pairs(threads);
  EXPECT_EQ(pairs.size(), 3u * 2 * 2 * 2);
  EXPECT_EQ(pairs.back().thread, 2u);
  const auto singles = make_comment_instances(threads);
  ASSERT_EQ(singles.size(), 12u);
  for (const auto& x : singles) {
    EXPECT_EQ(x.i, x.j);
    EXPECT_EQ(x.label, threads[x.thread].labels[x.i] == G ? 1 : 0);
  }
}

TEST(SelectBestEpoch, EarliestTieWins) {
  EXPECT_EQ(select_best_epoch(std::vector<double>{0.5, 0.7, 0.7, 0.6}), 1u);
  EXPECT_EQ(select_best_epoch(std::vector<double>{0.9}), 0u);
  EXPECT_EQ(select_best_epoch(std::vector<double>{0.2, 0.2}), 0u);
}

TEST(PairAccuracy, ConstantHalfPredictsPositive) {
  const auto threads = separable(4, 1, 2);
  NetConfig c;
  c.input_dim = 2;
  c.skip_dim = 3;
  const NetParams zero = zeros_like(init_params(c, Variant::Pairwise));
  const auto pairs = make_pairs(threads);
  // p = 0.5 counts as predicting 1, and half the pairs are positive.
  EXPECT_DOUBLE_EQ(pair_accuracy(zero, threads, pairs), 0.5);
  EXPECT_EQ(pair_accuracy(zero, threads, std::vector<PairInstance>{}), 0.0);
}

TEST(Train, LearnsSeparableData) {
  const auto threads = separable(40, 7, 3);
  TrainConfig cfg = quick();
  cfg.epochs = 15;
  const auto r = train(threads, threads, cfg, 7);
  EXPECT_GT(r.best.validation_score, 0.95);
  EXPECT_EQ(r.epochs.size(), 15u);
  EXPECT_GE(r.best.epoch, 1);
  EXPECT_GT(r.epochs.front().mean_loss, r.epochs.back().mean_loss);
  EXPECT_GT(kendall_tau(r.best.params, threads), 0.9);
}

TEST(Train, ClassificationVariant) {
  const auto threads = separable(40, 7, 3);
  TrainConfig cfg = quick();
  cfg.variant = Variant::Classification;
  cfg.epochs = 15;
  const auto r = train(threads, threads, cfg, 7);
  EXPECT_EQ(r.best.params.variant, Variant::Classification);
  EXPECT_GT(r.best.validation_score, 0.9);
}

TEST(Train, Deterministic) {
  const auto threads = separable(10, 7, 4);
  std::ostringstream log1, log2;
  const auto a = train(threads, threads, quick(), 7, &log1);
  const auto b = train(threads, threads, quick(), 7, &log2);
  EXPECT_EQ(a.best.params.out_weights, b.best.params.out_weights);
  EXPECT_EQ(a.best.epoch, b.best.epoch);
  TrainConfig other = quick();
  other.seed = 2;
  EXPECT_NE(train(threads, threads, other, 7).best.params.out_weights, a.best.params.out_weights);
  // One line per epoch.
  const std::string text = log1.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(Train, RejectsUntrainableInput) {
  auto threads = separable(2, 7, 5);
  for (auto& t : threads) {
    for (auto& l : t.labels) l = B;
  }
  EXPECT_THROW(train(threads, threads, quick(), 7), InputError);
  EXPECT_THROW(train(separable(2, 7, 5), {}, quick(), 8), SchemaError);
  TrainConfig bad = quick();
  bad.minibatch = 0;
  EXPECT_THROW(train(separable(2, 7, 5), {}, bad, 7), ConfigError);
}

TEST(ModelFile, RoundTrip) {
  const auto threads = separable(6, 0xabcdef, 6);
  const auto r = train(threads, threads, quick(), 0xabcdef);
  ModelFile m;
  m.net = r.best.params;
  m.schema_id = 0xabcdef;
  m.normalizer.features = {{0, 1, 2}, {1, 2, 3}, 0xabcdef};
  m.normalizer.inputs = Scaler{{-1, -1}, {1, 1}, 0xabcdef};
  m.epoch = r.best.epoch;
  m.validation_score = r.best.validation_score;
  std::stringstream buf;
  save_model(buf, m);
  const std::string bytes = buf.str();
  std::istringstream in(bytes);
  const ModelFile back = load_model(in, 0xabcdef);
  EXPECT_EQ(back.net.out_weights, m.net.out_weights);
  EXPECT_EQ(back.net.groups[1].weights, m.net.groups[1].weights);
  EXPECT_EQ(back.net.config, m.net.config);
  EXPECT_EQ(back.normalizer.features.max, m.normalizer.features.max);
  ASSERT_TRUE(back.normalizer.inputs.has_value());
  EXPECT_EQ(back.epoch, m.epoch);
  EXPECT_EQ(back.validation_score, m.validation_score);
  EXPECT_EQ(bytes.substr(0, 8), "CQAMODEL");

  std::stringstream again;
  save_model(again, back);
  EXPECT_EQ(again.str(), bytes);

  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(load_model(truncated), InputError);
  std::istringstream trailing(bytes + "x");
  EXPECT_THROW(load_model(trailing), InputError);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream magic(bad_magic);
  EXPECT_THROW(load_model(magic), InputError);

  std::istringstream mismatch(bytes);
  try {
    load_model(mismatch, 0x1234);
    FAIL();
  } catch (const SchemaError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find(schema_id_hex(0xabcdef)), std::string::npos) << what;
    EXPECT_NE(what.find(schema_id_hex(0x1234)), std::string::npos) << what;
  }
}
