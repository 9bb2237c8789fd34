#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "cqarank/error.hpp"
#include "cqarank/ranker.hpp"

using namespace cqarank;

namespace {

const std::vector<std::string> kIds{"c1", "c2", "c3"};
const std::vector<int> kPos{1, 2, 3};

std::vector<std::string> order(const RankedThread& r) {
  std::vector<std::string> out;
  for (const auto& c : r.comments) out.push_back(c.comment_id);
  return out;
}

Thread thread_of(const std::string& id, int n) {
  Thread t;
  t.question.id = id;
  t.question.body = "q";
  for (int k = 1; k <= n; ++k) {
    Comment c;
    c.id = id + "_C" + std::to_string(k);
    c.position = k;
    c.body = "x";
    t.comments.push_back(c);
  }
  return t;
}

}  // namespace

TEST(RankByPairs, OracleModelPutsGoodFirst) {
  // Labels B, G, B: f(i, j) = 1 when i is the Good comment, 0 when j is.
  const std::vector<bool> good{false, true, false};
  auto f = [&](std::size_t i, std::size_t j) { return good[i] && !good[j] ? 1.0 : (good[j] && !good[i] ? 0.0 : 0.5); };
  const auto r = rank_by_pairs("q", kIds, kPos, f);
  EXPECT_EQ(order(r), (std::vector<std::string>{"c2", "c1", "c3"}));
}

TEST(RankByPairs, ConstantModelKeepsOriginalOrder) {
  int calls = 0;
  auto f = [&](std::size_t, std::size_t) {
    ++calls;
    return 0.5;
  };
  const auto r = rank_by_pairs("q", kIds, kPos, f);
  EXPECT_EQ(order(r), kIds);
  EXPECT_EQ(calls, 6);  // n(n-1)
  for (const auto& c : r.comments) EXPECT_EQ(c.score, 0.0);
}

TEST(RankByPairs, AntisymmetricScoresSumToZero) {
  auto f = [](std::size_t i, std::size_t j) { return 0.1 + 0.07 * static_cast<double>(3 * i + j * j); };
  const auto r = rank_by_pairs("q", kIds, kPos, f);
  double sum = 0.0;
  for (const auto& c : r.comments) sum += c.score;
  EXPECT_NEAR(sum, 0.0, 1e-12);
  // Adding a constant to every output does not change the antisymmetric scores.
  auto g = [&](std::size_t i, std::size_t j) { return f(i, j) + 0.2; };
  const auto shifted = rank_by_pairs("q", kIds, kPos, g);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(shifted.comments[k].comment_id, r.comments[k].comment_id);
    EXPECT_NEAR(shifted.comments[k].score, r.comments[k].score, 1e-12);
  }
}

TEST(RankByPairs, PlainSumRule) {
  auto f = [](std::size_t i, std::size_t) { return i == 2 ? 0.9 : 0.1; };
  const auto r = rank_by_pairs("q", kIds, kPos, f, Accumulation::PlainSum);
  EXPECT_EQ(r.comments[0].comment_id, "c3");
  EXPECT_NEAR(r.comments[0].score, 1.8, 1e-12);
}

TEST(RankByScores, TiesByPosition) {
  const auto r = rank_by_scores("q", {"a", "b", "c"}, {3, 1, 2}, {0.5, 0.5, 0.9}, RankMethod::Classification);
  EXPECT_EQ(order(r), (std::vector<std::string>{"c", "b", "a"}));
}

TEST(Baselines, TimeIsOriginalOrder) {
  const auto r = baseline_time(thread_of("Q", 5));
  for (int k = 0; k < 5; ++k) EXPECT_EQ(r.comments[k].position, k + 1);
  EXPECT_EQ(r.label, "baseline-time");
}

TEST(Baselines, RandomDependsOnSeedAndThreadOnly) {
  const Thread t = thread_of("Q", 10);
  EXPECT_EQ(order(baseline_random(t, 1)), order(baseline_random(t, 1)));
  EXPECT_NE(order(baseline_random(t, 1)), order(baseline_random(t, 2)));
  // Another thread with the same length gets an independent permutation.
  auto positions = [](const RankedThread& r) {
    std::vector<int> p;
    for (const auto& c : r.comments) p.push_back(c.position);
    return p;
  };
  EXPECT_NE(positions(baseline_random(thread_of("Q", 10), 1)), positions(baseline_random(thread_of("R", 10), 1)));
}

TEST(RankMethod, ParseAndPrint) {
  for (auto m : {RankMethod::Pairwise, RankMethod::Classification, RankMethod::BaselineTime, RankMethod::BaselineRandom}) {
    EXPECT_EQ(parse_rank_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_rank_method("svm"), ConfigError);
}

TEST(RankingsFile, RoundTrip) {
  const auto r = rank_by_scores("Q1", {"a", "b"}, {1, 2}, {0.1, 1.0 / 3.0}, RankMethod::Pairwise);
  std::stringstream buf;
  write_rankings(buf, {r});
  EXPECT_EQ(buf.str().substr(0, 7), "Q1\tb\t1\t");
  const auto lines = read_rankings(buf);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].score, 1.0 / 3.0);
  EXPECT_EQ(lines[1].rank, 2);
  EXPECT_EQ(lines[1].method, "pairwise");
  std::istringstream bad("Q1\ta\tone\t0.5\tx\n");
  EXPECT_THROW(read_rankings(bad), ParseError);
}
