#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqarank/corpus.hpp"
#include "cqarank/ranker.hpp"

namespace cqarank {

inline constexpr int kDefaultCutoff = 10;

// Per-thread measures over labels in rank order. All return nullopt when
// the list has no Good label (such threads are excluded from the means).
std::optional<double> average_precision(std::span<const BinaryLabel> ranked, int K = kDefaultCutoff);
std::optional<double> reciprocal_rank(std::span<const BinaryLabel> ranked, int K = kDefaultCutoff);
std::optional<double> average_recall(std::span<const BinaryLabel> ranked, int K = kDefaultCutoff);

using LabelRanking = std::vector<BinaryLabel>;

// Macro averages over threads with at least one Good; InputError when no
// thread qualifies.
double mean_average_precision(std::span<const LabelRanking> rankings, int K = kDefaultCutoff);
double mrr(std::span<const LabelRanking> rankings, int K = kDefaultCutoff);
double avg_rec(std::span<const LabelRanking> rankings, int K = kDefaultCutoff);

struct MethodScores {
  std::string name;
  double map = 0.0;
  double avg_rec = 0.0;
  double mrr = 0.0;
  int cutoff = kDefaultCutoff;
  std::size_t threads_scored = 0;
  std::size_t threads_without_good = 0;
};

MethodScores evaluate(const std::string& name, std::span<const LabelRanking> rankings, int K = kDefaultCutoff);

/// Gold binary labels keyed by (question id, comment id).
using GoldIndex = std::map<std::pair<std::string, std::string>, BinaryLabel>;
GoldIndex gold_index(std::span<const Thread> threads);

/// Groups ranking lines by method and question, orders each group by rank
/// and maps comment ids to gold labels. Unknown ids raise InputError
/// naming them.
std::map<std::string, std::vector<LabelRanking>> label_rankings(std::span<const RankingLine> lines,
                                                                const GoldIndex& gold);
std::vector<LabelRanking> label_rankings(std::span<const RankedThread> rankings, const GoldIndex& gold);

/// Fixed-width table "System MAP AvgRec MRR", rows by MAP descending then
/// name, values x100 with two decimals.
std::string render_report(std::vector<MethodScores> rows);

/// One tab-separated line per method: name, raw MAP, AvgRec, MRR, K,
/// threads scored, threads without Good.
std::string render_summary(std::vector<MethodScores> rows);

/// Rows with the MAP difference to `full` (x100), full system first, then
/// by drop size.
std::string render_ablation(const MethodScores& full, std::vector<MethodScores> variants);

}  // namespace cqarank
