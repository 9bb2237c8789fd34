#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cqarank/corpus.hpp"
#include "cqarank/features.hpp"
#include "cqarank/network.hpp"

namespace cqarank {

enum class RankMethod { Pairwise, Classification, BaselineTime, BaselineRandom };

std::string_view to_string(RankMethod m);
// Accepts the names above in kebab case ("pairwise", "baseline-time", ...).
RankMethod parse_rank_method(std::string_view name);

// How pair outputs become comment scores.
enum class Accumulation {
  Antisymmetric,  // s_i = sum_j (f_ij - f_ji)
  PlainSum,       // s_i = sum_j f_ij
};

struct RankedComment {
  std::string comment_id;
  double score = 0.0;
  int position = 0;
};

struct RankedThread {
  std::string thread_id;
  std::vector<RankedComment> comments;  // best first
  RankMethod method = RankMethod::Pairwise;
  std::string label;                    // method column of the output file
};

// f(i, j): preference of comment i over comment j (indices into the thread).
using PairScorer = std::function<double(std::size_t, std::size_t)>;

/// Scores every ordered pair once and accumulates. Sorting is by score
/// descending, then position ascending.
RankedThread rank_by_pairs(const std::string& thread_id, const std::vector<std::string>& comment_ids,
                           const std::vector<int>& positions, const PairScorer& f,
                           Accumulation rule = Accumulation::Antisymmetric);

/// Sorts already-scored comments with the same tie rule.
RankedThread rank_by_scores(const std::string& thread_id, const std::vector<std::string>& comment_ids,
                            const std::vector<int>& positions, const std::vector<double>& scores,
                            RankMethod method);

RankedThread score_pairwise(const NetParams& model, const PreparedThread& thread,
                            Accumulation rule = Accumulation::Antisymmetric);
RankedThread score_classification(const NetParams& model, const PreparedThread& thread);

RankedThread baseline_time(const Thread& thread);
RankedThread baseline_random(const Thread& thread, std::uint64_t seed);

/// "<question_id>\t<comment_id>\t<rank>\t<score>\t<method>" per comment.
void write_rankings(std::ostream& out, const std::vector<RankedThread>& rankings);

struct RankingLine {
  std::string question_id;
  std::string comment_id;
  int rank = 0;
  double score = 0.0;
  std::string method;
};

std::vector<RankingLine> read_rankings(std::istream& in);
std::vector<RankingLine> read_rankings(const std::string& path);

}  // namespace cqarank
