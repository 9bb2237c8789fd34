#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cqarank/textproc.hpp"

namespace cqarank {

/// Sentence-level BLEU with its intermediate quantities. Raw precisions are
/// unsmoothed; smoothing only enters the geometric mean.
struct BleuComponents {
  std::array<double, 4> precisions{};
  std::array<int, 4> matches{};
  std::array<int, 4> totals{};
  int hyp_len = 0;
  int ref_len = 0;
  double length_ratio = 0.0;  // hyp_len / ref_len, 0 for an empty reference
  double brevity_penalty = 0.0;
  double bleu = 0.0;
};

/// Clipped n-gram precisions against a single reference. A zero precision
/// with a nonzero total is replaced by 1/(2*total) inside the geometric
/// mean; orders with no hypothesis n-grams contribute a factor of one. An
/// empty hypothesis yields bleu = 0 and brevity_penalty = 0.
BleuComponents bleu_components(const TokenSeq& hyp, const TokenSeq& ref);

/// Reference n-gram statistics used for NIST information weights.
struct NistStats {
  std::map<std::string, double> counts;  // n-gram key -> count, n = 1..max_n
  double words = 0.0;                    // count of the empty prefix
};

NistStats nist_stats(const TokenSeq& ref, int max_n = 5);
// Accumulates statistics over many references (corpus-level weighting).
void add_nist_stats(NistStats& stats, const TokenSeq& ref, int max_n = 5);

/// NIST score with information weights from the reference itself.
double nist(const TokenSeq& hyp, const TokenSeq& ref, int max_n = 5);
/// Same, with information weights taken from external statistics.
double nist(const TokenSeq& hyp, const TokenSeq& ref, const NistStats& weights, int max_n = 5);

/// Levenshtein distance over tokens with unit costs.
int edit_distance(const TokenSeq& hyp, const TokenSeq& ref);

/// Translation edit rate: (edits + shifts) / ref_len. With shifts enabled
/// the greedy search repeatedly applies the block move (at most
/// kMaxShiftLength tokens, exactly matching a reference span and currently
/// misaligned) with the largest reduction in edit distance, charging one
/// edit per shift, until no move helps. An empty reference gives hyp_len.
double ter(const TokenSeq& hyp, const TokenSeq& ref, bool allow_shifts = true);

inline constexpr int kMaxShiftLength = 10;

/// Exact-then-stem unigram alignment score with fragmentation penalty.
double meteor_lite(const TokenSeq& hyp, const TokenSeq& ref);

struct MeteorAlignment {
  int matches = 0;
  int chunks = 0;
};
MeteorAlignment meteor_align(const TokenSeq& hyp, const TokenSeq& ref);

inline constexpr double kMeteorAlpha = 0.9;
inline constexpr double kMeteorGamma = 0.5;
inline constexpr double kMeteorBeta = 3.0;

struct UnigramPR {
  double precision = 0.0;
  double recall = 0.0;
};
UnigramPR unigram_pr(const TokenSeq& hyp, const TokenSeq& ref);

struct MetricBundle {
  double bleu = 0.0;
  double nist = 0.0;
  double ter = 0.0;
  double meteor_lite = 0.0;
  double unigram_precision = 0.0;
  double unigram_recall = 0.0;
};

/// All metrics for one hypothesis/reference pair. In the ranking task the
/// comment is the hypothesis and the question is the reference.
MetricBundle metric_bundle(const TokenSeq& hyp, const TokenSeq& ref);

}  // namespace cqarank
