#include "cqarank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <unordered_map>

namespace cqarank {

namespace {

int clipped_matches(const NGramCounts& hyp, const NGramCounts& ref) {
  int m = 0;
  for (const auto& [key, c] : hyp.counts) {
    auto it = ref.counts.find(key);
    if (it != ref.counts.end()) m += std::min(c, it->second);
  }
  return m;
}

// Drops the last token of an n-gram key.
std::string prefix_key(const std::string& key) {
  const std::size_t cut = key.rfind('\x1f');
  return cut == std::string::npos ? std::string() : key.substr(0, cut);
}

struct Alignment {
  int distance = 0;
  std::vector<int> hyp_exact;   // ref index exactly matched by each hyp token, or -1
  std::vector<int> ref_to_hyp;  // hyp index on the diagonal with each ref token, or -1
};

Alignment align(const TokenSeq& hyp, const TokenSeq& ref) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  std::vector<int> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> int& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int sub = at(i - 1, j - 1) + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      at(i, j) = std::min({sub, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  Alignment a;
  a.distance = at(n, m);
  a.hyp_exact.assign(n, -1);
  a.ref_to_hyp.assign(m, -1);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = hyp[i - 1] == ref[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (same) a.hyp_exact[i - 1] = static_cast<int>(j - 1);
        a.ref_to_hyp[j - 1] = static_cast<int>(i - 1);
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      --i;
    } else {
      --j;
    }
  }
  return a;
}

TokenSeq apply_shift(const TokenSeq& hyp, std::size_t start, std::size_t len, std::size_t dest) {
  // `dest` is an insertion point in the original coordinates.
  TokenSeq out;
  out.reserve(hyp.size());
  const auto span_begin = hyp.begin() + static_cast<std::ptrdiff_t>(start);
  const auto span_end = span_begin + static_cast<std::ptrdiff_t>(len);
  for (std::size_t p = 0; p <= hyp.size(); ++p) {
    if (p == dest) out.insert(out.end(), span_begin, span_end);
    if (p == hyp.size()) break;
    if (p >= start && p < start + len) continue;
    out.push_back(hyp[p]);
  }
  return out;
}

double meteor_from(const MeteorAlignment& a, std::size_t hyp_len, std::size_t ref_len) {
  if (a.matches == 0) return 0.0;
  const double p = static_cast<double>(a.matches) / static_cast<double>(hyp_len);
  const double r = static_cast<double>(a.matches) / static_cast<double>(ref_len);
  const double fmean = p * r / (kMeteorAlpha * p + (1.0 - kMeteorAlpha) * r);
  const double frag = static_cast<double>(a.chunks) / static_cast<double>(a.matches);
  const double penalty = kMeteorGamma * std::pow(frag, kMeteorBeta);
  return fmean * (1.0 - penalty);
}

}  // namespace

BleuComponents bleu_components(const TokenSeq& hyp, const TokenSeq& ref) {
  BleuComponents b;
  b.hyp_len = static_cast<int>(hyp.size());
  b.ref_len = static_cast<int>(ref.size());
  b.length_ratio = ref.empty() ? 0.0 : static_cast<double>(hyp.size()) / static_cast<double>(ref.size());
  double log_sum = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const NGramCounts h = ngrams(hyp, n);
    const NGramCounts r = ngrams(ref, n);
    const int total = std::max(0, b.hyp_len - n + 1);
    const int match = clipped_matches(h, r);
    b.totals[n - 1] = total;
    b.matches[n - 1] = match;
    b.precisions[n - 1] = total > 0 ? static_cast<double>(match) / total : 0.0;
    if (total > 0) {
      const double p = match > 0 ? b.precisions[n - 1] : 1.0 / (2.0 * total);
      log_sum += std::log(p);
    }
  }
  if (hyp.empty()) {
    b.brevity_penalty = 0.0;
    b.bleu = 0.0;
    return b;
  }
  b.brevity_penalty = b.hyp_len < b.ref_len
                          ? std::exp(1.0 - static_cast<double>(b.ref_len) / b.hyp_len)
                          : 1.0;
  b.bleu = b.brevity_penalty * std::exp(log_sum / 4.0);
  return b;
}

void add_nist_stats(NistStats& stats, const TokenSeq& ref, int max_n) {
  stats.words += static_cast<double>(ref.size());
  for (int n = 1; n <= max_n; ++n) {
    for (const auto& [key, c] : ngrams(ref, n).counts) stats.counts[key] += c;
  }
}

NistStats nist_stats(const TokenSeq& ref, int max_n) {
  NistStats stats;
  add_nist_stats(stats, ref, max_n);
  return stats;
}

double nist(const TokenSeq& hyp, const TokenSeq& ref, int max_n) {
  return nist(hyp, ref, nist_stats(ref, max_n), max_n);
}

double nist(const TokenSeq& hyp, const TokenSeq& ref, const NistStats& weights, int max_n) {
  if (hyp.empty() || ref.empty()) return 0.0;
  auto count_of = [&](const std::string& key) {
    if (key.empty()) return weights.words;
    auto it = weights.counts.find(key);
    return it == weights.counts.end() ? 0.0 : it->second;
  };
  double score = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const NGramCounts h = ngrams(hyp, n);
    const int total = h.total();
    if (total == 0) break;
    const NGramCounts r = ngrams(ref, n);
    double info_sum = 0.0;
    for (const auto& [key, c] : h.counts) {
      auto it = r.counts.find(key);
      if (it == r.counts.end()) continue;
      const double gram = count_of(key);
      const double prefix = count_of(prefix_key(key));
      if (gram <= 0.0 || prefix <= 0.0) continue;
      info_sum += std::min(c, it->second) * std::log2(prefix / gram);
    }
    score += info_sum / total;
  }
  // Length factor: 0.5 when the hypothesis is 2/3 of the reference length.
  const double beta = std::log(0.5) / std::pow(std::log(2.0 / 3.0), 2);
  const double ratio = std::min(static_cast<double>(hyp.size()) / ref.size(), 1.0);
  return score * std::exp(beta * std::pow(std::log(ratio), 2));
}

int edit_distance(const TokenSeq& hyp, const TokenSeq& ref) {
  const std::size_t m = ref.size();
  std::vector<int> prev(m + 1);
  std::vector<int> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= hyp.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = std::min({prev[j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double ter(const TokenSeq& hyp, const TokenSeq& ref, bool allow_shifts) {
  if (ref.empty()) return static_cast<double>(hyp.size());
  if (!allow_shifts) return static_cast<double>(edit_distance(hyp, ref)) / ref.size();

  std::unordered_map<std::string, std::vector<std::size_t>> ref_positions;
  for (std::size_t j = 0; j < ref.size(); ++j) ref_positions[ref[j]].push_back(j);

  TokenSeq current = hyp;
  int shifts = 0;
  Alignment a = align(current, ref);
  while (a.distance > 0) {
    const std::size_t n = current.size();
    // Insertion point in `current` that lines a moved block up with ref[j].
    auto anchor_before = [&](std::size_t j) -> std::size_t {
      for (std::size_t r = j; r-- > 0;) {
        if (a.ref_to_hyp[r] >= 0) return static_cast<std::size_t>(a.ref_to_hyp[r]) + 1;
      }
      return 0;
    };

    int best_distance = a.distance;
    TokenSeq best;
    for (std::size_t i = 0; i < n; ++i) {
      auto pos = ref_positions.find(current[i]);
      if (pos == ref_positions.end()) continue;
      for (std::size_t j : pos->second) {
        std::size_t len = 0;
        bool aligned = true;
        while (len < static_cast<std::size_t>(kMaxShiftLength) && i + len < n &&
               j + len < ref.size() && current[i + len] == ref[j + len]) {
          aligned = aligned && a.hyp_exact[i + len] == static_cast<int>(j + len);
          ++len;
          if (aligned) continue;

          std::size_t dests[3] = {anchor_before(j), n + 1, n + 1};
          if (a.ref_to_hyp[j] >= 0) {
            dests[1] = static_cast<std::size_t>(a.ref_to_hyp[j]);
            dests[2] = dests[1] + 1;
          }
          for (std::size_t k = 0; k < 3; ++k) {
            const std::size_t dest = dests[k];
            if (dest > n || (dest >= i && dest <= i + len)) continue;
            if (k > 0 && dest == dests[0]) continue;
            if (k == 2 && dest == dests[1]) continue;
            TokenSeq moved = apply_shift(current, i, len, dest);
            const int d = edit_distance(moved, ref);
            if (d < best_distance) {
              best_distance = d;
              best = std::move(moved);
            }
          }
        }
      }
    }
    // A shift costs one edit, so it must save at least two.
    if (a.distance - best_distance <= 1) break;
    current = std::move(best);
    ++shifts;
    a = align(current, ref);
  }
  return static_cast<double>(a.distance + shifts) / ref.size();
}

MeteorAlignment meteor_align(const TokenSeq& hyp, const TokenSeq& ref) {
  const std::size_t n = hyp.size();
  const std::size_t m = ref.size();
  std::vector<int> hyp_to_ref(n, -1);
  std::vector<bool> ref_used(m, false);

  auto stage = [&](const std::vector<std::string>& hkeys, const std::vector<std::string>& rkeys) {
    for (std::size_t i = 0; i < n; ++i) {
      if (hyp_to_ref[i] >= 0) continue;
      // Continue the previous chunk when possible, otherwise take the free
      // candidate nearest to the proportional position.
      int chosen = -1;
      if (i > 0 && hyp_to_ref[i - 1] >= 0) {
        const auto next = static_cast<std::size_t>(hyp_to_ref[i - 1]) + 1;
        if (next < m && !ref_used[next] && rkeys[next] == hkeys[i]) chosen = static_cast<int>(next);
      }
      if (chosen < 0) {
        const double expected = n > 1 ? static_cast<double>(i) * (m - 1) / (n - 1) : 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
          if (ref_used[j] || rkeys[j] != hkeys[i]) continue;
          const double dist = std::abs(static_cast<double>(j) - expected);
          if (dist < best) {
            best = dist;
            chosen = static_cast<int>(j);
          }
        }
      }
      if (chosen >= 0) {
        hyp_to_ref[i] = chosen;
        ref_used[static_cast<std::size_t>(chosen)] = true;
      }
    }
  };

  stage(hyp, ref);
  std::vector<std::string> hstems(n);
  std::vector<std::string> rstems(m);
  for (std::size_t i = 0; i < n; ++i) hstems[i] = stem_light(hyp[i]);
  for (std::size_t j = 0; j < m; ++j) rstems[j] = stem_light(ref[j]);
  stage(hstems, rstems);

  MeteorAlignment out;
  int prev = -2;
  for (std::size_t i = 0; i < n; ++i) {
    if (hyp_to_ref[i] < 0) {
      prev = -2;
      continue;
    }
    ++out.matches;
    if (hyp_to_ref[i] != prev + 1) ++out.chunks;
    prev = hyp_to_ref[i];
  }
  return out;
}

double meteor_lite(const TokenSeq& hyp, const TokenSeq& ref) {
  return meteor_from(meteor_align(hyp, ref), hyp.size(), ref.size());
}

UnigramPR unigram_pr(const TokenSeq& hyp, const TokenSeq& ref) {
  const int m = clipped_matches(ngrams(hyp, 1), ngrams(ref, 1));
  UnigramPR pr;
  if (!hyp.empty()) pr.precision = static_cast<double>(m) / hyp.size();
  if (!ref.empty()) pr.recall = static_cast<double>(m) / ref.size();
  return pr;
}

MetricBundle metric_bundle(const TokenSeq& hyp, const TokenSeq& ref) {
  MetricBundle b;
  b.bleu = bleu_components(hyp, ref).bleu;
  b.nist = nist(hyp, ref);
  b.ter = ter(hyp, ref, true);
  b.meteor_lite = meteor_lite(hyp, ref);
  const UnigramPR pr = unigram_pr(hyp, ref);
  b.unigram_precision = pr.precision;
  b.unigram_recall = pr.recall;
  return b;
}

}  // namespace cqarank
