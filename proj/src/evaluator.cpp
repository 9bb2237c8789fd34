#include "cqarank/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "cqarank/error.hpp"

namespace cqarank {

namespace {

std::size_t good_count(std::span<const BinaryLabel> ranked) {
  return static_cast<std::size_t>(std::count(ranked.begin(), ranked.end(), BinaryLabel::Good));
}

void check_cutoff(int K) {
  if (K < 1) throw ConfigError("evaluation cutoff must be at least 1");
}

template <typename Measure>
double macro_average(std::span<const LabelRanking> rankings, int K, Measure m) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const LabelRanking& r : rankings) {
    if (auto v = m(r, K)) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) throw InputError("no thread has a Good comment; the measures are undefined");
  return sum / static_cast<double>(n);
}

std::string fixed2(double raw) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", raw * 100.0);
  return buf;
}

bool by_map(const MethodScores& a, const MethodScores& b) {
  if (a.map != b.map) return a.map > b.map;
  return a.name < b.name;
}

std::string pad(const std::string& s, std::size_t width, bool left) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

}  // namespace

std::optional<double> average_precision(std::span<const BinaryLabel> ranked, int K) {
  check_cutoff(K);
  const std::size_t R = good_count(ranked);
  if (R == 0) return std::nullopt;
  const std::size_t limit = std::min(ranked.size(), static_cast<std::size_t>(K));
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < limit; ++k) {
    if (ranked[k] != BinaryLabel::Good) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(std::min(R, static_cast<std::size_t>(K)));
}

std::optional<double> reciprocal_rank(std::span<const BinaryLabel> ranked, int K) {
  check_cutoff(K);
  if (good_count(ranked) == 0) return std::nullopt;
  const std::size_t limit = std::min(ranked.size(), static_cast<std::size_t>(K));
  for (std::size_t k = 0; k < limit; ++k) {
    if (ranked[k] == BinaryLabel::Good) return 1.0 / static_cast<double>(k + 1);
  }
  return 0.0;
}

std::optional<double> average_recall(std::span<const BinaryLabel> ranked, int K) {
  check_cutoff(K);
  const std::size_t R = good_count(ranked);
  if (R == 0) return std::nullopt;
  const double denom = static_cast<double>(std::min(R, static_cast<std::size_t>(K)));
  double sum = 0.0;
  std::size_t found = 0;
  // k runs to K even past the end of a short list.
  for (std::size_t k = 0; k < static_cast<std::size_t>(K); ++k) {
    if (k < ranked.size() && ranked[k] == BinaryLabel::Good) ++found;
    sum += static_cast<double>(found) / denom;
  }
  return sum / static_cast<double>(K);
}

double mean_average_precision(std::span<const LabelRanking> rankings, int K) {
  return macro_average(rankings, K, [](const LabelRanking& r, int k) { return average_precision(r, k); });
}

double mrr(std::span<const LabelRanking> rankings, int K) {
  return macro_average(rankings, K, [](const LabelRanking& r, int k) { return reciprocal_rank(r, k); });
}

double avg_rec(std::span<const LabelRanking> rankings, int K) {
  return macro_average(rankings, K, [](const LabelRanking& r, int k) { return average_recall(r, k); });
}

MethodScores evaluate(const std::string& name, std::span<const LabelRanking> rankings, int K) {
  MethodScores s;
  s.name = name;
  s.cutoff = K;
  for (const LabelRanking& r : rankings) {
    if (good_count(r) == 0) ++s.threads_without_good;
    else ++s.threads_scored;
  }
  s.map = mean_average_precision(rankings, K);
  s.avg_rec = avg_rec(rankings, K);
  s.mrr = mrr(rankings, K);
  if (s.threads_without_good > 0) {
    std::cerr << "warning: " << name << ": " << s.threads_without_good
              << " thread(s) without a Good comment excluded from evaluation\n";
  }
  return s;
}

GoldIndex gold_index(std::span<const Thread> threads) {
  GoldIndex gold;
  for (const Thread& t : threads) {
    for (const Comment& c : t.comments) gold[{t.id(), c.id}] = c.binary_label();
  }
  return gold;
}

std::map<std::string, std::vector<LabelRanking>> label_rankings(std::span<const RankingLine> lines,
                                                                const GoldIndex& gold) {
  // method -> question -> (rank, label), questions in first-seen order
  std::map<std::string, std::vector<std::pair<std::string, std::vector<std::pair<int, BinaryLabel>>>>> grouped;
  for (const RankingLine& l : lines) {
    auto it = gold.find({l.question_id, l.comment_id});
    if (it == gold.end()) {
      throw InputError("ranking refers to unknown comment " + l.comment_id + " of question " + l.question_id);
    }
    auto& threads = grouped[l.method];
    auto t = std::find_if(threads.begin(), threads.end(), [&](const auto& e) { return e.first == l.question_id; });
    if (t == threads.end()) {
      threads.push_back({l.question_id, {}});
      t = threads.end() - 1;
    }
    t->second.push_back({l.rank, it->second});
  }
  std::map<std::string, std::vector<LabelRanking>> out;
  for (auto& [method, threads] : grouped) {
    auto& rankings = out[method];
    for (auto& [qid, entries] : threads) {
      std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      LabelRanking r;
      for (const auto& e : entries) r.push_back(e.second);
      rankings.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<LabelRanking> label_rankings(std::span<const RankedThread> rankings, const GoldIndex& gold) {
  std::vector<LabelRanking> out;
  for (const RankedThread& t : rankings) {
    LabelRanking r;
    for (const RankedComment& c : t.comments) {
      auto it = gold.find({t.thread_id, c.comment_id});
      if (it == gold.end()) {
        throw InputError("ranking refers to unknown comment " + c.comment_id + " of question " + t.thread_id);
      }
      r.push_back(it->second);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string render_report(std::vector<MethodScores> rows) {
  std::sort(rows.begin(), rows.end(), by_map);
  std::size_t width = 6;
  for (const MethodScores& r : rows) width = std::max(width, r.name.size());
  std::string out = pad("System", width, true) + "  " + pad("MAP", 7, false) + "  " + pad("AvgRec", 7, false) +
                    "  " + pad("MRR", 7, false) + "\n";
  for (const MethodScores& r : rows) {
    out += pad(r.name, width, true) + "  " + pad(fixed2(r.map), 7, false) + "  " + pad(fixed2(r.avg_rec), 7, false) +
           "  " + pad(fixed2(r.mrr), 7, false) + "\n";
  }
  return out;
}

std::string render_summary(std::vector<MethodScores> rows) {
  std::sort(rows.begin(), rows.end(), by_map);
  std::string out;
  char buf[160];
  for (const MethodScores& r : rows) {
    std::snprintf(buf, sizeof buf, "\t%.17g\t%.17g\t%.17g\t%d\t%zu\t%zu\n", r.map, r.avg_rec, r.mrr, r.cutoff,
                  r.threads_scored, r.threads_without_good);
    out += r.name + buf;
  }
  return out;
}

std::string render_ablation(const MethodScores& full, std::vector<MethodScores> variants) {
  std::sort(variants.begin(), variants.end(), [&](const MethodScores& a, const MethodScores& b) {
    if (a.map != b.map) return a.map < b.map;
    return a.name < b.name;
  });
  std::size_t width = std::max<std::size_t>(6, full.name.size());
  for (const MethodScores& r : variants) width = std::max(width, r.name.size());
  auto row = [&](const MethodScores& r) {
    char delta[32];
    const double d = (r.map - full.map) * 100.0;
    std::snprintf(delta, sizeof delta, std::abs(d) < 0.005 ? "%.2f" : "%+.2f", std::abs(d) < 0.005 ? 0.0 : d);
    return pad(r.name, width, true) + "  " + pad(fixed2(r.map), 7, false) + "  " + pad(delta, 7, false) + "\n";
  };
  std::string out = pad("System", width, true) + "  " + pad("MAP", 7, false) + "  " + pad("dMAP", 7, false) + "\n";
  out += row(full);
  for (const MethodScores& r : variants) out += row(r);
  return out;
}

}  // namespace cqarank
