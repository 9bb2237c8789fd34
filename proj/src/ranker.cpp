#include "cqarank/ranker.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "cqarank/error.hpp"

namespace cqarank {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_id(std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string method_label(RankMethod m) { return std::string(to_string(m)); }

}  // namespace

std::string_view to_string(RankMethod m) {
  switch (m) {
    case RankMethod::Pairwise: return "pairwise";
    case RankMethod::Classification: return "classification";
    case RankMethod::BaselineTime: return "baseline-time";
    case RankMethod::BaselineRandom: return "baseline-random";
  }
  return "?";
}

RankMethod parse_rank_method(std::string_view name) {
  for (RankMethod m : {RankMethod::Pairwise, RankMethod::Classification, RankMethod::BaselineTime,
                       RankMethod::BaselineRandom}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown ranking method '" + std::string(name) +
                    "' (expected pairwise, classification, baseline-time or baseline-random)");
}

RankedThread rank_by_scores(const std::string& thread_id, const std::vector<std::string>& comment_ids,
                            const std::vector<int>& positions, const std::vector<double>& scores,
                            RankMethod method) {
  RankedThread out;
  out.thread_id = thread_id;
  out.method = method;
  out.label = method_label(method);
  for (std::size_t i = 0; i < comment_ids.size(); ++i) out.comments.push_back({comment_ids[i], scores[i], positions[i]});
  std::stable_sort(out.comments.begin(), out.comments.end(), [](const RankedComment& a, const RankedComment& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.position < b.position;
  });
  return out;
}

RankedThread rank_by_pairs(const std::string& thread_id, const std::vector<std::string>& comment_ids,
                           const std::vector<int>& positions, const PairScorer& f, Accumulation rule) {
  const std::size_t n = comment_ids.size();
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double fij = f(i, j);
      s[i] += fij;
      if (rule == Accumulation::Antisymmetric) s[j] -= fij;
    }
  }
  return rank_by_scores(thread_id, comment_ids, positions, s, RankMethod::Pairwise);
}

RankedThread score_pairwise(const NetParams& model, const PreparedThread& t, Accumulation rule) {
  auto f = [&](std::size_t i, std::size_t j) {
    return forward(model, PairInput{t.question_input.values, t.comment_inputs[i].values, t.comment_inputs[j].values,
                                    t.pair_features[i].values, t.pair_features[j].values})
        .p;
  };
  return rank_by_pairs(t.id, t.comment_ids, t.positions, f, rule);
}

RankedThread score_classification(const NetParams& model, const PreparedThread& t) {
  std::vector<double> s;
  s.reserve(t.comment_ids.size());
  for (std::size_t i = 0; i < t.comment_ids.size(); ++i) {
    s.push_back(forward_classify(model, ClassifyInput{t.question_input.values, t.comment_inputs[i].values,
                                                      t.pair_features[i].values})
                    .p);
  }
  return rank_by_scores(t.id, t.comment_ids, t.positions, s, RankMethod::Classification);
}

RankedThread baseline_time(const Thread& thread) {
  std::vector<std::string> ids;
  std::vector<int> pos;
  std::vector<double> s;
  for (const Comment& c : thread.comments) {
    ids.push_back(c.id);
    pos.push_back(c.position);
    s.push_back(1.0 / static_cast<double>(c.position));
  }
  return rank_by_scores(thread.id(), ids, pos, s, RankMethod::BaselineTime);
}

RankedThread baseline_random(const Thread& thread, std::uint64_t seed) {
  // Independent uniform scores give a uniform permutation; the stream
  // depends only on (thread id, seed).
  std::uint64_t state = splitmix64(hash_id(thread.id()) ^ splitmix64(seed));
  std::vector<std::string> ids;
  std::vector<int> pos;
  std::vector<double> s;
  for (const Comment& c : thread.comments) {
    ids.push_back(c.id);
    pos.push_back(c.position);
    state = splitmix64(state);
    s.push_back(static_cast<double>(state >> 11) * 0x1.0p-53);
  }
  return rank_by_scores(thread.id(), ids, pos, s, RankMethod::BaselineRandom);
}

void write_rankings(std::ostream& out, const std::vector<RankedThread>& rankings) {
  char buf[32];
  for (const RankedThread& t : rankings) {
    for (std::size_t r = 0; r < t.comments.size(); ++r) {
      std::snprintf(buf, sizeof buf, "%.17g", t.comments[r].score);
      out << t.thread_id << '\t' << t.comments[r].comment_id << '\t' << (r + 1) << '\t' << buf << '\t'
          << (t.label.empty() ? method_label(t.method) : t.label) << '\n';
    }
  }
}

std::vector<RankingLine> read_rankings(std::istream& in) {
  std::vector<RankingLine> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 5) throw ParseError("expected 5 tab-separated fields, got " + std::to_string(f.size()), line_no);
    RankingLine r;
    r.question_id = f[0];
    r.comment_id = f[1];
    r.method = f[4];
    try {
      std::size_t used = 0;
      r.rank = std::stoi(f[2], &used);
      if (used != f[2].size() || r.rank < 1) throw std::invalid_argument("rank");
      r.score = std::stod(f[3], &used);
      if (used != f[3].size()) throw std::invalid_argument("score");
    } catch (const std::logic_error&) {
      throw ParseError("bad rank or score field", line_no);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RankingLine> read_rankings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open ranking file " + path);
  try {
    return read_rankings(in);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace cqarank
