#include "cqarank/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include "cqarank/textproc.hpp"

namespace cqarank {

namespace {

// Distributions are spelled out so the corpus depends only on the seed,
// not on the standard library's distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  double normal() {
    // Box-Muller
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

constexpr const char* kSuffixes[] = {"s", "ed", "ing"};

// Consonant-vowel words ending in a consonant that none of the light
// stemmer's suffixes can produce or consume.
std::vector<std::string> make_bases(Rng& rng, std::size_t count, std::set<std::string>& taken) {
  static const std::string onset = "bcfhjklmnprtvwz";
  static const std::string coda = "bcfhklmnprtvwz";
  static const std::string vowels = "aeiou";
  std::vector<std::string> out;
  while (out.size() < count) {
    std::string w;
    w += onset[rng.below(onset.size())];
    w += vowels[rng.below(vowels.size())];
    w += onset[rng.below(onset.size())];
    w += vowels[rng.below(vowels.size())];
    w += coda[rng.below(coda.size())];
    if (taken.count(w) != 0 || stem_light(w) != w) continue;
    bool clean = true;
    for (const char* s : kSuffixes) clean = clean && stem_light(w + s) == w;
    if (!clean) continue;
    taken.insert(w);
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<double> unit_vector(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double norm = 0.0;
  for (double& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

// Splits tokens into one or two sentences with terminal punctuation.
std::string render(const std::vector<std::string>& words, Rng& rng, bool question) {
  std::string out;
  const std::size_t cut = words.size() > 6 && rng.uniform() < 0.5 ? rng.between(3, words.size() - 3) : words.size();
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (k > 0) out += ' ';
    out += words[k];
    if (k + 1 == cut && cut < words.size()) out += '.';
  }
  out += question ? "?" : (rng.uniform() < 0.2 ? "!" : ".");
  return out;
}

struct Vocabulary {
  std::vector<std::string> question_pool;  // Lexical: question and Good words
  std::vector<std::string> bad_pool;       // Lexical: Bad words
  std::vector<std::string> bases;          // StemOnly
};

std::string inflect(const std::string& base, std::size_t form) { return base + kSuffixes[form]; }

class Generator {
 public:
  Generator(const SyntheticConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    std::set<std::string> taken;
    if (cfg.mode == SyntheticMode::Lexical) {
      vocab_.question_pool = make_bases(rng_, 400, taken);
      vocab_.bad_pool = make_bases(rng_, 400, taken);
    } else {
      vocab_.bases = make_bases(rng_, 600, taken);
    }
  }

  Thread thread(std::size_t index) {
    Thread t;
    t.question.id = "SQ" + std::to_string(index);
    t.question.category = "synthetic";
    t.question.author_id = user();
    t.question.date = "2016-01-01 00:00:00";
    std::vector<BinaryLabel> labels(cfg_.comments_per_thread);
    for (BinaryLabel& l : labels) l = rng_.uniform() < cfg_.good_probability ? BinaryLabel::Good : BinaryLabel::Bad;
    if (std::count(labels.begin(), labels.end(), BinaryLabel::Good) == 0) {
      labels[rng_.below(labels.size())] = BinaryLabel::Good;
    }
    if (std::count(labels.begin(), labels.end(), BinaryLabel::Bad) == 0) {
      labels[rng_.below(labels.size())] = BinaryLabel::Bad;
    }

    if (cfg_.mode == SyntheticMode::Lexical) lexical_question(t.question);
    else stem_question(t.question);

    for (std::size_t k = 0; k < labels.size(); ++k) {
      Comment c;
      c.id = t.question.id + "_C" + std::to_string(k + 1);
      c.position = static_cast<int>(k + 1);
      c.author_id = user();
      c.date = t.question.date;
      const bool good = labels[k] == BinaryLabel::Good;
      c.gold_label = good ? GoldLabel::Good
                          : (rng_.uniform() < cfg_.potentially_useful_share ? GoldLabel::PotentiallyUseful : GoldLabel::Bad);
      const std::size_t length = rng_.between(6, 14);
      c.body = render(cfg_.mode == SyntheticMode::Lexical ? lexical_comment(good, length) : stem_comment(good, length),
                      rng_, false);
      t.comments.push_back(std::move(c));
    }
    return t;
  }

  EmbeddingRows table() {
    EmbeddingRows rows;
    auto add = [&](const std::string& w) { rows.emplace_back(w, unit_vector(rng_, cfg_.embedding_dim)); };
    for (const auto& w : vocab_.question_pool) add(w);
    for (const auto& w : vocab_.bad_pool) add(w);
    for (const auto& b : vocab_.bases) {
      for (std::size_t f = 0; f < 3; ++f) add(inflect(b, f));
    }
    return rows;
  }

  void syntax_rows(const std::vector<Thread>& threads, EmbeddingRows& rows) {
    auto add = [&](const std::string& id) {
      std::vector<double> v(cfg_.syntax_dim);
      for (double& x : v) x = rng_.normal();
      rows.emplace_back(id, std::move(v));
    };
    for (const Thread& t : threads) {
      add(t.question.id);
      for (const Comment& c : t.comments) add(c.id);
    }
  }

 private:
  std::string user() { return "user" + std::to_string(rng_.below(8)); }

  void lexical_question(Question& q) {
    question_words_.clear();
    std::vector<std::string> subject;
    std::vector<std::string> body;
    for (std::size_t k = rng_.between(3, 5); k > 0; --k) subject.push_back(pick(vocab_.question_pool));
    for (std::size_t k = rng_.between(8, 14); k > 0; --k) body.push_back(pick(vocab_.question_pool));
    question_words_ = subject;
    question_words_.insert(question_words_.end(), body.begin(), body.end());
    q.subject = render(subject, rng_, false);
    q.body = render(body, rng_, true);
  }

  std::vector<std::string> lexical_comment(bool good, std::size_t length) {
    std::vector<std::string> words;
    if (good) {
      const auto shared = static_cast<std::size_t>(std::ceil(cfg_.good_overlap * static_cast<double>(length)));
      for (std::size_t k = 0; k < length; ++k) {
        words.push_back(k < shared ? pick(question_words_) : pick(vocab_.question_pool));
      }
      rng_.shuffle(words);
    } else {
      for (std::size_t k = 0; k < length; ++k) words.push_back(pick(vocab_.bad_pool));
    }
    return words;
  }

  void stem_question(Question& q) {
    // Distinct bases, one form each.
    std::vector<std::size_t> idx(vocab_.bases.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    rng_.shuffle(idx);
    const std::size_t n_subject = rng_.between(3, 5);
    const std::size_t n_body = rng_.between(8, 14);
    question_bases_.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_subject + n_body));
    question_forms_.clear();
    std::vector<std::string> words;
    for (std::size_t b : question_bases_) {
      const std::size_t form = rng_.below(3);
      question_forms_.push_back(form);
      words.push_back(inflect(vocab_.bases[b], form));
    }
    q.subject = render({words.begin(), words.begin() + static_cast<std::ptrdiff_t>(n_subject)}, rng_, false);
    q.body = render({words.begin() + static_cast<std::ptrdiff_t>(n_subject), words.end()}, rng_, true);
  }

  std::vector<std::string> stem_comment(bool good, std::size_t length) {
    const auto shared = good ? static_cast<std::size_t>(std::ceil(cfg_.good_overlap * static_cast<double>(length))) : 0;
    std::vector<std::string> words;
    for (std::size_t k = 0; k < length; ++k) {
      if (k < shared) {
        const std::size_t q = rng_.below(question_bases_.size());
        // Any form but the one the question used.
        const std::size_t form = (question_forms_[q] + 1 + rng_.below(2)) % 3;
        words.push_back(inflect(vocab_.bases[question_bases_[q]], form));
      } else {
        std::size_t b;
        do {
          b = rng_.below(vocab_.bases.size());
        } while (std::find(question_bases_.begin(), question_bases_.end(), b) != question_bases_.end());
        words.push_back(inflect(vocab_.bases[b], rng_.below(3)));
      }
    }
    rng_.shuffle(words);
    return words;
  }

  const std::string& pick(const std::vector<std::string>& pool) { return pool[rng_.below(pool.size())]; }

  SyntheticConfig cfg_;
  Rng rng_;
  Vocabulary vocab_;
  std::vector<std::string> question_words_;
  std::vector<std::size_t> question_bases_;
  std::vector<std::size_t> question_forms_;
};

}  // namespace

SyntheticCorpus make_synthetic(const SyntheticConfig& cfg) {
  if (cfg.comments_per_thread < 2) throw std::invalid_argument("synthetic threads need at least two comments");
  Generator gen(cfg);
  SyntheticCorpus out;
  for (std::size_t k = 0; k < cfg.train_threads; ++k) out.train.push_back(gen.thread(k + 1));
  for (std::size_t k = 0; k < cfg.test_threads; ++k) out.test.push_back(gen.thread(cfg.train_threads + k + 1));
  out.google = gen.table();
  out.domain = gen.table();
  gen.syntax_rows(out.train, out.syntax);
  gen.syntax_rows(out.test, out.syntax);
  return out;
}

EmbeddingTable to_table(const EmbeddingRows& rows, std::string name) {
  if (rows.empty()) throw std::invalid_argument("no embedding rows");
  EmbeddingTable t(std::move(name), rows.front().second.size());
  for (const auto& [w, v] : rows) t.insert(w, v);
  return t;
}

SidecarVectors to_sidecar(const EmbeddingRows& rows) {
  SidecarVectors s(rows.empty() ? 0 : rows.front().second.size());
  for (const auto& [id, v] : rows) s.insert(id, v);
  return s;
}

void write_rows(std::ostream& out, const EmbeddingRows& rows, bool header) {
  if (header) out << rows.size() << ' ' << (rows.empty() ? 0 : rows.front().second.size()) << '\n';
  char buf[32];
  for (const auto& [w, v] : rows) {
    out << w;
    for (double x : v) {
      std::snprintf(buf, sizeof buf, " %.17g", x);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace cqarank
