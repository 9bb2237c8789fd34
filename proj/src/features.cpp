#include "cqarank/features.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cqarank/error.hpp"

namespace cqarank {

namespace {

constexpr std::array<const char*, 5> kPosNames = {"noun", "verb", "adj", "adv", "pron"};

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void add(FeatureSchema& s, FeatureGroup g, std::string name) {
  s.entries.push_back({std::move(name), g});
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

// Ratio q/c with an indicator for a zero denominator.
void push_ratio(std::vector<double>& out, double q, double c) {
  if (c == 0.0) {
    out.push_back(0.0);
    out.push_back(1.0);
  } else {
    out.push_back(q / c);
    out.push_back(0.0);
  }
}

void append_block(std::vector<double>& out, const std::vector<double>& block) {
  out.insert(out.end(), block.begin(), block.end());
}

std::vector<double> syntax_vector(const std::string& id, const FeatureContext& ctx) {
  const SidecarVectors& side = *ctx.resources().syntax;
  if (auto v = side.find(id)) return {v->begin(), v->end()};
  ctx.note_missing_syntax();
  return std::vector<double>(side.dim(), 0.0);
}

NamedValues comment_features_from(const TextProfile& p, std::string_view raw) {
  NamedValues f;
  f.reserve(kTaskCommentWidth);
  const auto tokens = static_cast<double>(p.tokens.size());
  const auto sentences = static_cast<double>(p.sentences.size());
  f.emplace_back("comment.url", count_pattern(raw, Pattern::Url));
  f.emplace_back("comment.image", count_pattern(raw, Pattern::Image));
  f.emplace_back("comment.email", count_pattern(raw, Pattern::Email));
  f.emplace_back("comment.phone", count_pattern(raw, Pattern::Phone));
  f.emplace_back("comment.thank", count_pattern(raw, Pattern::ThankSubstring));
  f.emplace_back("comment.tokens", tokens);
  f.emplace_back("comment.sentences", sentences);
  f.emplace_back("comment.tokens_per_sentence", sentences > 0 ? tokens / sentences : 0.0);
  const std::set<std::string> types(p.tokens.begin(), p.tokens.end());
  f.emplace_back("comment.type_token_ratio", tokens > 0 ? static_cast<double>(types.size()) / tokens : 0.0);
  for (std::size_t k = 0; k < kPosNames.size(); ++k) {
    f.emplace_back(std::string("comment.pos_") + kPosNames[k], p.pos[k]);
  }
  f.emplace_back("comment.pos_present", p.pos_present ? 1.0 : 0.0);
  f.emplace_back("comment.smiley_positive", count_pattern(raw, Pattern::PositiveSmiley));
  f.emplace_back("comment.smiley_negative", count_pattern(raw, Pattern::NegativeSmiley));
  for (int k = 1; k <= 3; ++k) {
    f.emplace_back("comment.exclamation_run" + std::to_string(k), count_pattern(raw, Pattern::ExclamationRun, k));
  }
  for (int k = 1; k <= 3; ++k) {
    f.emplace_back("comment.interrogation_run" + std::to_string(k), count_pattern(raw, Pattern::InterrogationRun, k));
  }
  const auto interrogative = std::count_if(p.sentences.begin(), p.sentences.end(),
                                           [](const std::string& s) { return is_interrogative(s); });
  f.emplace_back("comment.interrogative_sentences", static_cast<double>(interrogative));
  f.emplace_back("comment.oov", p.oov);
  return f;
}

// Everything about the question that every comment in the thread reuses.
struct QuestionSide {
  std::string text;
  TextProfile profile;
  std::vector<std::vector<double>> vectors;  // one per enabled source, schema order
};

std::vector<std::vector<double>> text_vectors(const TokenSeq& tokens, const std::string& id,
                                              const FeatureContext& ctx) {
  std::vector<std::vector<double>> out;
  const FeatureConfig& cfg = ctx.config();
  const FeatureResources& res = ctx.resources();
  if (cfg.google) out.push_back(embed_text(tokens, *res.google).values);
  if (cfg.domain) out.push_back(embed_text(tokens, *res.domain).values);
  if (cfg.syntax) out.push_back(syntax_vector(id, ctx));
  return out;
}

QuestionSide question_side(const Question& q, const FeatureContext& ctx) {
  QuestionSide side;
  side.text = question_text(q, ctx.config().question_text);
  side.profile = profile_text(side.text, q.id, ctx);
  side.vectors = text_vectors(side.profile.tokens, q.id, ctx);
  return side;
}

FeatureVector pair_features_from(const QuestionSide& qs, const Question& q, const Comment& c,
                                 const TextProfile& cp,
                                 const std::vector<std::vector<double>>& cvectors,
                                 const FeatureContext& ctx) {
  const FeatureConfig& cfg = ctx.config();
  FeatureVector out;
  out.schema_id = ctx.schema_id();
  std::vector<double>& v = out.values;
  v.reserve(ctx.schema().total_dim());

  const TokenSeq& hyp = cfg.swap_mte_direction ? qs.profile.tokens : cp.tokens;
  const TokenSeq& ref = cfg.swap_mte_direction ? cp.tokens : qs.profile.tokens;
  if (cfg.mtfeats || cfg.bleucomp) {
    const BleuComponents b = bleu_components(hyp, ref);
    if (cfg.mtfeats) {
      const NistStats* weights = cfg.corpus_nist_weights ? ctx.resources().nist_weights : nullptr;
      v.push_back(b.bleu);
      v.push_back(weights != nullptr ? nist(hyp, ref, *weights) : nist(hyp, ref));
      v.push_back(ter(hyp, ref, true));
      v.push_back(meteor_lite(hyp, ref));
      const UnigramPR pr = unigram_pr(hyp, ref);
      v.push_back(pr.precision);
      v.push_back(pr.recall);
    }
    if (cfg.bleucomp) {
      for (double p : b.precisions) v.push_back(p);
      for (int m : b.matches) v.push_back(m);
      for (int t : b.totals) v.push_back(t);
      v.push_back(b.hyp_len);
      v.push_back(b.ref_len);
      v.push_back(b.length_ratio);
      v.push_back(b.brevity_penalty);
    }
  }
  if (cfg.cosine) {
    for (std::size_t k = 0; k < qs.vectors.size(); ++k) v.push_back(cosine(qs.vectors[k], cvectors[k]));
  }
  if (cfg.task_comment) {
    for (const auto& [name, value] : comment_features_from(cp, c.body)) v.push_back(value);
  }
  if (cfg.task_pair) {
    const TextProfile& qp = qs.profile;
    push_ratio(v, static_cast<double>(qp.sentences.size()), static_cast<double>(cp.sentences.size()));
    push_ratio(v, static_cast<double>(qp.tokens.size()), static_cast<double>(cp.tokens.size()));
    for (std::size_t k = 0; k < 5; ++k) push_ratio(v, qp.pos[k], cp.pos[k]);
    push_ratio(v, qp.oov, cp.oov);
  }
  if (cfg.task_meta) {
    v.push_back(!q.author_id.empty() && q.author_id == c.author_id ? 1.0 : 0.0);
    v.push_back(1.0 / static_cast<double>(std::max(c.position, 1)));
  }
  return out;
}

FeatureVector concat_input(const std::vector<std::vector<double>>& blocks, std::uint64_t schema_id) {
  FeatureVector out;
  out.schema_id = schema_id;
  for (const auto& b : blocks) append_block(out.values, b);
  return out;
}

PosTag parse_tag(std::string_view s) {
  if (s == "NOUN") return PosTag::Noun;
  if (s == "VERB") return PosTag::Verb;
  if (s == "ADJ") return PosTag::Adj;
  if (s == "ADV") return PosTag::Adv;
  if (s == "PRON") return PosTag::Pron;
  if (s == "OTHER") return PosTag::Other;
  throw InputError("unknown POS tag '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::MTfeats: return "MTfeats";
    case FeatureGroup::BLEUcomp: return "BLEUcomp";
    case FeatureGroup::CosineSim: return "CosineSim";
    case FeatureGroup::TaskComment: return "TaskComment";
    case FeatureGroup::TaskPair: return "TaskPair";
    case FeatureGroup::TaskMeta: return "TaskMeta";
  }
  return "?";
}

std::size_t FeatureSchema::input_dim() const {
  std::size_t d = 0;
  for (const InputBlock& b : input_blocks) d += b.dim;
  return d;
}

std::size_t FeatureSchema::group_width(FeatureGroup group) const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                [&](const FeatureEntry& e) { return e.group == group; }));
}

std::uint64_t FeatureSchema::id() const {
  std::string canon = "cqarank-schema-v1\n";
  for (const FeatureEntry& e : entries) {
    canon += std::string(to_string(e.group)) + ":" + e.name + "\n";
  }
  for (const InputBlock& b : input_blocks) canon += "input:" + b.name + ":" + std::to_string(b.dim) + "\n";
  for (const std::string& o : options) canon += "option:" + o + "\n";
  return fnv1a(canon);
}

std::string schema_id_hex(std::uint64_t id) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(id));
  return buf;
}

const std::vector<PosTag>* PosAnnotations::find(const std::string& id) const {
  auto it = tags_.find(id);
  return it == tags_.end() ? nullptr : &it->second;
}

void PosAnnotations::insert(std::string id, std::vector<PosTag> tags) {
  tags_.insert_or_assign(std::move(id), std::move(tags));
}

PosAnnotations load_pos_annotations(std::istream& in) {
  PosAnnotations out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError("expected '<text-id>\\t<tags>'", line_no);
    std::vector<PosTag> tags;
    std::istringstream ts(line.substr(tab + 1));
    std::string tag;
    try {
      while (ts >> tag) tags.push_back(parse_tag(tag));
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no);
    }
    out.insert(line.substr(0, tab), std::move(tags));
  }
  return out;
}

PosAnnotations load_pos_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open POS annotation file " + path);
  try {
    return load_pos_annotations(in);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

FeatureSchema build_schema(const FeatureConfig& cfg, const FeatureResources& res) {
  FeatureSchema s;
  if (cfg.mtfeats) {
    for (const char* n : {"mt.bleu", "mt.nist", "mt.ter", "mt.meteor_lite", "mt.unigram_precision", "mt.unigram_recall"}) {
      add(s, FeatureGroup::MTfeats, n);
    }
  }
  if (cfg.bleucomp) {
    for (const char* kind : {"precision", "matches", "total"}) {
      for (int n = 1; n <= 4; ++n) add(s, FeatureGroup::BLEUcomp, std::string("bleu.") + kind + std::to_string(n));
    }
    for (const char* n : {"bleu.hyp_len", "bleu.ref_len", "bleu.length_ratio", "bleu.brevity_penalty"}) {
      add(s, FeatureGroup::BLEUcomp, n);
    }
  }
  if (cfg.cosine) {
    if (cfg.google) add(s, FeatureGroup::CosineSim, "cos.google");
    if (cfg.domain) add(s, FeatureGroup::CosineSim, "cos.domain");
    if (cfg.syntax) add(s, FeatureGroup::CosineSim, "cos.syntax");
  }
  if (cfg.task_comment) {
    // Names come from the extractor so the two cannot drift apart.
    const TextProfile empty;
    for (const auto& [name, value] : comment_features_from(empty, "")) add(s, FeatureGroup::TaskComment, name);
  }
  if (cfg.task_pair) {
    std::vector<std::string> counts = {"sentences", "tokens"};
    for (const char* p : kPosNames) counts.push_back(std::string("pos_") + p);
    counts.push_back("oov");
    for (const std::string& c : counts) {
      add(s, FeatureGroup::TaskPair, "pair.ratio_" + c);
      add(s, FeatureGroup::TaskPair, "pair.ratio_" + c + "_zero_denominator");
    }
  }
  if (cfg.task_meta) {
    add(s, FeatureGroup::TaskMeta, "meta.same_author");
    add(s, FeatureGroup::TaskMeta, "meta.reciprocal_rank");
  }
  if (cfg.google && res.google) s.input_blocks.push_back({"google", res.google->dim()});
  if (cfg.domain && res.domain) s.input_blocks.push_back({"domain", res.domain->dim()});
  if (cfg.syntax && res.syntax) s.input_blocks.push_back({"syntax", res.syntax->dim()});
  s.options.push_back(cfg.question_text == QuestionText::BodyOnly ? "question_text=body" : "question_text=subject_body");
  s.options.push_back(cfg.swap_mte_direction ? "mte_hypothesis=question" : "mte_hypothesis=comment");
  s.options.push_back(cfg.corpus_nist_weights ? "nist_weights=corpus" : "nist_weights=pair");
  s.options.push_back(cfg.normalize_inputs ? "normalize_inputs=1" : "normalize_inputs=0");
  return s;
}

FeatureContext::FeatureContext(FeatureConfig config, FeatureResources resources)
    : config_(config), resources_(resources),
      missing_syntax_(std::make_unique<std::atomic<std::size_t>>(0)) {
  if (config_.google && resources_.google == nullptr) {
    throw ConfigError("google-role embeddings enabled but no table supplied");
  }
  if (config_.domain && resources_.domain == nullptr) {
    throw ConfigError("domain-role embeddings enabled but no table supplied");
  }
  if (config_.syntax && resources_.syntax == nullptr) {
    throw ConfigError("syntax vectors enabled but no sidecar file supplied");
  }
  if (config_.corpus_nist_weights && resources_.nist_weights == nullptr) {
    throw ConfigError("corpus NIST weighting enabled but no reference statistics supplied");
  }
  schema_ = build_schema(config_, resources_);
  schema_id_ = schema_.id();
}

const EmbeddingTable* FeatureContext::oov_table() const {
  if (config_.google && resources_.google != nullptr) return resources_.google;
  if (config_.domain && resources_.domain != nullptr) return resources_.domain;
  return nullptr;
}

TextProfile profile_text(std::string_view text, const std::string& id, const FeatureContext& ctx) {
  TextProfile p;
  p.tokens = tokenize(text);
  p.sentences = split_sentences(text);
  if (const PosAnnotations* pos = ctx.resources().pos) {
    if (const std::vector<PosTag>* tags = pos->find(id)) {
      if (tags->size() != p.tokens.size()) {
        throw InputError("POS annotation for " + id + " has " + std::to_string(tags->size()) +
                         " tags but the text has " + std::to_string(p.tokens.size()) + " tokens");
      }
      p.pos_present = true;
      for (PosTag t : *tags) {
        if (t != PosTag::Other) ++p.pos[static_cast<std::size_t>(t)];
      }
    }
  }
  if (const EmbeddingTable* table = ctx.oov_table()) p.oov = static_cast<int>(oov_count(p.tokens, *table));
  return p;
}

NamedValues comment_features(const Comment& c, const FeatureContext& ctx) {
  return comment_features_from(profile_text(c.body, c.id, ctx), c.body);
}

std::string question_text(const Question& q, QuestionText mode) {
  if (mode == QuestionText::BodyOnly) return q.body;
  if (q.subject.empty()) return q.body;
  if (q.body.empty()) return q.subject;
  return q.subject + " " + q.body;
}

FeatureVector pair_features(const Question& q, const Comment& c, const FeatureContext& ctx) {
  const QuestionSide qs = question_side(q, ctx);
  const TextProfile cp = profile_text(c.body, c.id, ctx);
  return pair_features_from(qs, q, c, cp, text_vectors(cp.tokens, c.id, ctx), ctx);
}

FeatureVector embed_input(const TokenSeq& tokens, const std::string& text_id, const FeatureContext& ctx) {
  return concat_input(text_vectors(tokens, text_id, ctx), ctx.schema_id());
}

Scaler fit_scaler(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) throw InputError("cannot fit a scaler on an empty set of vectors");
  Scaler s;
  s.schema_id = vectors.front().schema_id;
  const std::size_t dim = vectors.front().values.size();
  s.min = vectors.front().values;
  s.max = vectors.front().values;
  for (const FeatureVector& v : vectors) {
    if (v.schema_id != s.schema_id || v.values.size() != dim) {
      throw SchemaError("fit_scaler: vectors do not share one schema");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      s.min[k] = std::min(s.min[k], v.values[k]);
      s.max[k] = std::max(s.max[k], v.values[k]);
    }
  }
  return s;
}

FeatureVector apply_scaler(const Scaler& s, const FeatureVector& v) {
  if (v.schema_id != s.schema_id || v.values.size() != s.min.size()) {
    throw SchemaError("scaler fitted on schema " + schema_id_hex(s.schema_id) + " (" +
                      std::to_string(s.min.size()) + " dims) applied to schema " +
                      schema_id_hex(v.schema_id) + " (" + std::to_string(v.values.size()) + " dims)");
  }
  FeatureVector out;
  out.schema_id = v.schema_id;
  out.values.resize(v.values.size());
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    const double lo = s.min[k];
    const double hi = s.max[k];
    out.values[k] = hi > lo ? std::clamp(2.0 * (v.values[k] - lo) / (hi - lo) - 1.0, -1.0, 1.0) : 0.0;
  }
  return out;
}

void write_feature_dump(std::ostream& out, const FeatureSchema& schema,
                        std::span<const PreparedThread> threads) {
  out << "#schema\t" << schema_id_hex(schema.id());
  for (const FeatureEntry& e : schema.entries) out << '\t' << e.name;
  out << '\n';
  for (const PreparedThread& t : threads) {
    for (std::size_t i = 0; i < t.comment_ids.size(); ++i) {
      out << t.id << '\t' << t.comment_ids[i];
      for (double v : t.pair_features[i].values) out << '\t' << format_real(v);
      out << '\n';
    }
  }
}

FeatureDump read_feature_dump(std::istream& in) {
  FeatureDump dump;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (!header) {
      if (f.size() < 2 || f[0] != "#schema") throw ParseError("feature dump must start with a #schema header", line_no);
      dump.schema_id = std::stoull(std::string(f[1]), nullptr, 16);
      for (std::size_t k = 2; k < f.size(); ++k) dump.names.emplace_back(f[k]);
      header = true;
      continue;
    }
    if (f.size() != dump.names.size() + 2) {
      throw ParseError("expected " + std::to_string(dump.names.size()) + " feature values, got " +
                           std::to_string(f.size() < 2 ? 0 : f.size() - 2),
                       line_no);
    }
    std::vector<double> values;
    values.reserve(dump.names.size());
    for (std::size_t k = 2; k < f.size(); ++k) {
      const std::string s(f[k]);
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end != s.c_str() + s.size()) throw ParseError("not a number: '" + s + "'", line_no);
      values.push_back(v);
    }
    dump.rows[{std::string(f[0]), std::string(f[1])}] = std::move(values);
  }
  if (!header) throw ParseError("feature dump is empty", line_no);
  return dump;
}

FeatureDump read_feature_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open feature dump " + path);
  try {
    return read_feature_dump(in);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

PreparedThread prepare_thread(const Thread& thread, const FeatureContext& ctx, const FeatureDump* precomputed) {
  if (precomputed != nullptr && precomputed->schema_id != ctx.schema_id()) {
    throw SchemaError("feature dump schema " + schema_id_hex(precomputed->schema_id) +
                      " does not match the configured schema " + schema_id_hex(ctx.schema_id()));
  }
  PreparedThread out;
  out.id = thread.id();
  const QuestionSide qs = question_side(thread.question, ctx);
  out.question_input = concat_input(qs.vectors, ctx.schema_id());
  for (const Comment& c : thread.comments) {
    out.comment_ids.push_back(c.id);
    out.positions.push_back(c.position);
    out.labels.push_back(c.binary_label());
    const TextProfile cp = profile_text(c.body, c.id, ctx);
    auto cvectors = text_vectors(cp.tokens, c.id, ctx);
    if (precomputed != nullptr) {
      auto it = precomputed->rows.find({thread.id(), c.id});
      if (it == precomputed->rows.end()) {
        throw InputError("feature dump has no row for " + thread.id() + "/" + c.id);
      }
      out.pair_features.push_back({it->second, ctx.schema_id()});
    } else {
      out.pair_features.push_back(pair_features_from(qs, thread.question, c, cp, cvectors, ctx));
    }
    out.comment_inputs.push_back(concat_input(cvectors, ctx.schema_id()));
  }
  return out;
}

std::vector<PreparedThread> prepare_threads(std::span<const Thread> threads, const FeatureContext& ctx,
                                            const FeatureDump* precomputed) {
  std::vector<PreparedThread> out;
  out.reserve(threads.size());
  for (const Thread& t : threads) out.push_back(prepare_thread(t, ctx, precomputed));
  return out;
}

Normalizer fit_normalizer(std::span<const PreparedThread> train, bool normalize_inputs) {
  std::vector<FeatureVector> psi;
  std::vector<FeatureVector> inputs;
  for (const PreparedThread& t : train) {
    psi.insert(psi.end(), t.pair_features.begin(), t.pair_features.end());
    if (normalize_inputs) {
      inputs.push_back(t.question_input);
      inputs.insert(inputs.end(), t.comment_inputs.begin(), t.comment_inputs.end());
    }
  }
  Normalizer n;
  n.features = fit_scaler(psi);
  if (normalize_inputs) n.inputs = fit_scaler(inputs);
  return n;
}

void apply_normalizer(const Normalizer& n, PreparedThread& t) {
  for (FeatureVector& v : t.pair_features) v = apply_scaler(n.features, v);
  if (n.inputs) {
    t.question_input = apply_scaler(*n.inputs, t.question_input);
    for (FeatureVector& v : t.comment_inputs) v = apply_scaler(*n.inputs, v);
  }
}

void apply_normalizer(const Normalizer& n, std::vector<PreparedThread>& threads) {
  for (PreparedThread& t : threads) apply_normalizer(n, t);
}

}  // namespace cqarank
