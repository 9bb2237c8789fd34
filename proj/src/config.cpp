#include "cqarank/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>

#include "cqarank/error.hpp"

namespace cqarank {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::logic_error&) {
  }
  throw ConfigError(key + ": expected an integer, got '" + v + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const unsigned long long x = std::stoull(v, &used);
      if (used == v.size()) return x;
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::logic_error&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

std::string real_text(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Option {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

Option path_option(std::string key, std::string RunPaths::*member) {
  return {key, [member](RunConfig& c, const std::string& v) { c.paths.*member = v; },
          [member](const RunConfig& c) { return c.paths.*member; }};
}

Option flag_option(std::string key, bool FeatureConfig::*member) {
  return {key, [key, member](RunConfig& c, const std::string& v) { c.features.*member = to_bool(key, v); },
          [member](const RunConfig& c) { return std::string(c.features.*member ? "true" : "false"); }};
}

const std::vector<Option>& options() {
  static const std::vector<Option> table = [] {
    std::vector<Option> t;
    t.push_back(path_option("paths.train", &RunPaths::train));
    t.push_back(path_option("paths.validation", &RunPaths::validation));
    t.push_back(path_option("paths.test", &RunPaths::test));
    t.push_back(path_option("paths.train_features", &RunPaths::train_features));
    t.push_back(path_option("paths.google_embeddings", &RunPaths::google_embeddings));
    t.push_back(path_option("paths.domain_embeddings", &RunPaths::domain_embeddings));
    t.push_back(path_option("paths.syntax_vectors", &RunPaths::syntax_vectors));
    t.push_back(path_option("paths.pos_annotations", &RunPaths::pos_annotations));
    t.push_back(path_option("paths.model", &RunPaths::model));
    t.push_back(path_option("paths.output_dir", &RunPaths::output_dir));

    t.push_back(flag_option("features.mtfeats", &FeatureConfig::mtfeats));
    t.push_back(flag_option("features.bleucomp", &FeatureConfig::bleucomp));
    t.push_back(flag_option("features.cosine", &FeatureConfig::cosine));
    t.push_back(flag_option("features.task_comment", &FeatureConfig::task_comment));
    t.push_back(flag_option("features.task_pair", &FeatureConfig::task_pair));
    t.push_back(flag_option("features.task_meta", &FeatureConfig::task_meta));
    t.push_back(flag_option("features.google", &FeatureConfig::google));
    t.push_back(flag_option("features.domain", &FeatureConfig::domain));
    t.push_back(flag_option("features.syntax", &FeatureConfig::syntax));
    t.push_back(flag_option("features.swap_mte_direction", &FeatureConfig::swap_mte_direction));
    t.push_back(flag_option("features.corpus_nist_weights", &FeatureConfig::corpus_nist_weights));
    t.push_back(flag_option("features.normalize_inputs", &FeatureConfig::normalize_inputs));
    t.push_back({"features.question_text",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "subject_body") c.features.question_text = QuestionText::SubjectAndBody;
                   else if (v == "body") c.features.question_text = QuestionText::BodyOnly;
                   else throw ConfigError("features.question_text: expected subject_body or body, got '" + v + "'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.features.question_text == QuestionText::BodyOnly ? "body" : "subject_body");
                 }});
    t.push_back({"features.syntax_dim",
                 [](RunConfig& c, const std::string& v) {
                   const auto d = to_int("features.syntax_dim", v);
                   if (d < 1) throw ConfigError("features.syntax_dim must be positive");
                   c.syntax_dim = static_cast<std::size_t>(d);
                 },
                 [](const RunConfig& c) { return std::to_string(c.syntax_dim); }});

    t.push_back({"train.epochs",
                 [](RunConfig& c, const std::string& v) { c.train.epochs = static_cast<int>(to_int("train.epochs", v)); },
                 [](const RunConfig& c) { return std::to_string(c.train.epochs); }});
    t.push_back({"train.minibatch",
                 [](RunConfig& c, const std::string& v) {
                   c.train.minibatch = static_cast<int>(to_int("train.minibatch", v));
                 },
                 [](const RunConfig& c) { return std::to_string(c.train.minibatch); }});
    t.push_back({"train.hidden",
                 [](RunConfig& c, const std::string& v) { c.train.hidden = static_cast<int>(to_int("train.hidden", v)); },
                 [](const RunConfig& c) { return std::to_string(c.train.hidden); }});
    t.push_back({"train.lambda", [](RunConfig& c, const std::string& v) { c.train.lambda = to_real("train.lambda", v); },
                 [](const RunConfig& c) { return real_text(c.train.lambda); }});
    t.push_back({"train.decay", [](RunConfig& c, const std::string& v) { c.train.decay = to_real("train.decay", v); },
                 [](const RunConfig& c) { return real_text(c.train.decay); }});
    t.push_back({"train.eta", [](RunConfig& c, const std::string& v) { c.train.eta = to_real("train.eta", v); },
                 [](const RunConfig& c) { return real_text(c.train.eta); }});
    t.push_back({"train.seed", [](RunConfig& c, const std::string& v) { c.train.seed = to_u64("train.seed", v); },
                 [](const RunConfig& c) { return std::to_string(c.train.seed); }});
    t.push_back({"train.shuffle", [](RunConfig& c, const std::string& v) { c.train.shuffle = to_bool("train.shuffle", v); },
                 [](const RunConfig& c) { return std::string(c.train.shuffle ? "true" : "false"); }});
    t.push_back({"train.variant",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "pairwise") c.train.variant = Variant::Pairwise;
                   else if (v == "classification") c.train.variant = Variant::Classification;
                   else throw ConfigError("train.variant: expected pairwise or classification, got '" + v + "'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.train.variant == Variant::Pairwise ? "pairwise" : "classification");
                 }});
    t.push_back({"train.selection",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "accuracy") c.train.selection = Selection::PairAccuracy;
                   else if (v == "kendall") c.train.selection = Selection::KendallTau;
                   else throw ConfigError("train.selection: expected accuracy or kendall, got '" + v + "'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.train.selection == Selection::PairAccuracy ? "accuracy" : "kendall");
                 }});

    t.push_back({"rank.accumulation",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "antisymmetric") c.accumulation = Accumulation::Antisymmetric;
                   else if (v == "sum") c.accumulation = Accumulation::PlainSum;
                   else throw ConfigError("rank.accumulation: expected antisymmetric or sum, got '" + v + "'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.accumulation == Accumulation::Antisymmetric ? "antisymmetric" : "sum");
                 }});
    t.push_back({"rank.random_seed",
                 [](RunConfig& c, const std::string& v) { c.random_seed = to_u64("rank.random_seed", v); },
                 [](const RunConfig& c) { return std::to_string(c.random_seed); }});
    t.push_back({"eval.cutoff",
                 [](RunConfig& c, const std::string& v) {
                   const auto k = to_int("eval.cutoff", v);
                   if (k < 1) throw ConfigError("eval.cutoff must be at least 1");
                   c.cutoff = static_cast<int>(k);
                 },
                 [](const RunConfig& c) { return std::to_string(c.cutoff); }});
    return t;
  }();
  return table;
}

void require_file(const std::string& path, const std::string& key) {
  if (path.empty()) throw ConfigError(key + " is required but not set");
  if (!std::filesystem::is_regular_file(path)) throw ConfigError(key + ": file not found: " + path);
}

}  // namespace

void apply_preset(RunConfig& cfg, const std::string& name) {
  if (name == "full") {
    cfg.features = FeatureConfig{};
  } else if (name == "mte_vanilla") {
    cfg.features.task_comment = false;
    cfg.features.task_pair = false;
    cfg.features.task_meta = false;
    cfg.features.domain = false;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected full or mte_vanilla)");
  }
}

void set_option(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "preset") {
    apply_preset(cfg, value);
    return;
  }
  for (const Option& o : options()) {
    if (o.key == key) {
      o.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + key + "'");
}

void read_config(std::istream& in, RunConfig& cfg) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_option(cfg, trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  RunConfig cfg;
  try {
    read_config(in, cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  // Relative paths in the file are relative to the file.
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (std::string* p : {&cfg.paths.train, &cfg.paths.validation, &cfg.paths.test, &cfg.paths.train_features,
                         &cfg.paths.google_embeddings, &cfg.paths.domain_embeddings, &cfg.paths.syntax_vectors,
                         &cfg.paths.pos_annotations, &cfg.paths.model, &cfg.paths.output_dir}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).lexically_normal().string();
  }
  return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  set_option(cfg, trim(std::string_view(assignment).substr(0, eq)), trim(std::string_view(assignment).substr(eq + 1)));
}

std::string dump_config(const RunConfig& cfg) {
  std::string out;
  for (const Option& o : options()) out += o.key + " = " + o.get(cfg) + "\n";
  return out;
}

void validate(const RunConfig& cfg, unsigned needs) {
  const FeatureConfig& f = cfg.features;
  if (needs & static_cast<unsigned>(Need::Train)) require_file(cfg.paths.train, "paths.train");
  if (needs & static_cast<unsigned>(Need::Test)) require_file(cfg.paths.test, "paths.test");
  if (needs & static_cast<unsigned>(Need::Model)) {
    if (cfg.paths.model.empty()) throw ConfigError("paths.model is required but not set");
  }
  if (!cfg.paths.validation.empty()) require_file(cfg.paths.validation, "paths.validation");
  if (!cfg.paths.train_features.empty()) require_file(cfg.paths.train_features, "paths.train_features");
  if (f.google) require_file(cfg.paths.google_embeddings, "paths.google_embeddings (features.google is on)");
  if (f.domain) require_file(cfg.paths.domain_embeddings, "paths.domain_embeddings (features.domain is on)");
  if (f.syntax) require_file(cfg.paths.syntax_vectors, "paths.syntax_vectors (features.syntax is on)");
  if (!cfg.paths.pos_annotations.empty()) require_file(cfg.paths.pos_annotations, "paths.pos_annotations");
  // Corpus NIST weights come from the training questions.
  if (f.corpus_nist_weights) require_file(cfg.paths.train, "paths.train (features.corpus_nist_weights is on)");
  const TrainConfig& t = cfg.train;
  if (t.epochs < 1 || t.minibatch < 1 || t.hidden < 1) {
    throw ConfigError("train.epochs, train.minibatch and train.hidden must be at least 1");
  }
  if (!(t.eta > 0.0) || t.lambda < 0.0 || t.decay < 0.0) {
    throw ConfigError("train.eta must be positive; train.lambda and train.decay non-negative");
  }
}

}  // namespace cqarank
