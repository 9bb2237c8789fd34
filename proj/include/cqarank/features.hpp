#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqarank/corpus.hpp"
#include "cqarank/embeddings.hpp"
#include "cqarank/metrics.hpp"
#include "cqarank/textproc.hpp"

namespace cqarank {

enum class FeatureGroup { MTfeats, BLEUcomp, CosineSim, TaskComment, TaskPair, TaskMeta };

std::string_view to_string(FeatureGroup group);

// Widths of the fixed-size groups. CosineSim has one entry per enabled
// text-vector source.
inline constexpr std::size_t kMTfeatsWidth = 6;
inline constexpr std::size_t kBLEUcompWidth = 16;
inline constexpr std::size_t kTaskCommentWidth = 25;
inline constexpr std::size_t kTaskPairWidth = 16;
inline constexpr std::size_t kTaskMetaWidth = 2;

struct FeatureEntry {
  std::string name;
  FeatureGroup group;
};

struct InputBlock {
  std::string name;
  std::size_t dim = 0;
};

/// Ordered layout of the skip-arc features and of the per-text input
/// blocks, plus the options that change feature values. The id hashes all
/// of it, so a model refuses features built under another configuration.
struct FeatureSchema {
  std::vector<FeatureEntry> entries;
  std::vector<InputBlock> input_blocks;
  std::vector<std::string> options;

  std::size_t total_dim() const { return entries.size(); }
  std::size_t input_dim() const;
  std::size_t group_width(FeatureGroup group) const;
  std::uint64_t id() const;
};

std::string schema_id_hex(std::uint64_t id);

struct FeatureVector {
  std::vector<double> values;
  std::uint64_t schema_id = 0;
};

enum class PosTag { Noun, Verb, Adj, Adv, Pron, Other };

/// Coarse POS tags per text id, one tag per token of tokenize(text).
class PosAnnotations {
 public:
  const std::vector<PosTag>* find(const std::string& id) const;
  void insert(std::string id, std::vector<PosTag> tags);
  std::size_t size() const { return tags_.size(); }

 private:
  std::map<std::string, std::vector<PosTag>> tags_;
};

// "<text-id>\t<TAG> <TAG> ..." with tags from NOUN VERB ADJ ADV PRON OTHER.
PosAnnotations load_pos_annotations(std::istream& in);
PosAnnotations load_pos_annotations(const std::string& path);

enum class QuestionText { SubjectAndBody, BodyOnly };

struct FeatureConfig {
  bool mtfeats = true;
  bool bleucomp = true;
  bool cosine = true;
  bool task_comment = true;
  bool task_pair = true;
  bool task_meta = true;
  // Text-vector sources: google-role table, domain-role table, syntax sidecar.
  bool google = true;
  bool domain = true;
  bool syntax = false;
  QuestionText question_text = QuestionText::SubjectAndBody;
  // When set, the question is the MT hypothesis and the comment the reference.
  bool swap_mte_direction = false;
  // Take NIST information weights from FeatureResources::nist_weights.
  bool corpus_nist_weights = false;
  // Minmax-normalise the embedded inputs as well as the skip-arc features.
  bool normalize_inputs = true;

  bool operator==(const FeatureConfig&) const = default;
};

struct FeatureResources {
  const EmbeddingTable* google = nullptr;
  const EmbeddingTable* domain = nullptr;
  const SidecarVectors* syntax = nullptr;
  const PosAnnotations* pos = nullptr;
  const NistStats* nist_weights = nullptr;
};

/// Configuration plus the resources it needs; construction checks that
/// every enabled source is actually supplied.
class FeatureContext {
 public:
  FeatureContext(FeatureConfig config, FeatureResources resources);

  const FeatureConfig& config() const { return config_; }
  const FeatureResources& resources() const { return resources_; }
  const FeatureSchema& schema() const { return schema_; }
  std::uint64_t schema_id() const { return schema_id_; }

  // Table used for OOV counts: google-role, else domain-role, else none.
  const EmbeddingTable* oov_table() const;

  // Text ids looked up in the syntax sidecar but not found (they resolve
  // to zero vectors).
  std::size_t missing_syntax_vectors() const { return missing_syntax_->load(); }
  void note_missing_syntax() const { missing_syntax_->fetch_add(1); }

 private:
  FeatureConfig config_;
  FeatureResources resources_;
  FeatureSchema schema_;
  std::uint64_t schema_id_ = 0;
  std::unique_ptr<std::atomic<std::size_t>> missing_syntax_;
};

FeatureSchema build_schema(const FeatureConfig& config, const FeatureResources& resources);

/// Token-level statistics shared by comment features and q/c ratios.
struct TextProfile {
  TokenSeq tokens;
  std::vector<std::string> sentences;
  std::array<int, 5> pos{};  // noun, verb, adj, adv, pron
  bool pos_present = false;
  int oov = 0;
};

TextProfile profile_text(std::string_view text, const std::string& id, const FeatureContext& ctx);

using NamedValues = std::vector<std::pair<std::string, double>>;

/// The 25 comment-level task features, in schema order.
NamedValues comment_features(const Comment& c, const FeatureContext& ctx);

std::string question_text(const Question& q, QuestionText mode);

/// Skip-arc vector psi(q, c) in schema order.
FeatureVector pair_features(const Question& q, const Comment& c, const FeatureContext& ctx);

/// Concatenated text-vector blocks (google average, domain average, syntax).
FeatureVector embed_input(const TokenSeq& tokens, const std::string& text_id,
                          const FeatureContext& ctx);

/// Per-dimension extrema fitted on training vectors.
struct Scaler {
  std::vector<double> min;
  std::vector<double> max;
  std::uint64_t schema_id = 0;
};

Scaler fit_scaler(std::span<const FeatureVector> vectors);
/// Maps each dimension affinely onto [-1, 1], clamping values outside the
/// fitted range; constant dimensions map to 0.
FeatureVector apply_scaler(const Scaler& s, const FeatureVector& v);

/// One thread turned into network inputs: x_q, x_c for every comment and
/// psi(q, c) for every comment. Labels and positions follow comment order.
struct PreparedThread {
  std::string id;
  std::vector<std::string> comment_ids;
  std::vector<int> positions;
  std::vector<BinaryLabel> labels;
  FeatureVector question_input;
  std::vector<FeatureVector> comment_inputs;
  std::vector<FeatureVector> pair_features;
};

/// Precomputed skip-arc features, as written by `extract-features`.
struct FeatureDump {
  std::uint64_t schema_id = 0;
  std::vector<std::string> names;
  std::map<std::pair<std::string, std::string>, std::vector<double>> rows;
};

void write_feature_dump(std::ostream& out, const FeatureSchema& schema,
                        std::span<const PreparedThread> threads);
FeatureDump read_feature_dump(std::istream& in);
FeatureDump read_feature_dump(const std::string& path);

/// Computes inputs and features for a thread. When `precomputed` is given,
/// psi vectors are taken from it (after checking the schema id) instead of
/// being recomputed.
PreparedThread prepare_thread(const Thread& thread, const FeatureContext& ctx,
                              const FeatureDump* precomputed = nullptr);
std::vector<PreparedThread> prepare_threads(std::span<const Thread> threads,
                                            const FeatureContext& ctx,
                                            const FeatureDump* precomputed = nullptr);

/// Scalers for psi vectors and (optionally) text inputs, fitted on the
/// training split only.
struct Normalizer {
  Scaler features;
  std::optional<Scaler> inputs;
};

Normalizer fit_normalizer(std::span<const PreparedThread> train, bool normalize_inputs);
void apply_normalizer(const Normalizer& n, PreparedThread& thread);
void apply_normalizer(const Normalizer& n, std::vector<PreparedThread>& threads);

}  // namespace cqarank
