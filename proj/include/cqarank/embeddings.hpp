#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cqarank/textproc.hpp"

namespace cqarank {

/// Word -> vector table loaded from the word2vec text format. Immutable
/// after loading.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::string name, std::size_t dim);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }
  std::size_t duplicate_rows() const { return duplicates_; }

  bool contains(std::string_view word) const;
  std::optional<std::span<const double>> find(std::string_view word) const;

  // Later insertions of the same word replace earlier ones.
  void insert(std::string word, std::span<const double> values);

 private:
  std::string name_;
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
  std::size_t duplicates_ = 0;
};

/// Text format: an optional "<vocab_size> <dim>" header, then one
/// "<word> v1 ... vd" row per line. Rows whose width differs from the
/// declared (or first-row) dimension raise ParseError with the line number.
EmbeddingTable load_table(std::istream& in, std::string name);
EmbeddingTable load_table(const std::string& path, std::string name);

enum class VectorSource { WordAverage, SyntaxSidecar };

struct TextVector {
  std::vector<double> values;
  VectorSource source = VectorSource::WordAverage;
};

/// Mean of the in-vocabulary word vectors; all-OOV input gives zeros.
TextVector embed_text(const TokenSeq& tokens, const EmbeddingTable& table);

/// Cosine similarity, 0 when either vector has zero norm. Throws
/// std::invalid_argument on a length mismatch.
double cosine(std::span<const double> u, std::span<const double> v);
inline double cosine(const TextVector& u, const TextVector& v) { return cosine(u.values, v.values); }

std::size_t oov_count(const TokenSeq& tokens, const EmbeddingTable& table);

/// Precomputed per-text vectors keyed by question/comment id
/// ("<text-id> v1 ... vd" per line).
class SidecarVectors {
 public:
  SidecarVectors() = default;
  explicit SidecarVectors(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  std::size_t duplicate_rows() const { return duplicates_; }

  std::optional<std::span<const double>> find(const std::string& id) const;
  void insert(std::string id, std::vector<double> values);

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::size_t duplicates_ = 0;
};

SidecarVectors load_sidecar_vectors(std::istream& in, std::size_t expected_dim);
// Throws ConfigError when the file cannot be opened.
SidecarVectors load_sidecar_vectors(const std::string& path, std::size_t expected_dim);

}  // namespace cqarank
