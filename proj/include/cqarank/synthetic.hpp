#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cqarank/corpus.hpp"
#include "cqarank/embeddings.hpp"

namespace cqarank {

enum class SyntheticMode {
  // Good comments reuse question words; Bad comments use a disjoint
  // vocabulary.
  Lexical,
  // Good comments reuse the question's word stems in other inflected
  // forms, so only stem-aware matching sees the link. Everything else
  // (lengths, positions, authors, embeddings) is label-independent.
  StemOnly,
};

struct SyntheticConfig {
  SyntheticMode mode = SyntheticMode::Lexical;
  std::size_t train_threads = 200;
  std::size_t test_threads = 50;
  std::size_t comments_per_thread = 10;
  double good_probability = 0.4;
  double good_overlap = 0.7;             // share of Good tokens taken from the question
  double potentially_useful_share = 0.3; // of Bad comments, gold label PotentiallyUseful
  std::size_t embedding_dim = 16;
  std::size_t syntax_dim = 25;
  std::uint64_t seed = 7;
};

using EmbeddingRows = std::vector<std::pair<std::string, std::vector<double>>>;

struct SyntheticCorpus {
  std::vector<Thread> train;
  std::vector<Thread> test;
  EmbeddingRows google;  // random unit vectors over the whole vocabulary
  EmbeddingRows domain;
  EmbeddingRows syntax;  // one vector per question and comment id
};

SyntheticCorpus make_synthetic(const SyntheticConfig& cfg);

EmbeddingTable to_table(const EmbeddingRows& rows, std::string name);
SidecarVectors to_sidecar(const EmbeddingRows& rows);

// Text formats understood by load_table / load_sidecar_vectors.
void write_rows(std::ostream& out, const EmbeddingRows& rows, bool header);

}  // namespace cqarank
