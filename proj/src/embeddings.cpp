#include "cqarank/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cqarank/error.hpp"

namespace cqarank {

namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double to_real(std::string_view s, std::size_t line_no) {
  const std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size() || !std::isfinite(v)) {
    throw ParseError("not a finite real number: '" + copy + "'", line_no);
  }
  return v;
}

bool is_count(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::string name, std::size_t dim)
    : name_(std::move(name)), dim_(dim) {}

bool EmbeddingTable::contains(std::string_view word) const {
  return index_.find(std::string(word)) != index_.end();
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

void EmbeddingTable::insert(std::string word, std::span<const double> values) {
  if (values.size() != dim_) throw std::invalid_argument("embedding row has the wrong dimension");
  auto [it, fresh] = index_.try_emplace(std::move(word), index_.size());
  if (!fresh) ++duplicates_;
  const std::size_t row = it->second;
  if (fresh) data_.resize(data_.size() + dim_);
  std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(row * dim_));
}

EmbeddingTable load_table(std::istream& in, std::string name) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  EmbeddingTable table;
  bool started = false;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = fields(line);
    if (f.empty()) continue;
    if (!started && f.size() == 2 && is_count(f[0]) && is_count(f[1])) {
      dim = std::stoul(std::string(f[1]));
      if (dim == 0) throw ParseError("embedding header declares dimension 0", line_no);
      table = EmbeddingTable(name, dim);
      started = true;
      continue;
    }
    if (f.size() < 2) throw ParseError("embedding row has no values", line_no);
    if (!started) {
      dim = f.size() - 1;
      table = EmbeddingTable(name, dim);
      started = true;
    }
    if (f.size() - 1 != dim) {
      throw ParseError("embedding row has " + std::to_string(f.size() - 1) +
                           " values, expected " + std::to_string(dim),
                       line_no);
    }
    row.clear();
    for (std::size_t k = 1; k < f.size(); ++k) row.push_back(to_real(f[k], line_no));
    table.insert(std::string(f[0]), row);
  }
  if (table.size() == 0) throw InputError("embedding table '" + name + "' is empty");
  return table;
}

EmbeddingTable load_table(const std::string& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding file " + path);
  try {
    return load_table(in, std::move(name));
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

TextVector embed_text(const TokenSeq& tokens, const EmbeddingTable& table) {
  TextVector out;
  out.values.assign(table.dim(), 0.0);
  std::size_t hits = 0;
  for (const std::string& tok : tokens) {
    auto vec = table.find(tok);
    if (!vec) continue;
    ++hits;
    for (std::size_t k = 0; k < vec->size(); ++k) out.values[k] += (*vec)[k];
  }
  if (hits > 0) {
    for (double& v : out.values) v /= static_cast<double>(hits);
  }
  return out;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: vectors differ in length");
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    dot += u[k] * v[k];
    nu += u[k] * u[k];
    nv += v[k] * v[k];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

std::size_t oov_count(const TokenSeq& tokens, const EmbeddingTable& table) {
  std::size_t n = 0;
  for (const std::string& tok : tokens) {
    if (!table.contains(tok)) ++n;
  }
  return n;
}

std::optional<std::span<const double>> SidecarVectors::find(const std::string& id) const {
  auto it = vectors_.find(id);
  if (it == vectors_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

void SidecarVectors::insert(std::string id, std::vector<double> values) {
  if (values.size() != dim_) throw std::invalid_argument("sidecar vector has the wrong dimension");
  auto [it, fresh] = vectors_.insert_or_assign(std::move(id), std::move(values));
  if (!fresh) ++duplicates_;
}

SidecarVectors load_sidecar_vectors(std::istream& in, std::size_t expected_dim) {
  SidecarVectors out(expected_dim);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = fields(line);
    if (f.empty()) continue;
    if (f.size() - 1 != expected_dim) {
      throw ParseError("sidecar vector for id '" + std::string(f[0]) + "' has " +
                           std::to_string(f.size() - 1) + " values, expected " +
                           std::to_string(expected_dim),
                       line_no);
    }
    std::vector<double> values;
    values.reserve(expected_dim);
    for (std::size_t k = 1; k < f.size(); ++k) values.push_back(to_real(f[k], line_no));
    out.insert(std::string(f[0]), std::move(values));
  }
  return out;
}

SidecarVectors load_sidecar_vectors(const std::string& path, std::size_t expected_dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open syntax vector file " + path);
  try {
    return load_sidecar_vectors(in, expected_dim);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace cqarank
