#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cqarank/features.hpp"
#include "cqarank/network.hpp"

namespace cqarank {

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct ModelFile {
  NetParams net;
  std::uint64_t schema_id = 0;
  Normalizer normalizer;
  int epoch = 0;                   // 1-based epoch the parameters come from
  double validation_score = 0.0;
};

// Layout, all integers and reals little-endian:
//   "CQAMODEL" u32 version u32 variant
//   i32 hidden u64 input_dim u64 skip_dim u64 seed
//   u64 schema_id
//   scaler(features) u8 has_input_scaler [scaler(inputs)]
//   i32 epoch f64 validation_score
//   parameter blocks in NetParams::blocks() order, each prefixed by u64 length
// where scaler = u64 schema_id u64 dim f64[dim] min f64[dim] max.
void save_model(std::ostream& out, const ModelFile& m);
void save_model(const std::string& path, const ModelFile& m);

/// Throws InputError on a bad magic, version, truncation or shape
/// inconsistency. When `expected_schema` is nonzero and differs from the
/// stored hash, throws SchemaError naming both.
ModelFile load_model(std::istream& in, std::uint64_t expected_schema = 0);
ModelFile load_model(const std::string& path, std::uint64_t expected_schema = 0);

}  // namespace cqarank
