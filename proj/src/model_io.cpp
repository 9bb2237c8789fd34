#include "cqarank/model_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "cqarank/error.hpp"

namespace cqarank {

namespace {

constexpr char kMagic[8] = {'C', 'Q', 'A', 'M', 'O', 'D', 'E', 'L'};
// Upper bound on any single length field; guards against garbage files.
constexpr std::uint64_t kMaxLength = std::uint64_t{1} << 32;

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw InputError(std::string("model file truncated while reading ") + what);
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

void put_reals(std::ostream& out, std::span<const double> values) {
  put<std::uint64_t>(out, values.size());
  for (double v : values) put<double>(out, v);
}

std::vector<double> get_reals(std::istream& in, const char* what) {
  const auto n = get<std::uint64_t>(in, what);
  if (n > kMaxLength) throw InputError(std::string("model file has an implausible length for ") + what);
  std::vector<double> v(n);
  for (double& x : v) x = get<double>(in, what);
  return v;
}

void put_scaler(std::ostream& out, const Scaler& s) {
  put<std::uint64_t>(out, s.schema_id);
  put_reals(out, s.min);
  put_reals(out, s.max);
}

Scaler get_scaler(std::istream& in) {
  Scaler s;
  s.schema_id = get<std::uint64_t>(in, "scaler schema id");
  s.min = get_reals(in, "scaler minima");
  s.max = get_reals(in, "scaler maxima");
  if (s.min.size() != s.max.size()) throw InputError("model file scaler minima and maxima differ in length");
  return s;
}

}  // namespace

void save_model(std::ostream& out, const ModelFile& m) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kModelFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.net.variant));
  put<std::int32_t>(out, m.net.config.hidden);
  put<std::uint64_t>(out, m.net.config.input_dim);
  put<std::uint64_t>(out, m.net.config.skip_dim);
  put<std::uint64_t>(out, m.net.config.seed);
  put<std::uint64_t>(out, m.schema_id);
  put_scaler(out, m.normalizer.features);
  put<std::uint8_t>(out, m.normalizer.inputs ? 1 : 0);
  if (m.normalizer.inputs) put_scaler(out, *m.normalizer.inputs);
  put<std::int32_t>(out, m.epoch);
  put<double>(out, m.validation_score);
  for (auto block : m.net.blocks()) put_reals(out, block);
  if (!out) throw std::runtime_error("failed writing model file");
}

void save_model(const std::string& path, const ModelFile& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot create model file " + path);
  save_model(out, m);
}

ModelFile load_model(std::istream& in, std::uint64_t expected_schema) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw InputError("not a cqarank model file (bad magic)");
  }
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kModelFormatVersion) {
    throw InputError("model format version " + std::to_string(version) + " is not supported (expected " +
                     std::to_string(kModelFormatVersion) + ")");
  }
  const auto variant = get<std::uint32_t>(in, "variant");
  if (variant != static_cast<std::uint32_t>(Variant::Pairwise) &&
      variant != static_cast<std::uint32_t>(Variant::Classification)) {
    throw InputError("model file has unknown variant " + std::to_string(variant));
  }
  NetConfig cfg;
  cfg.hidden = get<std::int32_t>(in, "hidden size");
  cfg.input_dim = get<std::uint64_t>(in, "input dimension");
  cfg.skip_dim = get<std::uint64_t>(in, "skip dimension");
  cfg.seed = get<std::uint64_t>(in, "seed");
  if (cfg.hidden < 1 || cfg.input_dim > kMaxLength || cfg.skip_dim > kMaxLength) {
    throw InputError("model file has an invalid network configuration");
  }

  ModelFile m;
  m.schema_id = get<std::uint64_t>(in, "schema id");
  if (expected_schema != 0 && m.schema_id != expected_schema) {
    throw SchemaError("model was trained with feature schema " + schema_id_hex(m.schema_id) +
                      " but the current configuration has schema " + schema_id_hex(expected_schema));
  }
  m.normalizer.features = get_scaler(in);
  if (get<std::uint8_t>(in, "input scaler flag") != 0) m.normalizer.inputs = get_scaler(in);
  m.epoch = get<std::int32_t>(in, "epoch");
  m.validation_score = get<double>(in, "validation score");

  // Build the expected shapes and fill them block by block.
  m.net = zeros_like(init_params(cfg, static_cast<Variant>(variant)));
  for (auto block : m.net.blocks()) {
    const std::vector<double> values = get_reals(in, "parameter block");
    if (values.size() != block.size()) {
      throw InputError("model parameter block has " + std::to_string(values.size()) + " values, expected " +
                       std::to_string(block.size()));
    }
    std::copy(values.begin(), values.end(), block.begin());
  }
  if (m.normalizer.features.min.size() != cfg.skip_dim) {
    throw InputError("model feature scaler width does not match the skip dimension");
  }
  if (m.normalizer.inputs && m.normalizer.inputs->min.size() != cfg.input_dim) {
    throw InputError("model input scaler width does not match the input dimension");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw InputError("model file has trailing bytes");
  return m;
}

ModelFile load_model(const std::string& path, std::uint64_t expected_schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file " + path);
  try {
    return load_model(in, expected_schema);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace cqarank
