#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cqarank {

using Vec = Eigen::VectorXd;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Variant : std::uint32_t { Pairwise = 1, Classification = 2 };

struct NetConfig {
  int hidden = 3;               // units per hidden group
  std::size_t input_dim = 0;    // D, one text block
  std::size_t skip_dim = 0;     // S, one psi vector
  std::uint64_t seed = 1;

  bool operator==(const NetConfig&) const = default;
};

// Pre-activations are clamped to these bounds before tanh / sigmoid.
// sigmoid(40) rounds to exactly 1.0 in double precision, so the output
// unit uses a tighter bound to keep p strictly inside (0, 1).
inline constexpr double kTanhClamp = 40.0;
inline constexpr double kSigmoidClamp = 36.0;

struct HiddenGroup {
  Mat weights;  // H x 2D
  Vec bias;     // H
};

/// Parameters of either variant. The pairwise net has three groups
/// (question/first comment, question/second comment, first/second comment)
/// and output weights over [h1, h2, h12, psi1, psi2]; the classifier has a
/// single question/comment group and output weights over [h, psi].
struct NetParams {
  Variant variant = Variant::Pairwise;
  NetConfig config;
  std::vector<HiddenGroup> groups;
  Vec out_weights;
  double out_bias = 0.0;

  // Every parameter block in serialisation order: for each group its
  // weights then bias, then the output weights, then the output bias.
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;
  std::size_t size() const;
};

std::size_t group_count(Variant v);
std::size_t output_width(Variant v, const NetConfig& c);

/// Uniform +-sqrt(6/(rows+cols)) weights, zero biases; deterministic in
/// config.seed.
NetParams init_params(const NetConfig& config, Variant variant);
NetParams zeros_like(const NetParams& p);
// a += scale * b
void add_scaled(NetParams& a, const NetParams& b, double scale);

struct PairInput {
  std::span<const double> x_q, x_c1, x_c2;
  std::span<const double> psi1, psi2;
};

struct ClassifyInput {
  std::span<const double> x_q, x_c;
  std::span<const double> psi;
};

struct ForwardCache {
  std::vector<Vec> group_inputs;  // concatenated inputs of each group
  std::vector<Vec> pre;           // clamped pre-activations
  std::vector<Vec> hidden;        // tanh outputs
  Vec output_input;               // [hidden..., psi...]
  double z = 0.0;                 // clamped output pre-activation
  double p = 0.5;
};

// Shape mismatches throw std::invalid_argument naming the block.
ForwardCache forward(const NetParams& p, const PairInput& in);
ForwardCache forward_classify(const NetParams& p, const ClassifyInput& in);

/// Gradient of CE(label, p) + (lambda/2) * sum of squared weights (biases
/// excluded) for the example cached in `cache`.
NetParams backward(const NetParams& p, const ForwardCache& cache, int label, double lambda);

/// The objective whose gradient backward() returns; used for checking.
double loss(const NetParams& p, const ForwardCache& cache, int label, double lambda);

class Adagrad {
 public:
  Adagrad(const NetParams& shape, double eta, double decay, double epsilon = 1e-8);

  // acc += g^2; w -= eta_t * g / (sqrt(acc) + eps), eta_t = eta / (1 + decay * t)
  // where t counts the updates applied before this one.
  void step(NetParams& params, const NetParams& grad);

  std::uint64_t updates() const { return t_; }
  const NetParams& accumulators() const { return acc_; }

 private:
  NetParams acc_;
  double eta_;
  double decay_;
  double epsilon_;
  std::uint64_t t_ = 0;
};

}  // namespace cqarank
