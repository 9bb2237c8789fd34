#include "cqarank/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace cqarank {

namespace {

void check_block(std::span<const double> block, std::size_t expected, const char* name) {
  if (block.size() != expected) {
    throw std::invalid_argument(std::string("input block ") + name + " has " + std::to_string(block.size()) +
                                " values, expected " + std::to_string(expected));
  }
}

Vec concat(std::span<const double> a, std::span<const double> b) {
  Vec v(static_cast<Eigen::Index>(a.size() + b.size()));
  std::copy(a.begin(), a.end(), v.data());
  std::copy(b.begin(), b.end(), v.data() + a.size());
  return v;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

void check_shapes(const NetParams& p, Variant expected) {
  if (p.variant != expected) {
    throw std::invalid_argument(expected == Variant::Pairwise ? "pairwise forward called on classification parameters"
                                                              : "classification forward called on pairwise parameters");
  }
}

ForwardCache run(const NetParams& p, std::vector<Vec> group_inputs, std::span<const std::span<const double>> psis) {
  ForwardCache c;
  const auto H = static_cast<Eigen::Index>(p.config.hidden);
  Eigen::Index width = H * static_cast<Eigen::Index>(p.groups.size());
  for (auto psi : psis) width += static_cast<Eigen::Index>(psi.size());
  c.output_input.resize(width);
  Eigen::Index at = 0;
  for (std::size_t g = 0; g < p.groups.size(); ++g) {
    Vec pre = (p.groups[g].weights * group_inputs[g] + p.groups[g].bias).cwiseMax(-kTanhClamp).cwiseMin(kTanhClamp);
    Vec h = pre.array().tanh().matrix();
    c.output_input.segment(at, H) = h;
    at += H;
    c.pre.push_back(std::move(pre));
    c.hidden.push_back(std::move(h));
  }
  for (auto psi : psis) {
    std::copy(psi.begin(), psi.end(), c.output_input.data() + at);
    at += static_cast<Eigen::Index>(psi.size());
  }
  c.group_inputs = std::move(group_inputs);
  c.z = std::clamp(p.out_weights.dot(c.output_input) + p.out_bias, -kSigmoidClamp, kSigmoidClamp);
  c.p = sigmoid(c.z);
  return c;
}

template <typename Blocks, typename Params>
Blocks collect(Params& p) {
  Blocks out;
  for (auto& g : p.groups) {
    out.emplace_back(g.weights.data(), static_cast<std::size_t>(g.weights.size()));
    out.emplace_back(g.bias.data(), static_cast<std::size_t>(g.bias.size()));
  }
  out.emplace_back(p.out_weights.data(), static_cast<std::size_t>(p.out_weights.size()));
  out.emplace_back(&p.out_bias, 1);
  return out;
}

}  // namespace

std::vector<std::span<double>> NetParams::blocks() { return collect<std::vector<std::span<double>>>(*this); }

std::vector<std::span<const double>> NetParams::blocks() const {
  return collect<std::vector<std::span<const double>>>(*this);
}

std::size_t NetParams::size() const {
  std::size_t n = 0;
  for (auto b : blocks()) n += b.size();
  return n;
}

std::size_t group_count(Variant v) { return v == Variant::Pairwise ? 3 : 1; }

std::size_t output_width(Variant v, const NetConfig& c) {
  const std::size_t copies = v == Variant::Pairwise ? 2 : 1;
  return group_count(v) * static_cast<std::size_t>(c.hidden) + copies * c.skip_dim;
}

NetParams init_params(const NetConfig& config, Variant variant) {
  if (config.hidden < 1) throw std::invalid_argument("hidden size must be at least 1");
  NetParams p;
  p.variant = variant;
  p.config = config;
  std::mt19937_64 rng(config.seed);
  const auto H = static_cast<Eigen::Index>(config.hidden);
  const auto in = static_cast<Eigen::Index>(2 * config.input_dim);
  auto fill = [&](double* data, Eigen::Index n, double bound) {
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Eigen::Index k = 0; k < n; ++k) data[k] = u(rng);
  };
  for (std::size_t g = 0; g < group_count(variant); ++g) {
    HiddenGroup group{Mat(H, in), Vec::Zero(H)};
    fill(group.weights.data(), group.weights.size(), std::sqrt(6.0 / static_cast<double>(H + in)));
    p.groups.push_back(std::move(group));
  }
  const auto out = static_cast<Eigen::Index>(output_width(variant, config));
  p.out_weights.resize(out);
  // The output layer is a 1 x out matrix.
  fill(p.out_weights.data(), out, std::sqrt(6.0 / static_cast<double>(1 + out)));
  p.out_bias = 0.0;
  return p;
}

NetParams zeros_like(const NetParams& p) {
  NetParams z = p;
  for (auto b : z.blocks()) std::fill(b.begin(), b.end(), 0.0);
  return z;
}

void add_scaled(NetParams& a, const NetParams& b, double scale) {
  auto da = a.blocks();
  const auto db = b.blocks();
  if (da.size() != db.size()) throw std::invalid_argument("add_scaled: parameter layouts differ");
  for (std::size_t k = 0; k < da.size(); ++k) {
    if (da[k].size() != db[k].size()) throw std::invalid_argument("add_scaled: parameter shapes differ");
    for (std::size_t i = 0; i < da[k].size(); ++i) da[k][i] += scale * db[k][i];
  }
}

ForwardCache forward(const NetParams& p, const PairInput& in) {
  check_shapes(p, Variant::Pairwise);
  const std::size_t D = p.config.input_dim;
  const std::size_t S = p.config.skip_dim;
  check_block(in.x_q, D, "x_q");
  check_block(in.x_c1, D, "x_c1");
  check_block(in.x_c2, D, "x_c2");
  check_block(in.psi1, S, "psi1");
  check_block(in.psi2, S, "psi2");
  std::vector<Vec> inputs;
  inputs.push_back(concat(in.x_q, in.x_c1));
  inputs.push_back(concat(in.x_q, in.x_c2));
  inputs.push_back(concat(in.x_c1, in.x_c2));
  const std::span<const double> psis[] = {in.psi1, in.psi2};
  return run(p, std::move(inputs), psis);
}

ForwardCache forward_classify(const NetParams& p, const ClassifyInput& in) {
  check_shapes(p, Variant::Classification);
  check_block(in.x_q, p.config.input_dim, "x_q");
  check_block(in.x_c, p.config.input_dim, "x_c");
  check_block(in.psi, p.config.skip_dim, "psi");
  std::vector<Vec> inputs;
  inputs.push_back(concat(in.x_q, in.x_c));
  const std::span<const double> psis[] = {in.psi};
  return run(p, std::move(inputs), psis);
}

NetParams backward(const NetParams& p, const ForwardCache& c, int label, double lambda) {
  NetParams g = zeros_like(p);
  const double dz = c.p - static_cast<double>(label);
  g.out_bias = dz;
  g.out_weights = dz * c.output_input + lambda * p.out_weights;
  const auto H = static_cast<Eigen::Index>(p.config.hidden);
  for (std::size_t k = 0; k < p.groups.size(); ++k) {
    const Vec dh = dz * p.out_weights.segment(static_cast<Eigen::Index>(k) * H, H);
    // Clamped units have zero derivative.
    Vec dpre = dh.array() * (1.0 - c.hidden[k].array().square());
    for (Eigen::Index u = 0; u < H; ++u) {
      if (std::abs(c.pre[k][u]) >= kTanhClamp) dpre[u] = 0.0;
    }
    g.groups[k].bias = dpre;
    g.groups[k].weights = dpre * c.group_inputs[k].transpose() + lambda * p.groups[k].weights;
  }
  return g;
}

double loss(const NetParams& p, const ForwardCache& c, int label, double lambda) {
  // -log p = softplus(-z), -log(1 - p) = softplus(z)
  const double ce = label == 1 ? softplus(-c.z) : softplus(c.z);
  double reg = p.out_weights.squaredNorm();
  for (const HiddenGroup& g : p.groups) reg += g.weights.squaredNorm();
  return ce + 0.5 * lambda * reg;
}

Adagrad::Adagrad(const NetParams& shape, double eta, double decay, double epsilon)
    : acc_(zeros_like(shape)), eta_(eta), decay_(decay), epsilon_(epsilon) {}

void Adagrad::step(NetParams& params, const NetParams& grad) {
  const double eta_t = eta_ / (1.0 + decay_ * static_cast<double>(t_));
  auto w = params.blocks();
  auto a = acc_.blocks();
  const auto g = grad.blocks();
  if (w.size() != g.size() || w.size() != a.size()) throw std::invalid_argument("adagrad: parameter layouts differ");
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k].size() != g[k].size()) throw std::invalid_argument("adagrad: parameter shapes differ");
    for (std::size_t i = 0; i < w[k].size(); ++i) {
      const double gi = g[k][i];
      a[k][i] += gi * gi;
      w[k][i] -= eta_t * gi / (std::sqrt(a[k][i]) + epsilon_);
    }
  }
  ++t_;
}

}  // namespace cqarank
