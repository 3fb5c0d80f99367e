#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/core/rng.hpp"

namespace bebold {

using EncodedObs = std::vector<double>;

/// Fully connected layer, weights stored row-major as [out][in].
struct DenseLayer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double& w(std::size_t o, std::size_t i) { return weights[o * in + i]; }
  double w(std::size_t o, std::size_t i) const { return weights[o * in + i]; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Per-layer inputs and pre-activations from a forward pass.
struct ForwardTrace {
  std::vector<std::vector<double>> inputs;  // inputs[l] feeds layer l
  std::vector<std::vector<double>> pre;     // pre[l] = W_l inputs[l] + b_l
  std::vector<double> output;
};

/// Multilayer perceptron: rectifier on hidden layers, identity on the output.
class Mlp {
 public:
  Mlp() = default;

  /// `widths` = {input_dim, hidden..., output_dim}. Weights are drawn from
  /// N(0, 2 / fan_in), biases start at zero.
  Mlp(std::span<const std::size_t> widths, std::uint64_t seed) {
    if (widths.size() < 2) throw ShapeError("an MLP needs at least input and output widths");
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
      DenseLayer layer{widths[l], widths[l + 1], std::vector<double>(widths[l] * widths[l + 1]),
                       std::vector<double>(widths[l + 1], 0.0)};
      const double std_dev = std::sqrt(2.0 / static_cast<double>(widths[l]));
      for (double& w : layer.weights) w = std_dev * rng.normal();
      layers_.push_back(std::move(layer));
    }
  }

  explicit Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {}

  std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
  std::size_t output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  std::vector<std::size_t> widths() const {
    std::vector<std::size_t> w;
    if (layers_.empty()) return w;
    w.push_back(layers_.front().in);
    for (const auto& l : layers_) w.push_back(l.out);
    return w;
  }

  std::size_t num_parameters() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
    return n;
  }

  std::vector<double> forward(std::span<const double> x) const {
    check_input(x);
    std::vector<double> a(x.begin(), x.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      a = affine(layers_[l], a);
      if (l + 1 < layers_.size())
        for (double& v : a) v = std::max(v, 0.0);
    }
    return a;
  }

  ForwardTrace forward_trace(std::span<const double> x) const {
    check_input(x);
    ForwardTrace t;
    std::vector<double> a(x.begin(), x.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      t.inputs.push_back(a);
      auto z = affine(layers_[l], a);
      t.pre.push_back(z);
      if (l + 1 < layers_.size())
        for (double& v : z) v = std::max(v, 0.0);
      a = std::move(z);
    }
    t.output = std::move(a);
    return t;
  }

  /// Backpropagates dL/d(output) through a recorded trace, accumulating
  /// parameter gradients into `grad` (same layout as this network).
  void backward(const ForwardTrace& t, std::vector<double> d_out, std::vector<DenseLayer>& grad) const {
    for (std::size_t l = layers_.size(); l-- > 0;) {
      const DenseLayer& layer = layers_[l];
      DenseLayer& g = grad[l];
      const auto& in = t.inputs[l];
      if (l + 1 < layers_.size())
        for (std::size_t o = 0; o < layer.out; ++o)
          if (t.pre[l][o] <= 0.0) d_out[o] = 0.0;
      std::vector<double> d_in(l > 0 ? layer.in : 0, 0.0);
      for (std::size_t o = 0; o < layer.out; ++o) {
        const double d = d_out[o];
        if (d == 0.0) continue;
        g.bias[o] += d;
        double* gw = &g.weights[o * layer.in];
        const double* w = &layer.weights[o * layer.in];
        for (std::size_t i = 0; i < layer.in; ++i) {
          if (in[i] != 0.0) gw[i] += d * in[i];
          if (l > 0) d_in[i] += d * w[i];
        }
      }
      d_out = std::move(d_in);
    }
  }

  std::vector<DenseLayer> zero_gradient() const {
    std::vector<DenseLayer> g = layers_;
    for (auto& l : g) {
      std::fill(l.weights.begin(), l.weights.end(), 0.0);
      std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
    return g;
  }

  void apply_sgd(const std::vector<DenseLayer>& grad, double learning_rate) {
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      for (std::size_t k = 0; k < layers_[l].weights.size(); ++k)
        layers_[l].weights[k] -= learning_rate * grad[l].weights[k];
      for (std::size_t k = 0; k < layers_[l].bias.size(); ++k)
        layers_[l].bias[k] -= learning_rate * grad[l].bias[k];
    }
  }

  /// Flat parameter vector: per layer, weights then biases.
  std::vector<double> parameters() const { return flatten(layers_); }

  void set_parameters(std::span<const double> p) {
    if (p.size() != num_parameters()) throw ShapeError("parameter vector has the wrong length");
    std::size_t k = 0;
    for (auto& l : layers_) {
      for (double& w : l.weights) w = p[k++];
      for (double& b : l.bias) b = p[k++];
    }
  }

  static std::vector<double> flatten(const std::vector<DenseLayer>& layers) {
    std::vector<double> p;
    for (const auto& l : layers) {
      p.insert(p.end(), l.weights.begin(), l.weights.end());
      p.insert(p.end(), l.bias.begin(), l.bias.end());
    }
    return p;
  }

  bool all_finite() const {
    for (const auto& l : layers_) {
      for (double w : l.weights)
        if (!std::isfinite(w)) return false;
      for (double b : l.bias)
        if (!std::isfinite(b)) return false;
    }
    return true;
  }

  friend bool operator==(const Mlp&, const Mlp&) = default;

  /// Text checkpoint:
  ///   bebold-mlp 1
  ///   <num_layers + 1> <width_0> ... <width_k>
  ///   per layer: out*in weights (row-major) then out biases, hexfloat,
  ///   whitespace separated.
  void save(std::ostream& os) const {
    os << "bebold-mlp 1\n";
    const auto w = widths();
    os << w.size();
    for (auto x : w) os << ' ' << x;
    os << '\n' << std::hexfloat;
    for (const auto& l : layers_) {
      for (std::size_t k = 0; k < l.weights.size(); ++k)
        os << l.weights[k] << ((k + 1) % l.in == 0 ? '\n' : ' ');
      for (std::size_t k = 0; k < l.bias.size(); ++k) os << l.bias[k] << (k + 1 == l.bias.size() ? '\n' : ' ');
    }
    os << std::defaultfloat;
  }

  static Mlp load(std::istream& is) {
    std::string magic;
    int version = 0;
    is >> magic >> version;
    if (magic != "bebold-mlp" || version != 1) throw ConfigError("not a bebold-mlp v1 checkpoint");
    std::size_t n = 0;
    is >> n;
    if (n < 2) throw ConfigError("corrupt MLP checkpoint");
    std::vector<std::size_t> w(n);
    for (auto& x : w) is >> x;
    std::vector<DenseLayer> layers;
    for (std::size_t l = 0; l + 1 < n; ++l) {
      DenseLayer layer{w[l], w[l + 1], std::vector<double>(w[l] * w[l + 1]), std::vector<double>(w[l + 1])};
      for (double& v : layer.weights) v = read_double(is);
      for (double& v : layer.bias) v = read_double(is);
      layers.push_back(std::move(layer));
    }
    if (!is) throw ConfigError("truncated MLP checkpoint");
    return Mlp(std::move(layers));
  }

 private:
  static double read_double(std::istream& is) {
    std::string tok;
    is >> tok;
    return std::strtod(tok.c_str(), nullptr);
  }

  void check_input(std::span<const double> x) const {
    if (x.size() != input_dim())
      throw ShapeError("input has length " + std::to_string(x.size()) + ", network expects " +
                       std::to_string(input_dim()));
  }

  // One-hot style inputs take a column-gather path that skips zeros; dense
  // inputs use contiguous row dot products.
  static std::vector<double> affine(const DenseLayer& layer, std::span<const double> x) {
    std::vector<double> z(layer.bias);
    std::size_t nonzero = 0;
    for (double xi : x) nonzero += xi != 0.0;
    if (4 * nonzero < layer.in) {
      for (std::size_t i = 0; i < layer.in; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t o = 0; o < layer.out; ++o) z[o] += layer.weights[o * layer.in + i] * xi;
      }
    } else {
      for (std::size_t o = 0; o < layer.out; ++o) {
        const double* w = &layer.weights[o * layer.in];
        double acc = 0.0;
        for (std::size_t i = 0; i < layer.in; ++i) acc += w[i] * x[i];
        z[o] += acc;
      }
    }
    return z;
  }

  std::vector<DenseLayer> layers_;
};

}  // namespace bebold
