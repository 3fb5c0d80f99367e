#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/core/rng.hpp"
#include "bebold/rnd/mlp.hpp"

namespace bebold {

inline constexpr double kApproxCountFloor = 1e-8;

struct PredictorConfig {
  std::size_t input_dim = 0;
  std::size_t hidden = 64;
  std::size_t output_dim = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;

  std::vector<std::size_t> widths() const { return {input_dim, hidden, hidden, output_dim}; }
};

/// Frozen random teacher and a student trained by plain SGD to imitate it.
/// The student's residual on an observation shrinks with how often it has
/// been trained on that observation.
class PredictorPair {
 public:
  PredictorPair() = default;

  explicit PredictorPair(const PredictorConfig& cfg)
      : PredictorPair(Mlp(cfg.widths(), derive_seed(cfg.seed, "rnd-teacher")),
                      Mlp(cfg.widths(), derive_seed(cfg.seed, "rnd-student")), cfg.learning_rate) {}

  PredictorPair(Mlp teacher, Mlp student, double learning_rate)
      : teacher_(std::move(teacher)), student_(std::move(student)), learning_rate_(learning_rate) {
    if (teacher_.widths() != student_.widths()) throw ShapeError("teacher and student shapes differ");
    if (!(learning_rate_ > 0.0)) throw ConfigError("learning rate must be positive");
  }

  const Mlp& teacher() const { return teacher_; }
  const Mlp& student() const { return student_; }
  Mlp& mutable_student() { return student_; }
  double learning_rate() const { return learning_rate_; }
  std::size_t input_dim() const { return teacher_.input_dim(); }
  std::uint64_t train_steps() const { return train_steps_; }

  /// Teacher outputs are a pure function of the observation; caching them
  /// keyed on the exact encoding saves a forward pass per query.
  void set_teacher_cache(bool on) {
    cache_on_ = on;
    cache_.clear();
  }

  const std::vector<double>& teacher_output(std::span<const double> obs) const {
    if (!cache_on_) {
      scratch_ = teacher_.forward(obs);
      return scratch_;
    }
    std::string key(obs.size() * sizeof(double), '\0');
    if (!obs.empty()) std::memcpy(key.data(), obs.data(), key.size());
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(std::move(key), teacher_.forward(obs)).first;
    return it->second;
  }

  double prediction_error(std::span<const double> obs) const {
    const auto& t = teacher_output(obs);
    const auto s = student_.forward(obs);
    double sq = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) sq += (t[k] - s[k]) * (t[k] - s[k]);
    return std::sqrt(sq);
  }

  double approx_count(std::span<const double> obs) const {
    return 1.0 / std::max(prediction_error(obs), kApproxCountFloor);
  }

  /// Mean over the batch of the squared residual, and its gradient with
  /// respect to the student parameters. Does not modify anything.
  double loss_and_gradient(std::span<const EncodedObs> batch, std::vector<DenseLayer>& grad) const {
    if (batch.empty()) throw Misuse("train_step needs a non-empty batch");
    grad = student_.zero_gradient();
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (const auto& obs : batch) {
      const auto& t = teacher_output(obs);
      auto trace = student_.forward_trace(obs);
      std::vector<double> d(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) {
        const double r = trace.output[k] - t[k];
        loss += r * r * inv_b;
        d[k] = 2.0 * r * inv_b;
      }
      student_.backward(trace, std::move(d), grad);
    }
    return loss;
  }

  /// One SGD step on the student. Returns the loss before the update.
  double train_step(std::span<const EncodedObs> batch) {
    std::vector<DenseLayer> grad;
    const double loss = loss_and_gradient(batch, grad);
    student_.apply_sgd(grad, learning_rate_);
    ++train_steps_;
    if (!student_.all_finite()) throw DomainError("student weights diverged");
    return loss;
  }

  double train_step(const EncodedObs& obs) { return train_step(std::span<const EncodedObs>(&obs, 1)); }

  /// prediction_error(obs) followed by train_step(obs), sharing one forward
  /// pass. Returns the pre-update error (the norm, not its square).
  double error_then_train(const EncodedObs& obs) {
    const auto& t = teacher_output(obs);
    auto trace = student_.forward_trace(obs);
    std::vector<double> d(t.size());
    double sq = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double r = trace.output[k] - t[k];
      sq += r * r;
      d[k] = 2.0 * r;
    }
    auto grad = student_.zero_gradient();
    student_.backward(trace, std::move(d), grad);
    student_.apply_sgd(grad, learning_rate_);
    ++train_steps_;
    if (!student_.all_finite()) throw DomainError("student weights diverged");
    return std::sqrt(sq);
  }

  /// Text checkpoint: a header line, the learning rate, then the teacher
  /// and student networks in Mlp::save format.
  void save(std::ostream& os) const {
    os << "bebold-rnd 1\n" << std::hexfloat << learning_rate_ << std::defaultfloat << ' ' << train_steps_ << '\n';
    teacher_.save(os);
    student_.save(os);
  }

  static PredictorPair load(std::istream& is) {
    std::string magic, lr;
    int version = 0;
    std::uint64_t steps = 0;
    is >> magic >> version >> lr >> steps;
    if (magic != "bebold-rnd" || version != 1) throw ConfigError("not a bebold-rnd v1 checkpoint");
    Mlp teacher = Mlp::load(is);
    Mlp student = Mlp::load(is);
    PredictorPair p(std::move(teacher), std::move(student), std::strtod(lr.c_str(), nullptr));
    p.train_steps_ = steps;
    return p;
  }

 private:
  Mlp teacher_;
  Mlp student_;
  double learning_rate_ = 1e-3;
  std::uint64_t train_steps_ = 0;
  bool cache_on_ = false;
  mutable std::unordered_map<std::string, std::vector<double>> cache_;
  mutable std::vector<double> scratch_;
};

}  // namespace bebold
