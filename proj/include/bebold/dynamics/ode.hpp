#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bebold/core/error.hpp"
#include "bebold/dynamics/phi.hpp"

namespace bebold {

/// Continuous visitation model of two corridors under count-based IR and an
/// agent choosing proportionally to its moving-average values.
struct OdeState {
  double t = 0.0;
  double x_l = 1.0;
  double x_r = 1.0;
};

struct OdeParams {
  double t_l = 40.0;
  double t_r = 10.0;
  double alpha = 0.01;
};

struct Trajectory {
  std::vector<OdeState> states;
  bool ok = true;
  std::string error;  // set when integration stopped on a non-finite state
};

class CorridorOde {
 public:
  explicit CorridorOde(OdeParams p) : p_(p), phi_(p.alpha) {
    if (!(p.t_l > 0.0 && p.t_r > 0.0)) throw DomainError("corridor lengths must be positive");
  }

  const OdeParams& params() const { return p_; }

  /// Selection probability of the left corridor, i.e. dx_l/dt.
  double left_rate(double x_l, double x_r) {
    const double a = p_.t_l * phi_(x_l);
    const double b = p_.t_r * phi_(x_r);
    return a / (a + b);
  }

  /// T_r phi(x_r) - T_l phi(x_l): positive once the right side is preferred.
  double preference_gap(double x_l, double x_r) { return p_.t_r * phi_(x_r) - p_.t_l * phi_(x_l); }

  Trajectory integrate(OdeState s0, double horizon, double dt) {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    Trajectory tr;
    tr.states.push_back(s0);
    OdeState s = s0;
    const auto steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
    for (long k = 0; k < steps; ++k) {
      const double h = std::min(dt, s0.t + horizon - s.t);
      if (h <= 0.0) break;
      OdeState next;
      try {
        next = rk4(s, h);
      } catch (const DomainError& e) {
        tr.ok = false;
        tr.error = std::string("integration failed at t=") + std::to_string(s.t) + ": " + e.what();
        return tr;
      }
      if (!std::isfinite(next.x_l) || !std::isfinite(next.x_r)) {
        tr.ok = false;
        tr.error = "integration produced a non-finite state after t=" + std::to_string(s.t);
        return tr;
      }
      // Times come from the step index so long runs do not accumulate drift.
      next.t = k + 1 == steps ? s0.t + horizon : s0.t + static_cast<double>(k + 1) * dt;
      s = next;
      tr.states.push_back(s);
    }
    return tr;
  }

 private:
  OdeState rk4(const OdeState& s, double h) {
    const auto f = [&](double xl, double xr) {
      const double r = left_rate(xl, xr);
      return std::pair{r, 1.0 - r};
    };
    const auto [k1l, k1r] = f(s.x_l, s.x_r);
    const auto [k2l, k2r] = f(s.x_l + 0.5 * h * k1l, s.x_r + 0.5 * h * k1r);
    const auto [k3l, k3r] = f(s.x_l + 0.5 * h * k2l, s.x_r + 0.5 * h * k2r);
    const auto [k4l, k4r] = f(s.x_l + h * k3l, s.x_r + h * k3r);
    return {s.t + h, s.x_l + h / 6.0 * (k1l + 2 * k2l + 2 * k3l + k4l),
            s.x_r + h / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r)};
  }

  OdeParams p_;
  PhiSeries phi_;
};

inline Trajectory integrate(const OdeParams& p, OdeState s0 = {}, double horizon = 3000.0, double dt = 0.1) {
  return CorridorOde(p).integrate(s0, horizon, dt);
}

enum class CrossingStatus { kFound, kAbsent, kDegenerate };

struct Crossing {
  CrossingStatus status = CrossingStatus::kAbsent;
  double t = 0.0;
  double x_l = 0.0;
  double x_r = 0.0;
  // Count of the initially preferred (longer) corridor at the crossing.
  double x_lead = 0.0;
  // (T_long / T_short) / alpha, the closed-form estimate of x_lead.
  double analytic_threshold = 0.0;
};

/// First time the initially disfavoured corridor becomes preferred,
/// linearly interpolated between trajectory samples.
inline Crossing crossing_point(const Trajectory& tr, const OdeParams& p) {
  Crossing c;
  const bool left_leads = p.t_l >= p.t_r;
  c.analytic_threshold = (left_leads ? p.t_l / p.t_r : p.t_r / p.t_l) / p.alpha;
  if (p.t_l == p.t_r) {
    c.status = CrossingStatus::kDegenerate;
    return c;
  }
  CorridorOde ode(p);
  const auto gap = [&](const OdeState& s) {
    const double g = ode.preference_gap(s.x_l, s.x_r);
    return left_leads ? g : -g;
  };
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const double g1 = gap(tr.states[k]);
    if (g1 > 0.0) {
      // A start that already favours the short side crosses at its first sample.
      const double g0 = k ? gap(tr.states[k - 1]) : g1;
      const double w = k ? -g0 / (g1 - g0) : 0.0;
      const std::size_t j = k ? k - 1 : 0;
      const auto lerp = [&](double a, double b) { return a + w * (b - a); };
      c.status = CrossingStatus::kFound;
      c.t = lerp(tr.states[j].t, tr.states[k].t);
      c.x_l = lerp(tr.states[j].x_l, tr.states[k].x_l);
      c.x_r = lerp(tr.states[j].x_r, tr.states[k].x_r);
      c.x_lead = left_leads ? c.x_l : c.x_r;
      return c;
    }
  }
  return c;
}

/// Linear interpolation of a trajectory at time t (clamped to its range).
inline OdeState sample_at(const Trajectory& tr, double t) {
  const auto& s = tr.states;
  if (s.empty()) throw Misuse("empty trajectory");
  if (t <= s.front().t) return s.front();
  if (t >= s.back().t) return s.back();
  std::size_t lo = 0, hi = s.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (s[mid].t <= t ? lo : hi) = mid;
  }
  const double w = (t - s[lo].t) / (s[hi].t - s[lo].t);
  return {t, s[lo].x_l + w * (s[hi].x_l - s[lo].x_l), s[lo].x_r + w * (s[hi].x_r - s[lo].x_r)};
}

}  // namespace bebold
