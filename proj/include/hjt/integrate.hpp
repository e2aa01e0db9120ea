#pragma once

// Fixed-step classical RK4 with optional re-projection after each step.

#include <functional>
#include <string>
#include <vector>

#include "hjt/dynamics.hpp"
#include "hjt/error.hpp"
#include "hjt/linalg.hpp"

namespace hjt {

struct VectorField {
  std::size_t dim = 0;
  std::function<Vec(const Vec&)> f;
  Guard guard;

  bool contains(const Vec& x) const {
    return static_cast<std::size_t>(x.size()) == dim && (!guard || guard(as_span(x)));
  }
  Vec operator()(const Vec& x) const { return f(x); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  bool aborted = false;        // guard violation or evaluation failure
  std::size_t abort_step = 0;  // step k whose evaluation failed
  std::string message;
};

using Projection = std::function<Vec(const Vec&)>;

inline Trajectory integrate(const VectorField& field, const Vec& x0, double dt, std::size_t steps,
                            const Projection& project = {}) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Usage, "integrate: dt must be positive");
  if (!field.contains(x0))
    throw Error(ErrorKind::GuardViolation, "initial state " + detail::format_point(as_span(x0)));
  Trajectory tr;
  tr.times.reserve(steps + 1);
  tr.states.reserve(steps + 1);
  tr.times.push_back(0.0);
  tr.states.push_back(x0);
  Vec x = x0;
  auto eval = [&](const Vec& y) {
    if (!field.contains(y)) throw Error(ErrorKind::GuardViolation, "stage " + detail::format_point(as_span(y)));
    Vec r = field(y);
    if (!r.allFinite()) throw Error(ErrorKind::NonFinite, "field at " + detail::format_point(as_span(y)));
    return r;
  };
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      Vec k1 = eval(x);
      Vec k2 = eval(x + 0.5 * dt * k1);
      Vec k3 = eval(x + 0.5 * dt * k2);
      Vec k4 = eval(x + dt * k3);
      Vec next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (project) next = project(next);
      if (!field.contains(next)) throw Error(ErrorKind::GuardViolation, "state " + detail::format_point(as_span(next)));
      x = next;
    } catch (const Error& e) {
      tr.aborted = true;
      tr.abort_step = k;
      tr.message = e.what();
      return tr;
    }
    tr.times.push_back(static_cast<double>(k) * dt);
    tr.states.push_back(x);
  }
  return tr;
}

/// Gamma_L as a vector field on R^{2n}.
inline VectorField lagrangian_vector_field(const LagrangianSystem& sys, const DiffConfig& cfg = {}) {
  const auto n = static_cast<Eigen::Index>(sys.n);
  return {2 * sys.n,
          [sys, cfg, n](const Vec& x) {
            Vec out(2 * n);
            out << x.tail(n), lagrangian_sode(sys, x, cfg).a;
            return out;
          },
          sys.L.guard()};
}

inline VectorField hamiltonian_vector_field(const HamiltonianSystem& sys, const DiffConfig& cfg = {}) {
  return {2 * sys.n, [sys, cfg](const Vec& x) { return hamiltonian_field(sys, x, cfg); }, sys.H.guard()};
}

inline VectorField section_vector_field(const SectionField& s) {
  return {s.base_dim(), [s](const Vec& q) { return s(q); }, s.map.guard()};
}

/// Max |f(x_k) - f(x_0)| along a trajectory.
inline double max_drift(const Trajectory& tr, const std::function<double(const Vec&)>& f) {
  if (tr.states.empty()) return 0.0;
  double f0 = f(tr.states.front()), worst = 0.0;
  for (const auto& s : tr.states) worst = std::max(worst, std::abs(f(s) - f0));
  return worst;
}

}  // namespace hjt
