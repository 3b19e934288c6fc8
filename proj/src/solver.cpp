#include "polypen/solver.hpp"

#include <cmath>
#include <string>

#include "kernel.hpp"
#include "polypen/error.hpp"

namespace polypen {

Vector default_start(const Problem& p) { return p.constraint().v(); }

namespace detail {

Vector start_point(const Problem& p, const SolverConfig& cfg) {
  if (!cfg.x1) {
    return default_start(p);
  }
  require_dim(*cfg.x1, p.dim(), "x1");
  if (!cfg.x1->allFinite()) {
    throw ValidationError("x1", "start point has non-finite entries");
  }
  const double g = eval_g(p, *cfg.x1);
  if (g > 1.0 + 1e-12) {
    throw ValidationError("x1", "start point lies outside the constraint set (g = " +
                                    std::to_string(g) + ")");
  }
  return *cfg.x1;
}

std::vector<double> step_schedule(const Problem& p, const SolverConfig& cfg) {
  if (cfg.iterations < 0) {
    throw ValidationError("N", "iteration count must be >= 0");
  }
  const PenaltySchedule s(p, cfg.m);
  std::vector<double> gammas;
  gammas.reserve(static_cast<std::size_t>(cfg.iterations));
  for (int k = 1; k <= cfg.iterations; ++k) {
    gammas.push_back(step_size(s, k, cfg.step_policy));
  }
  return gammas;
}

SolveTrace make_trace(const Problem& p, const SolverConfig& cfg, const std::vector<Vector>& xs,
                      const std::vector<double>& gammas) {
  const PenaltySchedule s(p, cfg.m);
  SolveTrace t;
  t.m = cfg.m;
  t.certified = cfg.m_inv.has_value() && cfg.m >= *cfg.m_inv;
  t.final_x = xs.back();
  t.final_g = eval_g(p, t.final_x);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    IterationRecord r;
    r.k = k;
    r.x = xs[i];
    r.f = eval_f(p, r.x);
    r.g = eval_g(p, r.x);
    r.J = r.f + eval_p(s, k, r.x);
    r.J_next = eval_J(s, k, xs[i + 1]);
    r.grad_norm = grad_J(s, k, r.x, cfg.power).norm();
    r.gamma = gammas[i];
    t.records.push_back(std::move(r));
  }
  if (cfg.diagnostics) {
    t.invariance = check_invariance(t, 1e-9);
    t.descent = check_descent(t, 1e-10);
  }
  return t;
}

}  // namespace detail

SolveTrace solve(const Problem& p, const SolverConfig& cfg) {
  const auto gammas = detail::step_schedule(p, cfg);
  const auto data = detail::plain_data(p);
  std::vector<double> x = detail::to_std(detail::start_point(p, cfg));
  std::vector<Vector> xs;
  xs.reserve(gammas.size() + 1);
  xs.push_back(detail::to_eigen(x));
  for (int k = 1; k <= cfg.iterations; ++k) {
    detail::gradient_step(data, x, k, cfg.m, gammas[static_cast<std::size_t>(k - 1)], cfg.power);
    for (double xi : x) {
      if (!std::isfinite(xi)) {
        throw NumericError("iterate x_" + std::to_string(k + 1) +
                           " is not finite; check m and the step sizes");
      }
    }
    xs.push_back(detail::to_eigen(x));
  }
  return detail::make_trace(p, cfg, xs, gammas);
}

CheckResult check_invariance(const SolveTrace& trace, double tol) {
  for (const auto& r : trace.records) {
    if (r.g > 1.0 + tol) {
      return r.k;
    }
  }
  if (!trace.records.empty() && trace.final_g > 1.0 + tol) {
    return trace.records.back().k + 1;
  }
  return std::nullopt;
}

CheckResult check_descent(const SolveTrace& trace, double tol) {
  const auto& rs = trace.records;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].J_next > rs[i].J + tol) {
      return rs[i].k;
    }
    if (i + 1 < rs.size() && rs[i + 1].J > rs[i].J_next + tol) {
      return rs[i].k;
    }
  }
  return std::nullopt;
}

}  // namespace polypen
