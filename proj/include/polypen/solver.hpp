#pragma once

#include <optional>
#include <vector>

#include "polypen/penalty.hpp"
#include "polypen/quadforms.hpp"

namespace polypen {

struct SolverConfig {
  int iterations = 100;  // N, fixed up front
  double m = 0.0;
  StepPolicy step_policy;
  std::optional<Vector> x1;  // empty: start at the ellipsoid center
  bool diagnostics = false;
  PowerStrategy power = PowerStrategy::repeated_squaring;
  // When set, the trace is marked certified iff m >= m_inv.
  std::optional<double> m_inv;
};

struct IterationRecord {
  int k = 0;
  Vector x;             // x_k
  double f = 0.0;       // f(x_k)
  double g = 0.0;       // g(x_k)
  double J = 0.0;       // J_k(x_k)
  double J_next = 0.0;  // J_k(x_{k+1}), for the descent chain
  double grad_norm = 0.0;
  double gamma = 0.0;
};

// Result of a diagnostic scan: the first offending index, if any.
using CheckResult = std::optional<int>;

struct SolveTrace {
  std::vector<IterationRecord> records;
  Vector final_x;  // x_{N+1}
  double final_g = 0.0;
  double m = 0.0;
  bool certified = false;
  std::optional<CheckResult> invariance;  // filled when diagnostics are on
  std::optional<CheckResult> descent;
};

Vector default_start(const Problem& p);

// Runs exactly cfg.iterations steps of x_{k+1} = x_k - gamma_k grad J_k(x_k),
// k = 1..N. Throws ValidationError for an infeasible x1 or bad config and
// NumericError for a non-finite iterate.
SolveTrace solve(const Problem& p, const SolverConfig& cfg);

// First k with g(x_k) > 1 + tol; the final iterate is reported as k = N+1.
CheckResult check_invariance(const SolveTrace& trace, double tol);

// First k where J_{k+1}(x_{k+1}) <= J_k(x_{k+1}) <= J_k(x_k) fails by more
// than tol.
CheckResult check_descent(const SolveTrace& trace, double tol);

namespace detail {
// Validates cfg against p and returns gamma_1..gamma_N.
std::vector<double> step_schedule(const Problem& p, const SolverConfig& cfg);
Vector start_point(const Problem& p, const SolverConfig& cfg);
// Builds the trace from a sequence of iterates x_1..x_{N+1}.
SolveTrace make_trace(const Problem& p, const SolverConfig& cfg, const std::vector<Vector>& xs,
                      const std::vector<double>& gammas);
}  // namespace detail

}  // namespace polypen
