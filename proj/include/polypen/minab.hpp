#pragma once

#include <optional>
#include <vector>

#include "polypen/circuit.hpp"
#include "polypen/quadforms.hpp"

namespace polypen {

// min(a, b) as an ellipsoid-constrained problem: minimize x over the interval
// between a and b, with the penalty scaled to m = alpha * |a - b| / 4.
class MinProblem {
public:
  MinProblem(double a, double b, double alpha = 1.0);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double alpha() const noexcept { return alpha_; }
  double m() const noexcept { return m_; }
  // m* = |a - b| / 4, the exact scaling for both requirements.
  double m_star() const noexcept { return m_ / alpha_; }
  bool degenerate() const noexcept { return a_ == b_; }
  double lo() const noexcept { return a_ < b_ ? a_ : b_; }
  double hi() const noexcept { return a_ < b_ ? b_ : a_; }

  // True when |a - b| <= 4 m_public, i.e. a solver built for penalty scaling
  // m_public covers this instance.
  bool compatible_with(double m_public) const noexcept;

private:
  double a_;
  double b_;
  double alpha_;
  double m_;
};

// Q = 0, q = 1, A = 4/(a - b)^2, v = (a + b)/2. Empty for a = b.
std::optional<Problem> to_problem(const MinProblem& mp);

// One step x_{k+1} = x_k - (a-b)^2/(4(4k-2)m) - A^(k-1)(x_k - v)^(2k-1)/(2k-1).
double iterate(const MinProblem& mp, double x, int k,
               PowerStrategy strategy = PowerStrategy::repeated_squaring);

// |x* - x_k*| = (|a - b|/2)(1 - alpha^(-1/(2k-1))).
double auxiliary_error(const MinProblem& mp, int k);

// Smallest k with auxiliary_error(k) <= delta, for 0 < delta < |a - b|/2.
int iterations_for_precision(const MinProblem& mp, double delta);

// x_2 from the center: (a+b)/2 - (a-b)^2/(8m). Lies in [min, (a+b)/2).
double single_step_estimate(const MinProblem& mp);

// (a+b)/2 - alpha |a-b|/2: the same step with |a-b| replaced by its upper
// bound. Lies in (-inf, min(a,b)].
double naive_bound_estimate(const MinProblem& mp);

struct MinabRun {
  std::vector<double> xs;  // x_1 = v, ..., x_{N+1}
  double result = 0.0;
  std::optional<CircuitStats> stats;
  int recomputed_max_level = 0;
};

// N specialized steps from the center. With `circuit`, a, b and A enter the
// tape as ciphertexts (A pre-supplied) and the run reports operation counts;
// the iterates are bitwise-equal to the plain run.
MinabRun run_minab(const MinProblem& mp, int iterations, bool circuit = false,
                   PowerStrategy strategy = PowerStrategy::repeated_squaring);

}  // namespace polypen
