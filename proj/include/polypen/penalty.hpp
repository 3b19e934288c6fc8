#pragma once

#include <vector>

#include "polypen/quadforms.hpp"

namespace polypen {

// How g(x)^e is formed. Both give the same value up to rounding; they differ
// in multiplication count and multiplicative depth.
enum class PowerStrategy { sequential, repeated_squaring };

// Step-size rule. An empty `sequence` selects gamma_k = 1/L_k; otherwise
// gamma_k = sequence[k-1], which must lie in (0, 1/L_k].
struct StepPolicy {
  std::vector<double> sequence;

  bool reciprocal_L() const noexcept { return sequence.empty(); }
};

// The penalty family p_k(x) = m g(x)^k / k attached to a problem. Holds a
// non-owning pointer; the problem must outlive the schedule.
class PenaltySchedule {
public:
  PenaltySchedule(const Problem& problem, double m);

  const Problem& problem() const noexcept { return *problem_; }
  double m() const noexcept { return m_; }

private:
  const Problem* problem_;
  double m_;
};

// p_k(x). Outside the ellipsoid the value may overflow to +inf for large k;
// that is returned as-is and callers treat non-finite results as misuse.
double eval_p(const PenaltySchedule& s, int k, const Vector& x);
Vector grad_p(const PenaltySchedule& s, int k, const Vector& x);
double eval_J(const PenaltySchedule& s, int k, const Vector& x);
Vector grad_J(const PenaltySchedule& s, int k, const Vector& x,
              PowerStrategy strategy = PowerStrategy::repeated_squaring);

// L_k = sigma_max(Q + m(4k - 2)A), the curvature bound of J_k on the ellipsoid.
double smoothness_L(const PenaltySchedule& s, int k);

double step_size(const PenaltySchedule& s, int k, const StepPolicy& policy);

// base^e for e >= 1 under the given strategy; the same routine the solver
// kernel uses, exposed for plain doubles.
double power(double base, int e, PowerStrategy strategy);

}  // namespace polypen
