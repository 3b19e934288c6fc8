#include "polypen/penalty.hpp"

#include <cmath>
#include <string>

#include "kernel.hpp"
#include "polypen/error.hpp"

namespace polypen {

namespace {

void require_k(int k) {
  if (k < 1) {
    throw ValidationError("k", "penalty index must be >= 1, got " + std::to_string(k));
  }
}

}  // namespace

PenaltySchedule::PenaltySchedule(const Problem& problem, double m) : problem_(&problem), m_(m) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw ValidationError("m", "penalty scaling must be finite and >= 0");
  }
}

double power(double base, int e, PowerStrategy strategy) {
  if (e < 1) {
    throw ValidationError("e", "exponent must be >= 1");
  }
  return detail::power(base, e, strategy);
}

double eval_p(const PenaltySchedule& s, int k, const Vector& x) {
  require_k(k);
  const double g = eval_g(s.problem(), x);
  return s.m() * detail::power(g, k, PowerStrategy::repeated_squaring) / k;
}

Vector grad_p(const PenaltySchedule& s, int k, const Vector& x) {
  require_k(k);
  const Vector gg = grad_g(s.problem(), x);
  // g^0 is 1 everywhere, including at the center.
  const double gk1 =
      k == 1 ? 1.0 : detail::power(eval_g(s.problem(), x), k - 1, PowerStrategy::repeated_squaring);
  return s.m() * gk1 * gg;
}

double eval_J(const PenaltySchedule& s, int k, const Vector& x) {
  return eval_f(s.problem(), x) + eval_p(s, k, x);
}

Vector grad_J(const PenaltySchedule& s, int k, const Vector& x, PowerStrategy strategy) {
  require_k(k);
  detail::require_dim(x, s.problem().dim(), "x");
  const auto data = detail::plain_data(s.problem());
  return detail::to_eigen(detail::grad_J(data, detail::to_std(x), k, s.m(), strategy));
}

double smoothness_L(const PenaltySchedule& s, int k) {
  require_k(k);
  const Problem& p = s.problem();
  const Matrix H = p.cost().Q() + s.m() * static_cast<double>(4 * k - 2) * p.constraint().A();
  return spectral_bounds(H).sigma_max;
}

double step_size(const PenaltySchedule& s, int k, const StepPolicy& policy) {
  const double L = smoothness_L(s, k);
  if (!(L > 0.0)) {
    throw NumericError("L_" + std::to_string(k) + " is zero; step size 1/L is undefined");
  }
  const double limit = 1.0 / L;
  if (policy.reciprocal_L()) {
    return limit;
  }
  if (static_cast<std::size_t>(k) > policy.sequence.size()) {
    throw ValidationError("step_policy", "user step sequence has " +
                                             std::to_string(policy.sequence.size()) +
                                             " entries, need index " + std::to_string(k));
  }
  const double gamma = policy.sequence[static_cast<std::size_t>(k - 1)];
  if (!(gamma > 0.0) || gamma > limit * (1.0 + 1e-12)) {
    throw ValidationError("step_policy", "gamma_" + std::to_string(k) + " = " +
                                             std::to_string(gamma) + " outside (0, 1/L_k = " +
                                             std::to_string(limit) + "]");
  }
  return gamma;
}

}  // namespace polypen
