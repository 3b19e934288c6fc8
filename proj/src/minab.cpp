#include "polypen/minab.hpp"

#include <cmath>
#include <string>

#include "kernel.hpp"
#include "polypen/error.hpp"

namespace polypen {

namespace {

template <class T>
struct MinabInputs {
  T a;
  T b;
  T A;
};

// The (a-b)^2 form keeps the step free of absolute values, so a and b can be
// ciphertexts. For k = 1 the A-term has power zero and A is not touched.
template <class T>
T minab_step(const MinabInputs<T>& in, const T& x, int k, double m, PowerStrategy strategy) {
  const double c_gamma = 1.0 / (4.0 * (4.0 * k - 2.0) * m);
  const double c_pen = 1.0 / (2.0 * k - 1.0);
  const T diff = in.a - in.b;
  const T center = (in.a + in.b) * 0.5;
  const T d = x - center;
  const T shift = (diff * diff) * c_gamma;
  if (k == 1) {
    return (x - shift) - d * c_pen;
  }
  const T g = in.A * (d * d);
  const T pw = detail::power(g, k - 1, strategy);
  return (x - shift) - (pw * d) * c_pen;
}

void require_k(int k) {
  if (k < 1) {
    throw ValidationError("k", "iteration index must be >= 1");
  }
}

}  // namespace

MinProblem::MinProblem(double a, double b, double alpha) : a_(a), b_(b), alpha_(alpha) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("a", "a and b must be finite");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("alpha", "alpha must be finite and positive");
  }
  m_ = alpha_ * std::abs(a_ - b_) / 4.0;
}

bool MinProblem::compatible_with(double m_public) const noexcept {
  return std::abs(a_ - b_) <= 4.0 * m_public;
}

std::optional<Problem> to_problem(const MinProblem& mp) {
  if (mp.degenerate()) {
    return std::nullopt;
  }
  const double diff = mp.a() - mp.b();
  return Problem(QuadraticCost(Matrix::Zero(1, 1), Vector::Ones(1)),
                 Ellipsoid(Matrix::Constant(1, 1, 4.0 / (diff * diff)),
                           Vector::Constant(1, (mp.a() + mp.b()) / 2.0)));
}

double iterate(const MinProblem& mp, double x, int k, PowerStrategy strategy) {
  require_k(k);
  if (mp.degenerate()) {
    return mp.a();
  }
  const double diff = mp.a() - mp.b();
  const MinabInputs<double> in{mp.a(), mp.b(), 4.0 / (diff * diff)};
  return minab_step(in, x, k, mp.m(), strategy);
}

double auxiliary_error(const MinProblem& mp, int k) {
  require_k(k);
  const double half_gap = std::abs(mp.a() - mp.b()) / 2.0;
  return std::abs(half_gap * (1.0 - std::pow(1.0 / mp.alpha(), 1.0 / (2.0 * k - 1.0))));
}

int iterations_for_precision(const MinProblem& mp, double delta) {
  const double gap = std::abs(mp.a() - mp.b());
  if (!(delta > 0.0) || !(delta < gap / 2.0)) {
    throw ValidationError("delta", "precision must lie in (0, |a - b|/2)");
  }
  if (mp.alpha() == 1.0) {
    return 1;
  }
  const double bound = 0.5 - std::log(mp.alpha()) / (2.0 * std::log1p(-2.0 * delta / gap));
  int k = std::max(1, static_cast<int>(std::ceil(bound)));
  // Guard the ceil against rounding at the exact boundary.
  while (auxiliary_error(mp, k) > delta) ++k;
  while (k > 1 && auxiliary_error(mp, k - 1) <= delta) --k;
  return k;
}

double single_step_estimate(const MinProblem& mp) {
  const double center = (mp.a() + mp.b()) / 2.0;
  if (mp.degenerate()) {
    return center;
  }
  const double diff = mp.a() - mp.b();
  return center - diff * diff / (8.0 * mp.m());
}

double naive_bound_estimate(const MinProblem& mp) {
  return (mp.a() + mp.b()) / 2.0 - mp.alpha() * std::abs(mp.a() - mp.b()) / 2.0;
}

MinabRun run_minab(const MinProblem& mp, int iterations, bool circuit, PowerStrategy strategy) {
  if (iterations < 0) {
    throw ValidationError("iters", "iteration count must be >= 0");
  }
  MinabRun run;
  if (mp.degenerate()) {
    run.xs.assign(static_cast<std::size_t>(iterations) + 1, mp.a());
    run.result = mp.a();
    if (circuit) run.stats = CircuitStats{};
    return run;
  }
  const double diff = mp.a() - mp.b();
  const double A = 4.0 / (diff * diff);
  if (!circuit) {
    const MinabInputs<double> in{mp.a(), mp.b(), A};
    double x = (mp.a() + mp.b()) * 0.5;
    run.xs.push_back(x);
    for (int k = 1; k <= iterations; ++k) {
      x = minab_step(in, x, k, mp.m(), strategy);
      run.xs.push_back(x);
    }
  } else {
    Tape tape;
    const MinabInputs<TapeValue> in{tape.input(mp.a(), true), tape.input(mp.b(), true),
                                    tape.input(A, true)};
    TapeValue x = (in.a + in.b) * 0.5;
    run.xs.push_back(x.value());
    for (int k = 1; k <= iterations; ++k) {
      x = minab_step(in, x, k, mp.m(), strategy);
      run.xs.push_back(x.value());
    }
    run.stats = tape.stats();
    run.recomputed_max_level = tape.recompute_max_level();
  }
  for (double x : run.xs) {
    if (!std::isfinite(x)) {
      throw NumericError("min(a, b) iteration produced a non-finite value");
    }
  }
  run.result = run.xs.back();
  return run;
}

}  // namespace polypen
