#include "polypen/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kernel.hpp"
#include "polypen/error.hpp"
#include "polypen/fixed_point.hpp"

namespace polypen {

namespace {

bool marked(const SecretMarks& marks, char field) {
  switch (field) {
    case 'Q':
      return marks.Q;
    case 'q':
      return marks.q;
    case 'A':
      return marks.A;
    default:
      return marks.v;
  }
}

void require_finite(const std::vector<double>& x, int k) {
  for (double xi : x) {
    if (!std::isfinite(xi)) {
      throw NumericError("iterate x_" + std::to_string(k + 1) + " is not finite");
    }
  }
}

// Level and secrecy of an aggregate quantity in the update formula.
struct Sym {
  int level = 0;
  bool secret = false;
};

Sym sym_add(Sym a, Sym b) { return {std::max(a.level, b.level), a.secret || b.secret}; }

Sym sym_mul(Sym a, Sym b) {
  return {std::max(a.level, b.level) + (a.secret && b.secret ? 1 : 0), a.secret || b.secret};
}

}  // namespace

TapeSolveResult tape_solve(const Problem& p, const SolverConfig& cfg, const SecretMarks& marks,
                           std::optional<int> level_budget) {
  const auto gammas = detail::step_schedule(p, cfg);
  const Vector start = detail::start_point(p, cfg);

  Tape tape(level_budget);
  const auto data = detail::lift_problem<TapeValue>(
      p, [&](char field, double value) { return tape.input(value, marked(marks, field)); });
  std::vector<TapeValue> x;
  if (cfg.x1) {
    for (Eigen::Index i = 0; i < start.size(); ++i) {
      x.push_back(tape.input(start(i), marks.x1));
    }
  } else {
    x = data.v;
  }

  auto values = [](const std::vector<TapeValue>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const auto& t : xs) out.push_back(t.value());
    return out;
  };

  std::vector<Vector> xs;
  xs.push_back(detail::to_eigen(values(x)));
  for (int k = 1; k <= cfg.iterations; ++k) {
    detail::gradient_step(data, x, k, cfg.m, gammas[static_cast<std::size_t>(k - 1)], cfg.power);
    const auto xv = values(x);
    require_finite(xv, k);
    xs.push_back(detail::to_eigen(xv));
  }

  TapeSolveResult out;
  out.trace = detail::make_trace(p, cfg, xs, gammas);
  out.stats = tape.stats();
  out.recomputed_max_level = tape.recompute_max_level();
  out.budget_exceeded = tape.budget_exceeded();
  return out;
}

int power_depth(int e, PowerStrategy strategy) {
  if (e < 1) {
    throw ValidationError("e", "exponent must be >= 1");
  }
  if (strategy == PowerStrategy::sequential) {
    return e - 1;
  }
  // ceil(log2 e)
  int d = 0;
  while ((1 << d) < e) ++d;
  return d;
}

DepthPlan plan_depth(int n, int N, PowerStrategy strategy, const SecretMarks& marks) {
  if (n < 1) {
    throw ValidationError("n", "dimension must be positive");
  }
  if (N < 1) {
    throw ValidationError("N", "iteration count must be >= 1");
  }
  const Sym Q{0, marks.Q};
  const Sym q{0, marks.q};
  const Sym A{0, marks.A};
  const Sym v{0, marks.v};

  DepthPlan plan;
  plan.strategy = strategy;
  Sym x = v;  // default start x_1 = v
  for (int k = 1; k <= N; ++k) {
    const Sym d = sym_add(x, v);
    const Sym Ad = sym_mul(A, d);
    const Sym gf = sym_add(sym_mul(Q, x), q);
    Sym grad;
    if (k == 1) {
      grad = sym_add(gf, Ad);
    } else {
      const Sym g = sym_mul(d, Ad);
      const Sym pw{g.level + (g.secret ? power_depth(k - 1, strategy) : 0), g.secret};
      grad = sym_add(gf, sym_mul(pw, Ad));
    }
    const Sym next = sym_add(x, grad);
    plan.rows.push_back({k, next.level - x.level, next.level});
    x = next;
  }
  plan.total_level = x.level;
  return plan;
}

FixedPointResult fixed_point_solve(const Problem& p, const SolverConfig& cfg, int fraction_bits) {
  if (fraction_bits < 8 || fraction_bits > 52) {
    throw ValidationError("fraction_bits", "must be in [8, 52], got " +
                                               std::to_string(fraction_bits));
  }
  const SolveTrace reference = solve(p, cfg);
  const auto gammas = detail::step_schedule(p, cfg);
  const Vector start = detail::start_point(p, cfg);

  FixedPointResult out;
  std::vector<Vector> xs;
  std::vector<double> used_gammas;
  try {
    const auto data = detail::lift_problem<Fixed>(
        p, [&](char, double value) { return Fixed::from_double(value, fraction_bits); });
    std::vector<Fixed> x;
    for (Eigen::Index i = 0; i < start.size(); ++i) {
      x.push_back(Fixed::from_double(start(i), fraction_bits));
    }
    auto decode = [&] {
      Vector xv(static_cast<Eigen::Index>(x.size()));
      for (std::size_t i = 0; i < x.size(); ++i) xv(static_cast<Eigen::Index>(i)) = x[i].to_double();
      return xv;
    };
    xs.push_back(decode());
    for (int k = 1; k <= cfg.iterations; ++k) {
      try {
        detail::gradient_step(data, x, k, cfg.m, gammas[static_cast<std::size_t>(k - 1)],
                              cfg.power);
      } catch (const FixedOverflow&) {
        out.overflow_k = k;
        break;
      }
      used_gammas.push_back(gammas[static_cast<std::size_t>(k - 1)]);
      xs.push_back(decode());
    }
  } catch (const FixedOverflow&) {
    // The problem data or start point itself does not fit the format.
    out.overflow_k = 0;
    out.trace.m = cfg.m;
    out.max_deviation = std::numeric_limits<double>::infinity();
    return out;
  }

  SolverConfig plain = cfg;
  plain.diagnostics = false;
  out.trace = detail::make_trace(p, plain, xs, used_gammas);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vector& ref = i < reference.records.size() ? reference.records[i].x : reference.final_x;
    out.max_deviation = std::max(out.max_deviation, (xs[i] - ref).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace polypen
