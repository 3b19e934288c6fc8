#include <doctest.h>

#include <cstring>

#include "polypen/circuit.hpp"
#include "polypen/error.hpp"
#include "polypen/fixed_point.hpp"
#include "polypen/minab.hpp"
#include "polypen/scaling.hpp"
#include "support.hpp"

using namespace polypen;
using support::mat;
using support::vec;

namespace {

template <class T>
concept Divisible = requires(T a, T b) { a / b; };
template <class T>
concept Comparable = requires(T a, T b) { a < b; };
template <class T>
concept Testable = requires(T a) { static_cast<bool>(a); };
template <class T>
concept EqualityComparable = requires(T a, T b) { a == b; };

static_assert(!Divisible<TapeValue>);
static_assert(!Comparable<TapeValue>);
static_assert(!Testable<TapeValue>);
static_assert(!EqualityComparable<TapeValue>);

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_iterates(const SolveTrace& a, const SolveTrace& b) {
  if (a.records.size() != b.records.size()) return false;
  auto eq = [](const Vector& x, const Vector& y) {
    if (x.size() != y.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (!same_bits(x(i), y(i))) return false;
    return true;
  };
  for (std::size_t i = 0; i < a.records.size(); ++i)
    if (!eq(a.records[i].x, b.records[i].x)) return false;
  return eq(a.final_x, b.final_x);
}

SolverConfig config(double m, int N, PowerStrategy s = PowerStrategy::repeated_squaring) {
  SolverConfig cfg;
  cfg.m = m;
  cfg.iterations = N;
  cfg.power = s;
  return cfg;
}

}  // namespace

TEST_CASE("tape level law and counts") {
  Tape tape;
  const TapeValue a = tape.input(2.0, true);
  const TapeValue b = tape.input(3.0, true);
  const TapeValue c = tape.input(5.0, false);
  const TapeValue ab = a * b;
  CHECK(ab.value() == 6.0);
  CHECK(ab.level() == 1);
  const TapeValue abc = ab * c;
  CHECK(abc.level() == 1);
  const TapeValue sq = abc * ab;
  CHECK(sq.level() == 2);
  const TapeValue s = sq + a;
  CHECK(s.level() == 2);
  const TapeValue neg = a - b;
  CHECK(neg.value() == -1.0);
  CHECK(neg.level() == 0);
  const TapeValue pub = c * c + c;
  CHECK(pub.level() == 0);
  CHECK_FALSE(pub.secret());

  const auto& st = tape.stats();
  CHECK(st.ct_ct_muls == 2);
  CHECK(st.ct_pt_muls == 2);  // ab * c, b * (-1)
  CHECK(st.adds == 2);        // sq + a, a + (-b)
  CHECK(st.plain_ops == 2);   // c * c, (c*c) + c
  CHECK(st.max_level == 2);
  CHECK(tape.recompute_max_level() == 2);
  CHECK(st.non_polynomial_events == 0);
}

TEST_CASE("non-polynomial operations are refused and counted") {
  Tape tape;
  const TapeValue a = tape.input(2.0, true);
  const TapeValue b = tape.input(3.0, true);
  CHECK_THROWS_AS(tape.divide(a, b), NonPolynomialOperation);
  CHECK_THROWS_AS(tape.less(a, b), NonPolynomialOperation);
  CHECK(tape.stats().non_polynomial_events == 2);
}

TEST_CASE("level budget is reported, not fatal") {
  const auto r = tape_solve(support::boundary_1d(), config(1.0, 2), {}, 2);
  CHECK(r.budget_exceeded);
  CHECK(r.stats.max_level == 4);
  CHECK_FALSE(tape_solve(support::boundary_1d(), config(1.0, 2), {}, 4).budget_exceeded);
}

TEST_CASE("tape_solve examples") {
  // min(2, 6) through the general solver with the min(a,b) marks: v and A
  // secret, the constant cost public.
  SecretMarks minab_marks;
  minab_marks.Q = false;
  minab_marks.q = false;
  const auto r = tape_solve(support::minab_problem(2.0, 6.0), config(1.0, 1), minab_marks);
  CHECK(std::abs(r.trace.final_x(0) - 2.0) <= 1e-12);
  // k = 1: A (x - v) is the only ciphertext product.
  CHECK(r.stats.ct_ct_muls == 1);
  CHECK(r.stats.max_level == 1);

  // 1-D boundary problem, all inputs secret, one step. Pinned for the documented order:
  // d = x + v*(-1); Ad = A d; gf = Q x + q; grad = gf + Ad*(2m);
  // x = x + (grad*gamma)*(-1).
  const auto f1 = tape_solve(support::boundary_1d(), config(1.0, 1));
  CHECK(f1.trace.final_x(0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(f1.stats.adds == 4);
  CHECK(f1.stats.ct_ct_muls == 2);
  CHECK(f1.stats.ct_pt_muls == 4);
  CHECK(f1.stats.max_level == 1);
  CHECK(f1.stats.plain_ops == 0);

  // k = 2 adds g = d Ad and g^1 Ad.
  const auto f2 = tape_solve(support::boundary_1d(), config(1.0, 2));
  CHECK(f2.stats.adds == 8);
  CHECK(f2.stats.ct_ct_muls == 6);
  CHECK(f2.stats.ct_pt_muls == 8);
  CHECK(f2.stats.max_level == 4);

  const auto pub = tape_solve(support::tilted(), config(1.0, 12), SecretMarks::all_public());
  CHECK(pub.stats.max_level == 0);
  CHECK(pub.stats.ct_ct_muls == 0);
  CHECK(pub.stats.ct_pt_muls == 0);
  CHECK(pub.stats.adds == 0);
  CHECK(pub.stats.plain_ops > 0);

  const auto none = tape_solve(support::boundary_1d(), config(1.0, 0));
  CHECK(none.stats.adds == 0);
  CHECK(none.stats.ct_ct_muls == 0);
  CHECK(none.stats.ct_pt_muls == 0);
  CHECK(none.stats.max_level == 0);
  CHECK(none.trace.final_x(0) == 0.0);

  // Sanity bound from the stats definition.
  CHECK(f2.stats.max_level <= static_cast<int>(f2.stats.adds + f2.stats.ct_ct_muls));
}

TEST_CASE("tape_solve equals solve bitwise, stays polynomial, and its levels recompute") {
  for (const auto& [name, p] : support::suite()) {
    CAPTURE(name);
    const double m = estimate_m_inv(p, 64, 0);
    for (auto strategy : {PowerStrategy::repeated_squaring, PowerStrategy::sequential}) {
      const auto cfg = config(m, 40, strategy);
      const auto plain = solve(p, cfg);
      const auto taped = tape_solve(p, cfg);
      CHECK(same_iterates(plain, taped.trace));
      CHECK(taped.stats.non_polynomial_events == 0);
      CHECK(taped.recomputed_max_level == taped.stats.max_level);
    }
    // Explicit start point as a ciphertext.
    SolverConfig cfg = config(m, 10);
    cfg.x1 = p.constraint().v();
    CHECK(same_iterates(solve(p, cfg), tape_solve(p, cfg).trace));
  }
}

TEST_CASE("power_depth") {
  CHECK(power_depth(1, PowerStrategy::sequential) == 0);
  CHECK(power_depth(1, PowerStrategy::repeated_squaring) == 0);
  CHECK(power_depth(2, PowerStrategy::repeated_squaring) == 1);
  CHECK(power_depth(5, PowerStrategy::repeated_squaring) == 3);
  CHECK(power_depth(8, PowerStrategy::repeated_squaring) == 3);
  CHECK(power_depth(9, PowerStrategy::sequential) == 8);
  CHECK_THROWS_AS(power_depth(0, PowerStrategy::sequential), ValidationError);
}

TEST_CASE("plan_depth matches measured levels") {
  const Problem p1 = support::boundary_1d();
  const Problem p2 = support::tilted();
  for (const Problem* p : {&p1, &p2}) {
    const int n = static_cast<int>(p->dim());
    for (int N : {1, 2, 4, 8, 13}) {
      for (auto strategy : {PowerStrategy::repeated_squaring, PowerStrategy::sequential}) {
        CAPTURE(n);
        CAPTURE(N);
        const auto plan = plan_depth(n, N, strategy);
        const auto measured = tape_solve(*p, config(1.0, N, strategy));
        CHECK(plan.total_level == measured.stats.max_level);
        REQUIRE(plan.rows.size() == static_cast<std::size_t>(N));
        int cumulative = 0;
        for (const auto& row : plan.rows) {
          cumulative += row.per_step_level;
          CHECK(row.cumulative_level == cumulative);
        }
      }
    }
  }

  // Other secrecy patterns.
  SecretMarks a_public;
  a_public.A = false;
  SecretMarks cost_public;
  cost_public.Q = false;
  cost_public.q = false;
  for (const SecretMarks& marks : {a_public, cost_public, SecretMarks::all_public()}) {
    for (int N : {1, 3, 6}) {
      CHECK(plan_depth(2, N, PowerStrategy::repeated_squaring, marks).total_level ==
            tape_solve(p2, config(1.0, N), marks).stats.max_level);
    }
  }

  CHECK(plan_depth(1, 1, PowerStrategy::repeated_squaring).rows.size() == 1);
  CHECK(plan_depth(1, 2, PowerStrategy::repeated_squaring).total_level ==
        plan_depth(1, 2, PowerStrategy::sequential).total_level);
  CHECK(plan_depth(2, 8, PowerStrategy::repeated_squaring).total_level <=
        plan_depth(2, 8, PowerStrategy::sequential).total_level);
  CHECK_THROWS_AS(plan_depth(1, 0, PowerStrategy::sequential), ValidationError);
  CHECK_THROWS_AS(plan_depth(0, 1, PowerStrategy::sequential), ValidationError);
}

TEST_CASE("min(a,b) circuit run") {
  const MinProblem mp(2.0, 6.0, 1.0);
  const auto plain = run_minab(mp, 1);
  const auto circ = run_minab(mp, 1, true);
  REQUIRE(circ.stats.has_value());
  CHECK(same_bits(plain.result, circ.result));
  CHECK(std::abs(circ.result - 2.0) <= 1e-12);
  // x_1 = (a+b)*0.5, then (a-b)^2 is the only ciphertext product at k = 1.
  CHECK(circ.stats->ct_ct_muls == 1);
  CHECK(circ.stats->adds == 6);
  CHECK(circ.stats->ct_pt_muls == 8);
  CHECK(circ.stats->max_level == 1);
  CHECK(circ.stats->non_polynomial_events == 0);

  const MinProblem mp2(6.0, 2.0, 2.0);
  const auto p20 = run_minab(mp2, 20);
  const auto c20 = run_minab(mp2, 20, true);
  for (std::size_t i = 0; i < p20.xs.size(); ++i) CHECK(same_bits(p20.xs[i], c20.xs[i]));
  CHECK(c20.recomputed_max_level == c20.stats->max_level);
}

TEST_CASE("fixed_point_solve") {
  const Problem mp = support::minab_problem(2.0, 6.0);
  const auto fx = fixed_point_solve(mp, config(1.0, 10), 30);
  CHECK_FALSE(fx.overflow_k.has_value());
  const auto ref = solve(mp, config(1.0, 10));
  CHECK(std::abs(fx.trace.final_x(0) - ref.final_x(0)) <= 1e-6);
  CHECK(fx.max_deviation <= 1e-6);

  const auto f52 = fixed_point_solve(support::boundary_1d(), config(1.0, 100), 52);
  CHECK(f52.max_deviation <= 1e-12);

  const auto f8 = fixed_point_solve(support::boundary_1d(), config(1.0, 100), 8);
  CHECK(std::isfinite(f8.max_deviation));
  CHECK(f8.max_deviation > 0.0);

  // Q x = 4000 does not fit 11 integer bits. One step only: the float
  // reference diverges afterwards.
  const Problem big = support::make(mat({{2.0}}), vec({0.0}), mat({{1.0}}), vec({2000.0}));
  const auto ov = fixed_point_solve(big, config(1.0, 1), 52);
  CHECK(ov.overflow_k == 1);
  const Problem huge = support::make(mat({{1.0}}), vec({0.0}), mat({{1.0}}), vec({5000.0}));
  const auto ov0 = fixed_point_solve(huge, config(1.0, 1), 52);
  CHECK(ov0.overflow_k == 0);

  CHECK_THROWS_AS(fixed_point_solve(mp, config(1.0, 1), 7), ValidationError);
  CHECK_THROWS_AS(fixed_point_solve(mp, config(1.0, 1), 53), ValidationError);
}

TEST_CASE("Fixed arithmetic") {
  const Fixed a = Fixed::from_double(1.5, 20);
  const Fixed b = Fixed::from_double(-0.25, 20);
  CHECK((a + b).to_double() == 1.25);
  CHECK((a - b).to_double() == 1.75);
  CHECK((a * b).to_double() == -0.375);
  CHECK((a * 3.0).to_double() == 4.5);
  CHECK_THROWS_AS(Fixed::from_double(1e300, 20), FixedOverflow);
  CHECK_THROWS_AS(Fixed::from_double(1.0, 63), ValidationError);
  const Fixed big = Fixed::from_double(3.0e9, 30);
  CHECK_THROWS_AS(big * big, FixedOverflow);
}
