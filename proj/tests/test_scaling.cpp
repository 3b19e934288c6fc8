#include <doctest.h>

#include <random>

#include "polypen/error.hpp"
#include "polypen/scaling.hpp"
#include "support.hpp"

using namespace polypen;
using support::mat;
using support::vec;

TEST_CASE("estimate_m_min examples") {
  // max of -(2 * -1/2)/4 at x = 1 and -((-2)(-3/2))/4 at x = -1.
  CHECK(estimate_m_min(support::boundary_1d(), 2, 0, 1.0) == 0.25);
  CHECK(estimate_m_min(support::minab_problem(2.0, 6.0), 2, 0, 1.0) == 1.0);
  CHECK(estimate_m_min(support::minab_problem(6.0, 2.0), 2, 0, 1.0) == 1.0);
  // Unconstrained minimizer at the center: q = -Q v.
  const Matrix Q = mat({{2.0, 0.5}, {0.5, 1.0}});
  const Vector v = vec({0.3, -0.7});
  const Problem centered = support::make(Q, -(Q * v), mat({{1.0, 0.0}, {0.0, 2.0}}), v);
  CHECK(sampled_m_min_hat(centered, 128, 0) <= 1e-15);
  CHECK(estimate_m_min(centered, 128, 0) == 0.0);

  CHECK(estimate_m_min(support::boundary_1d(), 2, 0) == doctest::Approx(0.275).epsilon(1e-15));
  CHECK_THROWS_AS(estimate_m_min(support::boundary_1d(), 1, 0), ValidationError);
  CHECK_THROWS_AS(estimate_m_min(support::boundary_1d(), 2, 0, 0.9), ValidationError);
}

TEST_CASE("estimate_m_inv examples") {
  CHECK(estimate_m_inv(support::minab_problem(2.0, 6.0), 2, 0, 1.0) == 1.0);
  CHECK(estimate_m_inv(support::boundary_1d(), 2, 0, 1.0) == 0.25);
  const Problem zero = support::make(Matrix::Zero(2, 2), vec({0, 0}), mat({{1, 0}, {0, 1}}), vec({0, 0}));
  CHECK(estimate_m_inv(zero, 64, 0) == 0.0);

  const auto rep = estimate_scaling(support::boundary_1d());
  CHECK(rep.certified);
  CHECK(rep.m_min_hat == 0.25);
  CHECK(rep.m_inv == rep.m_min);
  CHECK(rep.samples == 2);
  CHECK_FALSE(estimate_scaling(support::flat_face()).certified);
}

TEST_CASE("verify_requirements examples") {
  CHECK(verify_requirements(support::boundary_1d(), 1.0, 2, 0).empty());
  CHECK(verify_requirements(support::minab_problem(2.0, 6.0), 1.0, 2, 0).empty());

  const auto v = verify_requirements(support::boundary_1d(), 0.1, 2, 0);
  bool found = false;
  for (const auto& r : v) {
    if (r.which == Requirement::minimum_inside && r.x(0) == 1.0) {
      found = true;
      CHECK(r.margin == doctest::Approx(0.1 - 0.25));
    }
  }
  CHECK(found);
  CHECK_THROWS_AS(verify_requirements(support::boundary_1d(), -1.0, 2, 0), ValidationError);
}

TEST_CASE("sampling consistency and estimator properties") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 12; ++trial) {
    const Eigen::Index n = 1 + trial % 5;
    const Problem p = support::random_problem(rng, n);
    const std::uint64_t seed = 17 + static_cast<std::uint64_t>(trial);

    double prev = -INFINITY;
    for (int s = 8; s <= 512; s *= 2) {
      const double hat = sampled_m_min_hat(p, s, seed);
      CHECK(hat >= prev);
      prev = hat;
    }

    ScalingOptions opt;
    opt.samples = 256;
    opt.seed = seed;
    const auto rep = estimate_scaling(p, opt);
    CHECK(rep.m_inv >= rep.m_min);
    CHECK(rep.m_min >= 0.0);
    if (n == 1) CHECK(rep.m_inv == rep.m_min);

    CHECK(verify_requirements(p, rep.m_inv, opt.samples, seed).empty());
    for (const Vector& x : boundary_samples(p.constraint(), opt.samples, seed)) {
      const double margin = invariance_margin(p, x, rep.m_inv);
      CHECK(margin >= -1e-12 * (1.0 + std::abs(margin)));
    }
  }
}

TEST_CASE("invariance scaling is unavailable for strongly elongated ellipsoids") {
  // With sigma_max/sigma_min(A) above 4 the right side grows like 4 m sqrt(smin)
  // smax/smax while the left grows like 4 m^2 |A d|^2; large m cannot help.
  const Problem thin = support::make(Matrix::Zero(2, 2), vec({1.0, 1.0}),
                                     mat({{1.0, 0.0}, {0.0, 25.0}}), vec({0.0, 0.0}));
  ScalingOptions opt;
  opt.m_cap = 1e6;
  CHECK_THROWS_AS(estimate_scaling(thin, opt), NumericError);
}
