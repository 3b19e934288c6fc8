#include "polypen/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polypen/error.hpp"

namespace polypen {

namespace {

struct BoundaryPoint {
  Vector x;
  Vector gf;
  Vector gg;
};

std::vector<BoundaryPoint> evaluate_boundary(const Problem& p, int samples, std::uint64_t seed) {
  if (samples < 2) {
    throw ValidationError("samples", "need at least 2 boundary samples");
  }
  std::vector<BoundaryPoint> pts;
  for (auto& x : boundary_samples(p.constraint(), samples, seed)) {
    BoundaryPoint b{x, grad_f(p, x), grad_g(p, x)};
    if (b.gg.squaredNorm() == 0.0) {
      throw NumericError("grad g vanished at a boundary sample");
    }
    pts.push_back(std::move(b));
  }
  return pts;
}

double min_ratio(const BoundaryPoint& b) { return -b.gg.dot(b.gf) / b.gg.squaredNorm(); }

// Squared-form invariance margin; also returns a magnitude for tolerancing.
double margin_at(const BoundaryPoint& b, double m, double two_r_L1, double* scale) {
  const Vector h = b.gf + m * b.gg;
  const double lhs = h.squaredNorm();
  const double rhs = two_r_L1 * h.dot(b.gg) / b.gg.norm();
  if (scale != nullptr) {
    *scale = lhs + std::abs(rhs);
  }
  return rhs - lhs;
}

double two_r_L1(const Problem& p, double m) {
  const double r = spectral_bounds(p.constraint().A()).curvature_radius;
  const double L1 = spectral_bounds(p.cost().Q() + 2.0 * m * p.constraint().A()).sigma_max;
  return 2.0 * r * L1;
}

bool invariance_holds(const Problem& p, const std::vector<BoundaryPoint>& pts, double m) {
  const double c = two_r_L1(p, m);
  for (const auto& b : pts) {
    double scale = 0.0;
    if (margin_at(b, m, c, &scale) < -1e-12 * scale) {
      return false;
    }
  }
  return true;
}

double m_min_hat_of(const std::vector<BoundaryPoint>& pts) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& b : pts) {
    best = std::max(best, min_ratio(b));
  }
  return best;
}

void require_safety(double safety) {
  if (!(safety >= 1.0) || !std::isfinite(safety)) {
    throw ValidationError("safety", "safety factor must be finite and >= 1");
  }
}

double smallest_invariant_m(const Problem& p, const std::vector<BoundaryPoint>& pts, double m0,
                            double m_cap) {
  if (invariance_holds(p, pts, m0)) {
    return m0;
  }
  double lo = m0;
  double hi = m0;
  if (hi <= 0.0) {
    double scale = 0.0;
    for (const auto& b : pts) {
      scale = std::max(scale, b.gf.norm() / b.gg.norm());
    }
    hi = scale > 0.0 ? 1e-6 * scale : 1e-6;
  }
  while (!invariance_holds(p, pts, hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > m_cap) {
      throw NumericError("no m below " + std::to_string(m_cap) +
                         " satisfies the invariance condition at the sampled boundary");
    }
  }
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (invariance_holds(p, pts, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

double sampled_m_min_hat(const Problem& p, int samples, std::uint64_t seed) {
  return m_min_hat_of(evaluate_boundary(p, samples, seed));
}

double estimate_m_min(const Problem& p, int samples, std::uint64_t seed, double safety) {
  require_safety(safety);
  return safety * std::max(0.0, sampled_m_min_hat(p, samples, seed));
}

double estimate_m_inv(const Problem& p, int samples, std::uint64_t seed, double safety,
                      double m_cap) {
  ScalingOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  opt.safety = safety;
  opt.m_cap = m_cap;
  return estimate_scaling(p, opt).m_inv;
}

ScalingReport estimate_scaling(const Problem& p, const ScalingOptions& opt) {
  require_safety(opt.safety);
  const auto pts = evaluate_boundary(p, opt.samples, opt.seed);
  ScalingReport rep;
  rep.samples = static_cast<int>(pts.size());
  rep.m_min_hat = m_min_hat_of(pts);
  const double m0 = std::max(0.0, rep.m_min_hat);
  rep.m_min = opt.safety * m0;
  if (p.dim() == 1) {
    // Both requirements coincide in one dimension and the boundary is exact.
    rep.m_inv = rep.m_min;
    rep.certified = true;
    return rep;
  }
  double m = opt.safety * smallest_invariant_m(p, pts, m0, opt.m_cap);
  // The feasible set in m is not known to be an interval; re-verify after the
  // safety factor and walk upward if needed.
  while (!invariance_holds(p, pts, m)) {
    m *= 1.1;
    if (m > opt.m_cap) {
      throw NumericError("invariance condition lost above the safety-scaled estimate");
    }
  }
  rep.m_inv = std::max(m, rep.m_min);
  return rep;
}

double invariance_margin(const Problem& p, const Vector& x, double m) {
  const BoundaryPoint b{x, grad_f(p, x), grad_g(p, x)};
  return margin_at(b, m, two_r_L1(p, m), nullptr);
}

std::vector<RequirementViolation> verify_requirements(const Problem& p, double m, int samples,
                                                      std::uint64_t seed) {
  if (!(m >= 0.0)) {
    throw ValidationError("m", "penalty scaling must be >= 0");
  }
  const auto pts = evaluate_boundary(p, samples, seed);
  const double c = two_r_L1(p, m);
  std::vector<RequirementViolation> out;
  for (const auto& b : pts) {
    const double ratio = min_ratio(b);
    const double m1 = m - ratio;
    if (m1 < -1e-12 * (1.0 + std::abs(ratio))) {
      out.push_back({Requirement::minimum_inside, b.x, m1});
    }
    double scale = 0.0;
    const double m2 = margin_at(b, m, c, &scale);
    if (m2 < -1e-12 * scale) {
      out.push_back({Requirement::invariance, b.x, m2});
    }
  }
  return out;
}

}  // namespace polypen
