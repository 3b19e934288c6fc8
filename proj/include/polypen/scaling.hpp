#pragma once

#include <cstdint>
#include <vector>

#include "polypen/quadforms.hpp"

namespace polypen {

struct ScalingOptions {
  int samples = 256;
  std::uint64_t seed = 0;
  double safety = 1.1;
  double m_cap = 1e12;
};

struct ScalingReport {
  double m_min_hat = 0.0;  // sampled max of -<grad g, grad f>/<grad g, grad g>
  double m_min = 0.0;      // safety * max(m_min_hat, 0)
  double m_inv = 0.0;      // safety * smallest sampled-feasible m for invariance
  int samples = 0;         // boundary points actually evaluated
  bool certified = false;  // exact boundary (n = 1) rather than sampled
};

// Pre-safety sampled value of -<grad g, grad f>/<grad g, grad g> maximized over
// the boundary samples. May be negative.
double sampled_m_min_hat(const Problem& p, int samples, std::uint64_t seed);

double estimate_m_min(const Problem& p, int samples, std::uint64_t seed, double safety = 1.1);
double estimate_m_inv(const Problem& p, int samples, std::uint64_t seed, double safety = 1.1,
                      double m_cap = 1e12);
ScalingReport estimate_scaling(const Problem& p, const ScalingOptions& opt = {});

enum class Requirement { minimum_inside, invariance };

struct RequirementViolation {
  Requirement which;
  Vector x;       // offending boundary sample
  double margin;  // negative: by how much the inequality fails
};

// Checks the acute-angle condition and the invariance condition at the
// boundary samples. An empty result means both hold everywhere sampled.
std::vector<RequirementViolation> verify_requirements(const Problem& p, double m, int samples,
                                                      std::uint64_t seed);

// Margin of the invariance inequality at one boundary point, in the squared
// form 2 r L_1(m) <h, grad g>/|grad g| - |h|^2 with h = grad f + m grad g.
double invariance_margin(const Problem& p, const Vector& x, double m);

}  // namespace polypen
