#pragma once

#include <optional>
#include <vector>

#include "polypen/solver.hpp"
#include "polypen/tape.hpp"

namespace polypen {

// Which problem inputs are ciphertexts. m, gamma_k, N and k-dependent
// coefficients are always public. x1 is only consulted when the config
// supplies an explicit start point; the default start is v itself.
struct SecretMarks {
  bool Q = true;
  bool q = true;
  bool A = true;
  bool v = true;
  bool x1 = true;

  static SecretMarks all_public() { return {false, false, false, false, false}; }
};

struct TapeSolveResult {
  SolveTrace trace;
  CircuitStats stats;
  int recomputed_max_level = 0;  // from the DAG, for cross-checking
  bool budget_exceeded = false;
};

// Runs the solver iteration through the arithmetic tape. Iterates are
// bitwise-equal to solve() with the same config.
TapeSolveResult tape_solve(const Problem& p, const SolverConfig& cfg, const SecretMarks& marks = {},
                           std::optional<int> level_budget = std::nullopt);

struct DepthRow {
  int k = 0;
  int per_step_level = 0;    // level(x_{k+1}) - level(x_k)
  int cumulative_level = 0;  // level(x_{k+1})
};

struct DepthPlan {
  PowerStrategy strategy = PowerStrategy::repeated_squaring;
  std::vector<DepthRow> rows;
  int total_level = 0;
};

// Multiplicative depth of N solver steps derived per step from the update
// formula, without running anything. Matches tape_solve's max_level for the
// same marks and strategy.
DepthPlan plan_depth(int n, int N, PowerStrategy strategy, const SecretMarks& marks = {});

// Depth of e^th power of a ciphertext under a strategy (e >= 1).
int power_depth(int e, PowerStrategy strategy);

struct FixedPointResult {
  SolveTrace trace;              // iterates decoded to double
  double max_deviation = 0.0;    // max |x_fixed - x_float| over all iterates
  std::optional<int> overflow_k;  // step at which the format overflowed
};

// Same iteration in signed 64-bit fixed point with `fraction_bits` in [8, 52].
// Overflow stops the run and is reported, not thrown.
FixedPointResult fixed_point_solve(const Problem& p, const SolverConfig& cfg, int fraction_bits);

}  // namespace polypen
