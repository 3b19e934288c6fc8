#pragma once

#include <vector>

#include "polypen/quadforms.hpp"

// Reference solvers for checking the polynomial solver. They branch, divide
// and line-search freely and are not part of the add/multiply-only path.
namespace polypen::oracle {

enum class Method { closed_form_1d, lagrange_multiplier, bisection_1d, newton };

const char* to_string(Method m);

struct OracleResult {
  Vector x_star;
  double f_star = 0.0;
  Method method = Method::closed_form_1d;
  double residual = 0.0;  // KKT residual (constrained) or |grad J_k| (auxiliary)
};

// argmin f over the ellipsoid. Among multiple minimizers the one with the
// smallest g is returned. 1-D problems are solved in closed form; otherwise
// the KKT system is solved with a bisection on the Lagrange multiplier.
OracleResult solve_constrained(const Problem& p, double tol = 1e-12);

// argmin J_k = f + m g^k / k over all of R^n. Requires m > 0 or Q positive
// definite.
OracleResult solve_auxiliary(const Problem& p, double m, int k, double tol = 1e-12);

struct AuxiliaryRow {
  int k = 0;
  Vector x;
  double g = 0.0;
  double f = 0.0;
};

struct AuxiliaryReport {
  std::vector<AuxiliaryRow> rows;
  Vector x_star;
  bool contained = true;    // g(x_k*) <= 1 + tol for every k
  bool approaching = true;  // |x_kmax* - x*| below |x_1* - x*| (or both ~0)
};

AuxiliaryReport auxiliary_sequence_report(const Problem& p, double m, int k_max,
                                          double tol = 1e-8);

}  // namespace polypen::oracle
