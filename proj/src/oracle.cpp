#include "polypen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polypen/error.hpp"

namespace polypen::oracle {

const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form_1d:
      return "closed-form-1d";
    case Method::lagrange_multiplier:
      return "lagrange-multiplier";
    case Method::bisection_1d:
      return "bisection-1d";
    case Method::newton:
      return "newton";
  }
  return "unknown";
}

namespace {

double g_of(const Problem& p, const Vector& x) {
  const Vector d = x - p.constraint().v();
  return d.dot(p.constraint().A() * d);
}

double f_of(const Problem& p, const Vector& x) {
  return 0.5 * x.dot(p.cost().Q() * x) + p.cost().q().dot(x);
}

double kkt_residual(const Problem& p, const Vector& x) {
  const Vector gf = p.cost().Q() * x + p.cost().q();
  const double g = g_of(p, x);
  if (g < 1.0 - 1e-9) {
    return gf.norm();
  }
  const Vector gg = 2.0 * (p.constraint().A() * (x - p.constraint().v()));
  const double lambda = std::max(0.0, -gg.dot(gf) / gg.squaredNorm());
  return (gf + lambda * gg).norm() + std::abs(g - 1.0) * (g > 1.0 ? 1.0 : 0.0);
}

OracleResult constrained_1d(const Problem& p) {
  const double Q = p.cost().Q()(0, 0);
  const double q = p.cost().q()(0);
  const double v = p.constraint().v()(0);
  const double half = 1.0 / std::sqrt(p.constraint().A()(0, 0));
  const double lo = v - half;
  const double hi = v + half;
  double x = v;
  if (Q > 0.0) {
    x = std::clamp(-q / Q, lo, hi);
  } else if (q > 0.0) {
    x = lo;
  } else if (q < 0.0) {
    x = hi;
  }
  OracleResult r;
  r.x_star = Vector::Constant(1, x);
  r.f_star = f_of(p, r.x_star);
  r.method = Method::closed_form_1d;
  r.residual = kkt_residual(p, r.x_star);
  return r;
}

// x(lambda) = argmin f + lambda g, lambda > 0.
Vector stationary_point(const Problem& p, double lambda) {
  const Matrix& A = p.constraint().A();
  const Eigen::MatrixXd H = p.cost().Q() + 2.0 * lambda * A;
  const Vector rhs = 2.0 * lambda * (A * p.constraint().v()) - p.cost().q();
  return Eigen::LLT<Eigen::MatrixXd>(H).solve(rhs);
}

}  // namespace

OracleResult solve_constrained(const Problem& p, double tol) {
  if (!(tol > 0.0)) {
    throw ValidationError("tol", "tolerance must be positive");
  }
  if (p.dim() == 1) {
    return constrained_1d(p);
  }
  const Matrix& Q = p.cost().Q();
  const Matrix& A = p.constraint().A();
  const Vector& v = p.constraint().v();

  OracleResult r;
  r.method = Method::lagrange_multiplier;

  // Interior candidate: the unconstrained minimizer closest to v in the
  // A-norm, i.e. y = x - v minimizing y^T A y subject to Q y = -(q + Q v).
  {
    const Vector rhs = -(p.cost().q() + Q * v);
    const Eigen::LLT<Eigen::MatrixXd> Allt{Eigen::MatrixXd(A)};
    const Eigen::MatrixXd AinvQ = Allt.solve(Eigen::MatrixXd(Q));
    const Eigen::MatrixXd M = Q * AinvQ;
    const Vector w = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(M).solve(rhs);
    const Vector y = AinvQ * w;
    const double scale = 1.0 + rhs.norm() + Q.norm();
    if ((Q * y - rhs).norm() <= 1e-10 * scale && y.dot(A * y) <= 1.0) {
      r.x_star = v + y;
      r.f_star = f_of(p, r.x_star);
      r.residual = kkt_residual(p, r.x_star);
      return r;
    }
  }

  // Boundary solution: g(x(lambda)) is decreasing in lambda; find g = 1.
  double lo = 0.0;
  double hi = 1.0;
  while (g_of(p, stationary_point(p, hi)) > 1.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) {
      throw NumericError("oracle could not bracket the Lagrange multiplier");
    }
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g_of(p, stationary_point(p, mid)) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol * 1e-3 * hi) break;
  }
  Vector x = stationary_point(p, hi);
  // Remove the residual radial error so the point sits on the boundary.
  x = v + (x - v) / std::sqrt(g_of(p, x));
  r.x_star = x;
  r.f_star = f_of(p, x);
  r.residual = kkt_residual(p, x);
  return r;
}

namespace {

using Real = long double;

// d/dx J_k in one dimension, in extended precision.
Real aux_derivative_1d(const Problem& p, double m, int k, Real x) {
  const Real Q = p.cost().Q()(0, 0);
  const Real q = p.cost().q()(0);
  const Real A = p.constraint().A()(0, 0);
  const Real d = x - static_cast<Real>(p.constraint().v()(0));
  const Real g = A * d * d;
  return Q * x + q + static_cast<Real>(m) * std::pow(g, k - 1) * 2 * A * d;
}

OracleResult auxiliary_1d(const Problem& p, double m, int k) {
  const Real v = p.constraint().v()(0);
  Real radius = 1.0L / std::sqrt(static_cast<Real>(p.constraint().A()(0, 0)));
  Real lo = v - radius;
  Real hi = v + radius;
  int guard = 0;
  while (aux_derivative_1d(p, m, k, lo) > 0 || aux_derivative_1d(p, m, k, hi) < 0) {
    radius *= 2;
    lo = v - radius;
    hi = v + radius;
    if (++guard > 200) {
      throw NumericError("auxiliary oracle could not bracket the minimizer");
    }
  }
  for (int it = 0; it < 400; ++it) {
    const Real mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    if (aux_derivative_1d(p, m, k, mid) > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  OracleResult r;
  r.method = Method::bisection_1d;
  r.x_star = Vector::Constant(1, static_cast<double>((lo + hi) / 2));
  r.f_star = f_of(p, r.x_star);
  r.residual = static_cast<double>(std::abs(aux_derivative_1d(p, m, k, (lo + hi) / 2)));
  return r;
}

double aux_value(const Problem& p, double m, int k, const Vector& x) {
  return f_of(p, x) + m * std::pow(g_of(p, x), k) / k;
}

Vector aux_gradient(const Problem& p, double m, int k, const Vector& x) {
  const Matrix& A = p.constraint().A();
  const Vector d = x - p.constraint().v();
  const double g = d.dot(A * d);
  return p.cost().Q() * x + p.cost().q() + m * std::pow(g, k - 1) * 2.0 * (A * d);
}

Eigen::MatrixXd aux_hessian(const Problem& p, double m, int k, const Vector& x) {
  const Matrix& A = p.constraint().A();
  const Vector d = x - p.constraint().v();
  const double g = d.dot(A * d);
  const Vector gg = 2.0 * (A * d);
  Eigen::MatrixXd H = p.cost().Q() + m * std::pow(g, k - 1) * 2.0 * A;
  if (k >= 2) {
    H += m * (k - 1) * std::pow(g, k - 2) * gg * gg.transpose();
  }
  return H;
}

}  // namespace

OracleResult solve_auxiliary(const Problem& p, double m, int k, double tol) {
  if (!(tol > 0.0)) {
    throw ValidationError("tol", "tolerance must be positive");
  }
  if (k < 1) {
    throw ValidationError("k", "penalty index must be >= 1");
  }
  if (!(m >= 0.0)) {
    throw ValidationError("m", "penalty scaling must be >= 0");
  }
  if (p.dim() == 1) {
    return auxiliary_1d(p, m, k);
  }
  Vector x = p.constraint().v();
  auto done = [&](const Vector& grad) {
    OracleResult r;
    r.method = Method::newton;
    r.x_star = x;
    r.f_star = f_of(p, x);
    r.residual = grad.norm();
    return r;
  };
  for (int it = 0; it < 20000; ++it) {
    const Vector grad = aux_gradient(p, m, k, x);
    if (grad.norm() == 0.0) return done(grad);
    // For large k the penalty gradient on a flat face of f is of order g^(k-1)
    // and can sit below any absolute tolerance far from the minimizer, so the
    // Newton step length decides convergence whenever it is available.
    Vector dir = -grad;
    bool have_newton = false;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(aux_hessian(p, m, k, x));
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const Vector newton = -ldlt.solve(grad);
      if (newton.allFinite() && newton.dot(grad) < 0.0) {
        dir = newton;
        have_newton = true;
      }
    }
    if (have_newton ? dir.norm() <= tol * (1.0 + x.norm()) : grad.norm() <= tol) {
      return done(grad);
    }
    const double J0 = aux_value(p, m, k, x);
    const double slope = grad.dot(dir);
    double t = 1.0;
    Vector next = x + dir;
    while (aux_value(p, m, k, next) > J0 + 1e-4 * t * slope) {
      t *= 0.5;
      next = x + t * dir;
      if (t < 1e-30) break;
    }
    if ((next - x).norm() == 0.0) {
      // No representable progress; accept if close enough to stationary.
      if (grad.norm() <= std::sqrt(tol)) return done(grad);
      throw NumericError("auxiliary oracle stalled with |grad| = " + std::to_string(grad.norm()));
    }
    x = next;
  }
  throw NumericError("auxiliary oracle did not converge");
}

AuxiliaryReport auxiliary_sequence_report(const Problem& p, double m, int k_max, double tol) {
  if (k_max < 1) {
    throw ValidationError("k_max", "must be >= 1");
  }
  AuxiliaryReport rep;
  rep.x_star = solve_constrained(p).x_star;
  for (int k = 1; k <= k_max; ++k) {
    const auto r = solve_auxiliary(p, m, k);
    AuxiliaryRow row{k, r.x_star, g_of(p, r.x_star), f_of(p, r.x_star)};
    if (row.g > 1.0 + tol) rep.contained = false;
    rep.rows.push_back(std::move(row));
  }
  const double first = (rep.rows.front().x - rep.x_star).norm();
  const double last = (rep.rows.back().x - rep.x_star).norm();
  rep.approaching = last < first || last <= 10.0 * tol;
  return rep;
}

}  // namespace polypen::oracle
