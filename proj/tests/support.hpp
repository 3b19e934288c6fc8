// Shared fixtures and independent reference computations for the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polypen/minab.hpp"
#include "polypen/quadforms.hpp"

namespace support {

using polypen::Matrix;
using polypen::Problem;
using polypen::Vector;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix M(n, n);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) M(i, j++) = x;
    ++i;
  }
  return M;
}

inline Problem make(const Matrix& Q, const Vector& q, const Matrix& A, const Vector& v) {
  return Problem(polypen::QuadraticCost(Q, q), polypen::Ellipsoid(A, v));
}

// Q = [0.5], q = [-1], A = [1], v = [0]: f = x^2/4 - x on [-1, 1].
inline Problem boundary_1d() { return make(mat({{0.5}}), vec({-1.0}), mat({{1.0}}), vec({0.0})); }

inline Problem minab_problem(double a, double b, double alpha = 1.0) {
  return *polypen::to_problem(polypen::MinProblem(a, b, alpha));
}

// Q = diag(1, 0), q = 0: every point of C with x_0 = 0 is optimal. The
// A-norm projection of v onto that face is (0, 0.55).
inline Problem flat_face() {
  return make(mat({{1.0, 0.0}, {0.0, 0.0}}), vec({0.0, 0.0}), mat({{2.0, 0.5}, {0.5, 1.0}}),
              vec({0.5, 0.3}));
}

inline Problem tilted() {
  return make(mat({{1.0, 0.3}, {0.3, 0.5}}), vec({-3.0, 1.0}), mat({{2.0, 0.5}, {0.5, 1.5}}),
              vec({0.2, -0.1}));
}

// Cyclic Jacobi rotations; eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * (1.0 + a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Symmetrized central-difference Jacobian of a gradient map.
inline Eigen::MatrixXd fd_hessian(const std::function<Vector(const Vector&)>& grad, const Vector& x,
                                  double h) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    H.col(j) = (grad(xp) - grad(xm)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> N01;
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) G(i, j) = N01(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  return qr.householderQ();
}

// Random problem with PSD Q (possibly singular) and SPD A whose condition
// number stays at or below 3, the range where the invariance scaling exists
// for every m above the threshold.
inline Problem random_problem(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> N01;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Eigen::Index rank = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n + 1));
  Eigen::MatrixXd B(n, std::max<Eigen::Index>(rank, 1));
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j) B(i, j) = rank == 0 ? 0.0 : N01(rng);
  Matrix Q = B * B.transpose();

  const double scale = 0.5 + 1.5 * U(rng);
  Eigen::VectorXd lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) lambda(i) = scale * (1.0 + 2.0 * U(rng));
  const Eigen::MatrixXd R = random_orthogonal(rng, n);
  Matrix A = R * lambda.asDiagonal() * R.transpose();
  A = 0.5 * (A + A.transpose()).eval();

  Vector q(n), v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q(i) = 2.0 * N01(rng);
    v(i) = N01(rng);
  }
  return make(Q, q, A, v);
}

// A uniform-ish point of the ellipsoid (closed set): x = v + A^(-1/2) u rho.
inline Vector random_inside(std::mt19937_64& rng, const polypen::Ellipsoid& e) {
  std::normal_distribution<double> N01;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Eigen::Index n = e.dim();
  Vector u(n);
  for (Eigen::Index i = 0; i < n; ++i) u(i) = N01(rng);
  u /= u.norm();
  const double rho = std::pow(U(rng), 1.0 / static_cast<double>(n));
  return e.v() + e.inv_sqrt_A() * (u * rho);
}

struct Named {
  std::string name;
  Problem problem;
};

// Fixed problem set reused by the solver, circuit and acceptance tests.
inline std::vector<Named> suite() {
  std::vector<Named> out;
  out.push_back({"boundary_1d", boundary_1d()});
  out.push_back({"minab-2-6", minab_problem(2.0, 6.0)});
  out.push_back({"minab-6-2-a2", minab_problem(6.0, 2.0, 2.0)});
  out.push_back({"flat-face", flat_face()});
  out.push_back({"interior-2d", make(mat({{2.0, 0.0}, {0.0, 1.0}}), vec({-0.2, 0.1}),
                                     mat({{1.0, 0.0}, {0.0, 1.0}}), vec({0.0, 0.0}))});
  out.push_back({"tilted-2d", tilted()});
  out.push_back({"linear-3d", make(Matrix::Zero(3, 3), vec({1.0, -2.0, 0.5}),
                                   mat({{1.5, 0.2, 0.0}, {0.2, 1.0, 0.1}, {0.0, 0.1, 2.0}}),
                                   vec({1.0, 0.0, -1.0}))});
  std::mt19937_64 rng(20240607);
  const Eigen::Index dims[] = {2, 3, 5};
  for (int i = 0; i < 6; ++i) {
    out.push_back({"random-" + std::to_string(i), random_problem(rng, dims[i % 3])});
  }
  return out;
}

}  // namespace support
