#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace polypen {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Inputs whose asymmetry max|M - M^T| stays below this are symmetrized
// silently; above it they are still symmetrized but the residual is kept so
// front ends can warn. Above kAsymmetryReject the matrix is rejected.
inline constexpr double kAsymmetryWarn = 1e-9;
inline constexpr double kAsymmetryReject = 1e-6;

// f(x) = 1/2 x^T Q x + q^T x with Q symmetric positive semidefinite.
class QuadraticCost {
public:
  QuadraticCost(Matrix Q, Vector q);

  const Matrix& Q() const noexcept { return Q_; }
  const Vector& q() const noexcept { return q_; }
  Eigen::Index dim() const noexcept { return q_.size(); }
  // max|Q - Q^T| of the matrix as supplied, before symmetrization.
  double asymmetry() const noexcept { return asymmetry_; }

private:
  Matrix Q_;
  Vector q_;
  double asymmetry_ = 0.0;
};

// g(x) = (x - v)^T A (x - v) with A symmetric positive definite; the
// constraint set is {x : g(x) <= 1}.
class Ellipsoid {
public:
  Ellipsoid(Matrix A, Vector v);

  const Matrix& A() const noexcept { return A_; }
  const Vector& v() const noexcept { return v_; }
  Eigen::Index dim() const noexcept { return v_.size(); }
  double asymmetry() const noexcept { return asymmetry_; }

  // A^(-1/2), from the eigendecomposition computed during validation.
  const Matrix& inv_sqrt_A() const noexcept { return inv_sqrt_A_; }

private:
  Matrix A_;
  Vector v_;
  Matrix inv_sqrt_A_;
  double asymmetry_ = 0.0;
};

class Problem {
public:
  Problem(QuadraticCost cost, Ellipsoid constraint);

  const QuadraticCost& cost() const noexcept { return cost_; }
  const Ellipsoid& constraint() const noexcept { return constraint_; }
  Eigen::Index dim() const noexcept { return cost_.dim(); }

private:
  QuadraticCost cost_;
  Ellipsoid constraint_;
};

struct SpectralBounds {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double curvature_radius = 0.0;  // sqrt(sigma_min) / sigma_max
};

enum class Membership { interior, boundary, exterior };

double eval_f(const Problem& p, const Vector& x);
Vector grad_f(const Problem& p, const Vector& x);
double eval_g(const Problem& p, const Vector& x);
Vector grad_g(const Problem& p, const Vector& x);

Membership membership(const Problem& p, const Vector& x, double tol);

// Extreme eigenvalues of a symmetric matrix. Throws NumericError if the
// eigensolver does not converge.
SpectralBounds spectral_bounds(const Matrix& M);

// Deterministic points on the ellipsoid surface, x = v + A^(-1/2) u with
// |u| = 1. Directions come from a seeded Kronecker sequence, so the first
// `count` points of a larger request equal a smaller request with the same
// seed. In 1-D the boundary is {v - a, v + a} and exactly those two are
// returned.
std::vector<Vector> boundary_samples(const Ellipsoid& e, int count, std::uint64_t seed);

// Unit directions underlying boundary_samples, exposed for interior sampling.
std::vector<Vector> sphere_directions(Eigen::Index n, int count, std::uint64_t seed);

namespace detail {
void require_dim(const Vector& x, Eigen::Index n, const char* field);
Matrix symmetrize(const Matrix& M, const char* field, double* asymmetry);
}  // namespace detail

}  // namespace polypen
