#include "polypen/quadforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "polypen/error.hpp"

namespace polypen {

namespace detail {

void require_dim(const Vector& x, Eigen::Index n, const char* field) {
  if (x.size() != n) {
    throw ValidationError(field, "expected dimension " + std::to_string(n) + ", got " +
                                     std::to_string(x.size()));
  }
}

Matrix symmetrize(const Matrix& M, const char* field, double* asymmetry) {
  if (M.rows() != M.cols()) {
    throw ValidationError(field, "matrix must be square");
  }
  if (M.size() == 0) {
    throw ValidationError(field, "matrix must be non-empty");
  }
  if (!M.allFinite()) {
    throw ValidationError(field, "matrix has non-finite entries");
  }
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (asym > kAsymmetryReject * scale) {
    throw ValidationError(field, "matrix is not symmetric (max asymmetry " + std::to_string(asym) +
                                     ")");
  }
  if (asymmetry != nullptr) {
    *asymmetry = asym;
  }
  return 0.5 * (M + M.transpose());
}

}  // namespace detail

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_of(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver{Eigen::MatrixXd(M)};
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver did not converge");
  }
  return solver;
}

}  // namespace

QuadraticCost::QuadraticCost(Matrix Q, Vector q) : q_(std::move(q)) {
  Q_ = detail::symmetrize(Q, "Q", &asymmetry_);
  detail::require_dim(q_, Q_.rows(), "q");
  if (!q_.allFinite()) {
    throw ValidationError("q", "vector has non-finite entries");
  }
  const auto eig = eigen_of(Q_);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (lo < -1e-10 * hi) {
    throw ValidationError("Q", "matrix is not positive semidefinite (smallest eigenvalue " +
                                   std::to_string(lo) + ")");
  }
}

Ellipsoid::Ellipsoid(Matrix A, Vector v) : v_(std::move(v)) {
  A_ = detail::symmetrize(A, "A", &asymmetry_);
  detail::require_dim(v_, A_.rows(), "v");
  if (!v_.allFinite()) {
    throw ValidationError("v", "vector has non-finite entries");
  }
  const auto eig = eigen_of(A_);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (lambda.minCoeff() <= 1e-10) {
    throw ValidationError("A", "matrix is not positive definite (smallest eigenvalue " +
                                   std::to_string(lambda.minCoeff()) + ")");
  }
  const Eigen::MatrixXd& V = eig.eigenvectors();
  inv_sqrt_A_ = V * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
}

Problem::Problem(QuadraticCost cost, Ellipsoid constraint)
    : cost_(std::move(cost)), constraint_(std::move(constraint)) {
  if (cost_.dim() != constraint_.dim()) {
    throw ValidationError("A", "cost has dimension " + std::to_string(cost_.dim()) +
                                   " but constraint has dimension " +
                                   std::to_string(constraint_.dim()));
  }
}

double eval_f(const Problem& p, const Vector& x) {
  detail::require_dim(x, p.dim(), "x");
  const auto& c = p.cost();
  return 0.5 * x.dot(c.Q() * x) + c.q().dot(x);
}

Vector grad_f(const Problem& p, const Vector& x) {
  detail::require_dim(x, p.dim(), "x");
  return p.cost().Q() * x + p.cost().q();
}

double eval_g(const Problem& p, const Vector& x) {
  detail::require_dim(x, p.dim(), "x");
  const Vector d = x - p.constraint().v();
  return d.dot(p.constraint().A() * d);
}

Vector grad_g(const Problem& p, const Vector& x) {
  detail::require_dim(x, p.dim(), "x");
  return 2.0 * (p.constraint().A() * (x - p.constraint().v()));
}

Membership membership(const Problem& p, const Vector& x, double tol) {
  if (!(tol >= 0.0)) {
    throw ValidationError("tol", "tolerance must be nonnegative");
  }
  const double g = eval_g(p, x);
  if (std::abs(g - 1.0) <= tol) return Membership::boundary;
  return g < 1.0 ? Membership::interior : Membership::exterior;
}

SpectralBounds spectral_bounds(const Matrix& M) {
  if (M.rows() != M.cols() || M.size() == 0) {
    throw ValidationError("M", "matrix must be square and non-empty");
  }
  if (!M.allFinite()) {
    throw ValidationError("M", "matrix has non-finite entries");
  }
  const auto eig = eigen_of(M);
  SpectralBounds b;
  b.sigma_max = std::max(0.0, eig.eigenvalues().maxCoeff());
  b.sigma_min = std::max(0.0, eig.eigenvalues().minCoeff());
  b.curvature_radius = b.sigma_max > 0.0 ? std::sqrt(b.sigma_min) / b.sigma_max : 0.0;
  return b;
}

std::vector<Vector> sphere_directions(Eigen::Index n, int count, std::uint64_t seed) {
  if (n < 1) {
    throw ValidationError("n", "dimension must be positive");
  }
  if (count < 1) {
    throw ValidationError("count", "sample count must be positive");
  }
  std::vector<Vector> out;
  if (n == 1) {
    out.push_back(Vector::Constant(1, -1.0));
    out.push_back(Vector::Constant(1, 1.0));
    return out;
  }

  // Box-Muller consumes pairs of uniforms; n = 2 uses the angle directly.
  const Eigen::Index dims = n == 2 ? 1 : 2 * ((n + 1) / 2);

  // Generalized golden ratio: the positive root of x^(d+1) = x + 1.
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) {
    phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(dims + 1));
  }
  std::vector<double> step(dims);
  std::vector<double> offset(dims);
  std::mt19937_64 rng(seed);
  for (Eigen::Index j = 0; j < dims; ++j) {
    step[j] = std::fmod(std::pow(1.0 / phi, static_cast<double>(j + 1)), 1.0);
    offset[j] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

  constexpr double two_pi = 2.0 * std::numbers::pi;
  out.reserve(count);
  for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
    std::vector<double> u(dims);
    for (Eigen::Index j = 0; j < dims; ++j) {
      const double t = offset[j] + static_cast<double>(i) * step[j];
      u[j] = t - std::floor(t);
    }
    Vector dir(n);
    if (n == 2) {
      dir << std::cos(two_pi * u[0]), std::sin(two_pi * u[0]);
    } else {
      Vector gauss(dims);
      for (Eigen::Index j = 0; j < dims; j += 2) {
        const double r = std::sqrt(-2.0 * std::log(1.0 - u[j]));
        gauss[j] = r * std::cos(two_pi * u[j + 1]);
        gauss[j + 1] = r * std::sin(two_pi * u[j + 1]);
      }
      dir = gauss.head(n);
    }
    const double norm = dir.norm();
    if (norm < 1e-12) {
      continue;
    }
    out.push_back(dir / norm);
  }
  return out;
}

std::vector<Vector> boundary_samples(const Ellipsoid& e, int count, std::uint64_t seed) {
  const auto dirs = sphere_directions(e.dim(), count, seed);
  std::vector<Vector> out;
  out.reserve(dirs.size());
  for (const auto& u : dirs) {
    Vector d = e.inv_sqrt_A() * u;
    // Pull back onto g = 1 exactly up to one rounding.
    const double g = d.dot(e.A() * d);
    d /= std::sqrt(g);
    out.push_back(e.v() + d);
  }
  return out;
}

}  // namespace polypen
