#pragma once

// The gradient step shared by every execution mode. It is written once over a
// scalar type T so that plain doubles, tape values and fixed-point numbers run
// the exact same sequence of operations. T needs +, -, * between T values and
// * with a double (a public constant).

#include <cstddef>
#include <optional>
#include <vector>

#include "polypen/penalty.hpp"
#include "polypen/quadforms.hpp"

namespace polypen::detail {

template <class T>
struct KernelData {
  std::size_t n = 0;
  std::vector<T> Q;  // row-major n*n
  std::vector<T> q;
  std::vector<T> A;  // row-major n*n
  std::vector<T> v;
};

// lift(field, value) converts one problem entry; field is one of 'Q','q','A','v'.
template <class T, class Lift>
KernelData<T> lift_problem(const Problem& p, Lift&& lift) {
  KernelData<T> d;
  d.n = static_cast<std::size_t>(p.dim());
  const auto& Q = p.cost().Q();
  const auto& A = p.constraint().A();
  for (std::size_t i = 0; i < d.n; ++i) {
    for (std::size_t j = 0; j < d.n; ++j) {
      d.Q.push_back(lift('Q', Q(i, j)));
      d.A.push_back(lift('A', A(i, j)));
    }
    d.q.push_back(lift('q', p.cost().q()(i)));
    d.v.push_back(lift('v', p.constraint().v()(i)));
  }
  return d;
}

inline KernelData<double> plain_data(const Problem& p) {
  return lift_problem<double>(p, [](char, double x) { return x; });
}

// base^e, e >= 1. Never multiplies by an implicit 1.
template <class T>
T power(const T& base, int e, PowerStrategy strategy) {
  if (strategy == PowerStrategy::sequential) {
    T r = base;
    for (int i = 1; i < e; ++i) {
      r = r * base;
    }
    return r;
  }
  std::optional<T> result;
  T b = base;
  while (true) {
    if (e & 1) {
      result = result ? *result * b : b;
    }
    e >>= 1;
    if (e == 0) break;
    b = b * b;
  }
  return *result;
}

// grad J_k(x) = Qx + q + 2m g(x)^(k-1) A(x - v), evaluated in a fixed order.
// g is only formed for k >= 2; for k = 1 the power is the public constant 1.
template <class T>
std::vector<T> grad_J(const KernelData<T>& data, const std::vector<T>& x, int k, double m,
                      PowerStrategy strategy) {
  const std::size_t n = data.n;
  std::vector<T> d;
  d.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.push_back(x[i] - data.v[i]);
  }
  std::vector<T> Ad;
  std::vector<T> gf;
  Ad.reserve(n);
  gf.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    T s = data.A[i * n] * d[0];
    T t = data.Q[i * n] * x[0];
    for (std::size_t j = 1; j < n; ++j) {
      s = s + data.A[i * n + j] * d[j];
      t = t + data.Q[i * n + j] * x[j];
    }
    Ad.push_back(s);
    gf.push_back(t + data.q[i]);
  }
  const double two_m = 2.0 * m;
  std::vector<T> grad;
  grad.reserve(n);
  if (k == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      grad.push_back(gf[i] + Ad[i] * two_m);
    }
    return grad;
  }
  T g = d[0] * Ad[0];
  for (std::size_t i = 1; i < n; ++i) {
    g = g + d[i] * Ad[i];
  }
  const T pw = power(g, k - 1, strategy);
  for (std::size_t i = 0; i < n; ++i) {
    grad.push_back(gf[i] + (pw * Ad[i]) * two_m);
  }
  return grad;
}

// x <- x - gamma * grad J_k(x)
template <class T>
void gradient_step(const KernelData<T>& data, std::vector<T>& x, int k, double m, double gamma,
                   PowerStrategy strategy) {
  const auto grad = grad_J(data, x, k, m, strategy);
  for (std::size_t i = 0; i < data.n; ++i) {
    x[i] = x[i] - grad[i] * gamma;
  }
}

inline std::vector<double> to_std(const Vector& x) { return {x.data(), x.data() + x.size()}; }

inline Vector to_eigen(const std::vector<double>& x) {
  return Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
}

}  // namespace polypen::detail
