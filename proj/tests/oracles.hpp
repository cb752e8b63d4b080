#pragma once

// Test-only reference implementations, independent of the library's solver
// and quadrature paths.

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

// Full Fock (n < dim) x spin Hamiltonian built from operator matrices,
// basis index 2n + s with s = 0 for up, 1 for down.
inline Eigen::MatrixXd rabi_dense(double omega0, double Omega, double lambda, int dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd num = a.transpose() * a;
  Eigen::MatrixXd x = a + a.transpose();
  Eigen::Matrix2d sz, sx;
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  auto kron = [dim](const Eigen::MatrixXd& f, const Eigen::Matrix2d& s) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * dim, 2 * dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        out.block<2, 2>(2 * i, 2 * j) = f(i, j) * s;
    return out;
  };
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  return omega0 * kron(num, Eigen::Matrix2d::Identity()) + 0.5 * Omega * kron(id, sz) - lambda * kron(x, sx);
}

inline std::vector<double> dense_eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

inline std::vector<double> tridiagonal_dense_eigenvalues(const std::vector<double>& d, const std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = e[i];
  return dense_eigenvalues(m);
}

// Semiclassical shell integrals by tanh-sinh on the raw integrand, which
// copes with the endpoint inverse square roots on its own.
struct Shell {
  double x1, x2;
};

inline Shell shell_limits(double g, double eps) {
  const double g2 = g * g;
  const double root = std::sqrt(std::max(0.0, g2 * g2 + 2 * eps * g2 + 1));
  const double x2 = std::sqrt(eps + g2 + root);
  const double x1 = (g > 1 && eps < -1) ? std::sqrt(std::max(0.0, eps + g2 - root)) : 0.0;
  return {x1, x2};
}

template <class F>
double shell_quad(double g, double eps, F&& weight, double sign = 1.0) {
  const auto [x1, x2] = shell_limits(g, eps);
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double x) {
    const double s = std::sqrt(1 + 2 * g * g * x * x);
    const double r = eps - x * x + s;
    // Rounding can push r below zero at the abscissae nearest the turning points.
    if (r <= 0.0) return 0.0;
    return weight(x, s, r) / std::sqrt(r);
  };
  // sign = -1 integrates the mirror well x in [-x2, -x1].
  if (sign > 0) return ts.integrate(f, x1, x2);
  return ts.integrate(f, -x2, -x1);
}

inline double dos(double g, double eps) {
  return 2.0 / std::numbers::pi * shell_quad(g, eps, [](double, double, double) { return 1.0; });
}

inline double accumulated(double g, double eps) {
  return 4.0 / std::numbers::pi * shell_quad(g, eps, [](double, double, double r) { return r; });
}

}  // namespace oracle
