#pragma once

// Symmetric tridiagonal eigensolver: Sturm-sequence bisection for eigenvalues,
// inverse iteration for eigenvectors. Never forms a dense matrix.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabi {

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (eigenvalue index " + std::to_string(index) + ")"), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size diag.size() - 1

  std::size_t size() const { return diag.size(); }
  // Max-row-sum norm, an upper bound on the spectral radius.
  double norm() const;
  // y = T x
  void apply(std::span<const double> x, std::span<double> y) const;
  SymTridiagonal leading(std::size_t n) const;
};

struct BisectionOptions {
  int max_iterations = 100;  // per eigenpair
  unsigned threads = 0;      // 0: hardware concurrency
};

// Number of eigenvalues strictly less than x.
std::size_t sturm_count(const SymTridiagonal& t, double x);

// Gershgorin interval enclosing the spectrum.
std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t);

// Lowest `count` eigenvalues in ascending order. Each eigenvalue is bisected
// independently, so the result does not depend on the thread schedule.
std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count,
                                       const BisectionOptions& options = {});

// Unit-norm eigenvector for an (accurate) eigenvalue estimate. The largest
// component is made positive.
std::vector<double> inverse_iteration(const SymTridiagonal& t, double eigenvalue, std::size_t index,
                                      int max_iterations = 100);

}  // namespace rabi
