#include "rabi/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace rabi {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

double pivot_floor(const SymTridiagonal& t) {
  double emax = 1.0;
  for (double e : t.offdiag) emax = std::max(emax, e * e);
  return kSafeMin * emax;
}

std::size_t count_below(const SymTridiagonal& t, double x, double pivmin) {
  std::size_t count = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    const double e = t.offdiag[i - 1];
    q = t.diag[i] - x - e * e / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

double bisect(const SymTridiagonal& t, std::size_t k, double lo, double hi, double abstol, double pivmin,
              int max_iterations) {
  for (int it = 0; it < max_iterations; ++it) {
    const double width = hi - lo;
    const double tol = std::max(abstol, 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)));
    if (width <= tol) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    if (count_below(t, mid, pivmin) > k)
      hi = mid;
    else
      lo = mid;
  }
  throw ConvergenceError("bisection did not converge", k);
}

}  // namespace

double SymTridiagonal::norm() const {
  double best = 0.0;
  const std::size_t n = diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(offdiag[i - 1]);
    if (i + 1 < n) row += std::abs(offdiag[i]);
    best = std::max(best, row);
  }
  return best;
}

void SymTridiagonal::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += offdiag[i - 1] * x[i - 1];
    if (i + 1 < n) v += offdiag[i] * x[i + 1];
    y[i] = v;
  }
}

SymTridiagonal SymTridiagonal::leading(std::size_t n) const {
  SymTridiagonal sub;
  sub.diag.assign(diag.begin(), diag.begin() + static_cast<std::ptrdiff_t>(n));
  sub.offdiag.assign(offdiag.begin(), offdiag.begin() + static_cast<std::ptrdiff_t>(n > 0 ? n - 1 : 0));
  return sub;
}

std::size_t sturm_count(const SymTridiagonal& t, double x) {
  if (t.diag.empty()) return 0;
  return count_below(t, x, pivot_floor(t));
}

std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = t.diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, std::size_t count,
                                       const BisectionOptions& options) {
  const std::size_t n = t.size();
  if (n == 0) return {};
  if (t.offdiag.size() + 1 != n) throw std::invalid_argument("SymTridiagonal: offdiag must have size n-1");
  count = std::min(count, n);
  std::vector<double> values(count);
  if (count == 0) return values;

  const double tnorm = std::max(t.norm(), kSafeMin);
  const double pivmin = pivot_floor(t);
  auto [lo, hi] = gershgorin_bounds(t);
  const double pad = 2.0 * kEps * tnorm * static_cast<double>(n) + 2.0 * pivmin;
  lo -= pad;
  hi += pad;
  const double abstol = 2.0 * kEps * tnorm;

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, (count + 63) / 64));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k)
      values[k] = bisect(t, k, lo, hi, abstol, pivmin, options.max_iterations);
  };
  if (threads <= 1) {
    work(0, count);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (count + threads - 1) / threads;
      for (unsigned w = 0; w < threads; ++w) {
        const std::size_t b = w * chunk, e = std::min(count, b + chunk);
        pool.emplace_back([&, w, b, e] {
          try {
            work(b, e);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }
  return values;
}

std::vector<double> inverse_iteration(const SymTridiagonal& t, double eigenvalue, std::size_t index,
                                      int max_iterations) {
  const std::size_t n = t.size();
  if (n == 0) return {};
  if (n == 1) return {1.0};
  const double tnorm = std::max(t.norm(), kSafeMin);
  const double tiny = kEps * tnorm;

  // LU of (T - eigenvalue I) with partial pivoting; U has two superdiagonals.
  std::vector<double> a(n), b(t.offdiag), c(t.offdiag), u2(n, 0.0), mult(n, 0.0);
  std::vector<char> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) a[i] = t.diag[i] - eigenvalue;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (std::abs(a[k]) >= std::abs(c[k])) {
      if (std::abs(a[k]) < tiny) a[k] = std::copysign(tiny, a[k] == 0.0 ? 1.0 : a[k]);
      mult[k] = c[k] / a[k];
      a[k + 1] -= mult[k] * b[k];
    } else {
      swapped[k] = 1;
      mult[k] = a[k] / c[k];
      const double next_diag = a[k + 1];
      const double old_super = b[k];
      a[k] = c[k];
      b[k] = next_diag;
      if (k + 2 < n) {
        u2[k] = b[k + 1];
        b[k + 1] = -mult[k] * b[k + 1];
      }
      a[k + 1] = old_super - mult[k] * next_diag;
    }
  }
  if (std::abs(a[n - 1]) < tiny) a[n - 1] = std::copysign(tiny, a[n - 1] == 0.0 ? 1.0 : a[n - 1]);

  auto solve = [&](std::vector<double>& y) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (swapped[k]) std::swap(y[k], y[k + 1]);
      y[k + 1] -= mult[k] * y[k];
    }
    y[n - 1] /= a[n - 1];
    y[n - 2] = (y[n - 2] - b[n - 2] * y[n - 1]) / a[n - 2];
    for (std::size_t k = n - 2; k-- > 0;) y[k] = (y[k] - b[k] * y[k + 1] - u2[k] * y[k + 2]) / a[k];
  };
  auto normalize = [](std::vector<double>& v) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    for (double& x : v) x /= scale;
    const double nrm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (double& x : v) x /= nrm;
  };

  std::mt19937_64 rng(0x5eedULL + index);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n), hv(n);
  for (double& x : v) x = dist(rng);
  normalize(v);

  const double target = 1e-12 * tnorm;
  const double accept = 1e-9 * tnorm;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iterations; ++it) {
    solve(v);
    normalize(v);
    t.apply(v, hv);
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) r2 += (hv[i] - eigenvalue * v[i]) * (hv[i] - eigenvalue * v[i]);
    const double r = std::sqrt(r2);
    if (it >= 1 && (r <= target || r >= 0.5 * residual)) {
      residual = r;
      break;
    }
    residual = r;
  }
  if (!(residual <= accept)) throw ConvergenceError("inverse iteration did not converge", index);

  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;
  return v;
}

}  // namespace rabi
