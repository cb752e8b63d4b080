#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rabi/tridiagonal.hpp"

using namespace rabi;

namespace {

SymTridiagonal random_tridiagonal(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  SymTridiagonal t;
  for (std::size_t i = 0; i < n; ++i) t.diag.push_back(u(rng));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double e = u(rng);
    if (std::abs(e) < 1e-3) e = 1e-3;
    t.offdiag.push_back(e);
  }
  return t;
}

}  // namespace

TEST_CASE("sturm count on a diagonal matrix") {
  SymTridiagonal t{{3.0, -1.0, 2.0}, {0.0, 0.0}};
  CHECK(sturm_count(t, -2.0) == 0);
  CHECK(sturm_count(t, 0.0) == 1);
  CHECK(sturm_count(t, 2.5) == 2);
  CHECK(sturm_count(t, 10.0) == 3);
}

TEST_CASE("bisection matches dense diagonalization on random chains") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 40;
    const auto t = random_tridiagonal(rng, n);
    const auto ref = oracle::tridiagonal_dense_eigenvalues(t.diag, t.offdiag);
    const auto got = lowest_eigenvalues(t, n);
    REQUIRE(got.size() == n);
    for (std::size_t k = 0; k < n; ++k) CHECK(got[k] == doctest::Approx(ref[k]).epsilon(1e-12).scale(t.norm()));
  }
}

TEST_CASE("only the requested number of eigenvalues is returned") {
  std::mt19937_64 rng(11);
  const auto t = random_tridiagonal(rng, 30);
  const auto all = lowest_eigenvalues(t, 30);
  const auto some = lowest_eigenvalues(t, 5);
  REQUIRE(some.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(some[k] == all[k]);
  CHECK(lowest_eigenvalues(t, 100).size() == 30);
}

TEST_CASE("Cauchy interlacing of the leading principal submatrix") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 3 + trial;
    const auto t = random_tridiagonal(rng, n);
    const auto full = lowest_eigenvalues(t, n);
    const auto sub = lowest_eigenvalues(t.leading(n - 1), n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      CHECK(full[k] <= sub[k] + 1e-12 * t.norm());
      CHECK(sub[k] <= full[k + 1] + 1e-12 * t.norm());
    }
  }
}

TEST_CASE("inverse iteration returns unit vectors with small residual") {
  std::mt19937_64 rng(5);
  const auto t = random_tridiagonal(rng, 60);
  const auto values = lowest_eigenvalues(t, 60);
  std::vector<double> hv(60);
  std::vector<std::vector<double>> vecs;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto v = inverse_iteration(t, values[k], k);
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    CHECK(std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-12));
    t.apply(v, hv);
    double r = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) r += (hv[i] - values[k] * v[i]) * (hv[i] - values[k] * v[i]);
    CHECK(std::sqrt(r) <= 1e-9 * t.norm());
    vecs.push_back(v);
  }
  // Well separated levels come out mutually orthogonal.
  for (std::size_t a = 0; a < vecs.size(); ++a)
    for (std::size_t b = a + 1; b < vecs.size(); ++b) {
      if (values[b] - values[a] < 1e-3) continue;
      double dot = 0.0;
      for (std::size_t i = 0; i < 60; ++i) dot += vecs[a][i] * vecs[b][i];
      CHECK(std::abs(dot) < 1e-8);
    }
}

TEST_CASE("iteration cap surfaces the offending index") {
  std::mt19937_64 rng(9);
  const auto t = random_tridiagonal(rng, 20);
  BisectionOptions opts;
  opts.max_iterations = 3;
  try {
    lowest_eigenvalues(t, 20, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.index() == 0);
  }
}

TEST_CASE("eigenvalues are bit-identical for any thread count") {
  std::mt19937_64 rng(21);
  const auto t = random_tridiagonal(rng, 500);
  BisectionOptions one, many;
  one.threads = 1;
  many.threads = 4;
  CHECK(lowest_eigenvalues(t, 400, one) == lowest_eigenvalues(t, 400, many));
}
