#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "rabi/quantum.hpp"
#include "rabi/semiclassical.hpp"

using namespace rabi;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(RabiParams::from_coupling(0.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RabiParams::from_coupling(1.0, -1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RabiParams::from_coupling(1.0, 10.0, -0.1), InvalidArgument);
  CHECK_THROWS_AS(RabiParams::from_coupling(2.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(RabiParams::from_coupling(1.0, NAN, 1.0), InvalidArgument);
  const auto p = RabiParams::from_lambda(1.0, 40.0, std::sqrt(40.0) / 2.0);
  CHECK(p.g() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.ratio() == 40.0);
  CHECK(p.to_eps(p.to_energy(-1.3)) == doctest::Approx(-1.3));
}

TEST_CASE("default truncation heuristic") {
  CHECK(default_truncation(RabiParams::from_coupling(1.0, 40.0, 0.5)) == 260);
  CHECK(default_truncation(RabiParams::from_coupling(1.0, 40.0, 2.0)) == 740);
}

TEST_CASE("parity chain matrix elements") {
  const auto p = RabiParams::from_coupling(1.0, 40.0, 1.0);
  const auto minus = build_parity_chain(p, Parity::Minus, 3);
  CHECK(minus.matrix.diag == std::vector<double>{-20.0, 21.0, -18.0});
  REQUIRE(minus.matrix.offdiag.size() == 2);
  CHECK(minus.matrix.offdiag[0] == doctest::Approx(-std::sqrt(40.0) / 2.0));
  CHECK(minus.matrix.offdiag[1] == doctest::Approx(-std::sqrt(40.0) / 2.0 * std::sqrt(2.0)));
  const auto plus = build_parity_chain(p, Parity::Plus, 2);
  CHECK(plus.matrix.diag == std::vector<double>{20.0, -19.0});
  CHECK(ParityChain::spin_sign(Parity::Minus, 0) == -1);
  CHECK(ParityChain::spin_sign(Parity::Plus, 0) == 1);
  CHECK(ParityChain::spin_sign(Parity::Plus, 3) == -1);
  CHECK_THROWS_AS(build_parity_chain(p, Parity::Plus, 1), InvalidArgument);
}

TEST_CASE("uncoupled spectrum is the bare ladder") {
  const auto p = RabiParams::from_coupling(1.0, 7.0, 0.0);
  const std::size_t dim = 40;
  const auto s = diagonalize(build_parity_chain(p, Parity::Minus, dim), dim);
  std::vector<double> bare;
  for (std::size_t n = 0; n < dim; ++n) bare.push_back(double(n) + (n % 2 ? 3.5 : -3.5));
  std::sort(bare.begin(), bare.end());
  REQUIRE(s.energies.size() == dim);
  for (std::size_t k = 0; k < dim; ++k) {
    CHECK(s.energies[k] == doctest::Approx(bare[k]).epsilon(1e-13));
    CHECK(s.eps[k] == doctest::Approx(2.0 * bare[k] / 7.0).epsilon(1e-13));
  }
}

TEST_CASE("both sectors together reproduce the full Fock x spin Hamiltonian") {
  for (double g : {0.3, 1.0, 1.7}) {
    for (double R : {1.0, 3.5, 10.0}) {
      const int dim = 12;
      const auto p = RabiParams::from_coupling(1.0, R, g);
      const auto ref = oracle::dense_eigenvalues(oracle::rabi_dense(1.0, R, p.lambda(), dim));
      const auto sp = diagonalize(build_parity_chain(p, Parity::Plus, dim), dim);
      const auto sm = diagonalize(build_parity_chain(p, Parity::Minus, dim), dim);
      std::vector<double> both = sp.energies;
      both.insert(both.end(), sm.energies.begin(), sm.energies.end());
      std::sort(both.begin(), both.end());
      REQUIRE(both.size() == ref.size());
      for (std::size_t k = 0; k < ref.size(); ++k) CHECK(both[k] == doctest::Approx(ref[k]).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("eigenvectors satisfy the chain eigenproblem") {
  const auto p = RabiParams::from_coupling(1.0, 20.0, 1.3);
  const auto chain = build_parity_chain(p, Parity::Plus, 300);
  const auto s = diagonalize(chain, 40, {.want_vectors = true});
  REQUIRE(s.has_vectors());
  std::vector<double> hv(chain.dim());
  for (std::size_t k = 0; k < 40; ++k) {
    chain.matrix.apply(s.vectors[k], hv);
    double r = 0.0;
    for (std::size_t i = 0; i < hv.size(); ++i) r = std::max(r, std::abs(hv[i] - s.energies[k] * s.vectors[k][i]));
    CHECK(r < 1e-9 * chain.matrix.norm());
    CHECK(*std::max_element(s.vectors[k].begin(), s.vectors[k].end()) > 0.0);
  }
}

TEST_CASE("ground state approaches the semiclassical minimum with the normal-mode correction") {
  const double g = 2.0;
  double vmin = 1e300;
  for (int i = 0; i <= 200000; ++i) {
    const double x = 5.0 * i / 200000.0;
    vmin = std::min(vmin, 2.0 * semiclassical::potential_value(semiclassical::Branch::Lower, g, x));
  }
  CHECK(vmin == doctest::Approx(-2.125).epsilon(1e-9));
  CHECK(semiclassical::ground_energy(g) == doctest::Approx(-2.125).epsilon(1e-15));
  // Zero-point energy of the soft mode, omega0 (sqrt(1 - g^-4) - 1) / 2, in eps units.
  const double c = std::sqrt(1.0 - std::pow(g, -4.0)) - 1.0;
  double previous = 1e300;
  for (double R : {10.0, 40.0, 160.0}) {
    const auto p = RabiParams::from_coupling(1.0, R, g);
    const auto s = converged_window(p, Parity::Plus, -2.0).spectrum;
    const double shift = s.eps[0] - semiclassical::ground_energy(g);
    const double residual = std::abs(shift - c / R);
    CHECK(residual < 0.1 * std::abs(c) / R);
    CHECK(residual < previous);
    previous = residual;
  }
}

TEST_CASE("converged window certifies every level below the cutoff") {
  const auto p = RabiParams::from_coupling(1.0, 40.0, 1.2);
  const auto w = converged_window(p, Parity::Minus, 0.0);
  const auto& s = w.spectrum;
  REQUIRE(s.n_converged > 0);
  CHECK(s.dim == w.dim_required);
  CHECK(s.eps[s.n_converged - 1] <= 0.0);
  if (s.eps.size() > s.n_converged) CHECK(s.eps[s.n_converged] > 0.0);
  const auto big = diagonalize(build_parity_chain(p, Parity::Minus, 2 * w.dim_required), s.n_converged);
  for (std::size_t k = 0; k < s.n_converged; ++k) CHECK(std::abs(big.energies[k] - s.energies[k]) < 1e-8);
}

TEST_CASE("required truncation grows with R g^2") {
  const auto small = converged_window(RabiParams::from_coupling(1.0, 20.0, 2.0), Parity::Plus, 0.0);
  const auto large = converged_window(RabiParams::from_coupling(1.0, 80.0, 2.0), Parity::Plus, 0.0);
  CHECK(large.dim_required > 2 * small.dim_required);
  ConvergenceOptions tight;
  tight.max_dim = 20;
  CHECK_THROWS_AS(converged_window(RabiParams::from_coupling(1.0, 80.0, 2.0), Parity::Plus, 0.0, tight), TruncationError);
}

TEST_CASE("observables of the uncoupled states") {
  const auto p = RabiParams::from_coupling(1.0, 7.0, 0.0);
  const auto s = diagonalize(build_parity_chain(p, Parity::Minus, 30), 10, {.want_vectors = true});
  const auto obs = eigen_observables(s);
  // Lowest Minus levels: |0 dn>, |2 dn>, |4 dn>, |6 dn>, then |1 up> ...
  CHECK(obs.n_phot[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(obs.sz[0] == doctest::Approx(-1.0));
  CHECK(obs.p_loc[0] == doctest::Approx(1.0));
  CHECK(obs.n_phot[1] == doctest::Approx(2.0));
  CHECK(obs.p_loc[1] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("observables obey the Hellmann-Feynman relations") {
  const double omega0 = 1.0, Omega = 12.0, lambda = 3.1, h = 1e-5;
  const std::size_t dim = 400, K = 25;
  for (Parity par : {Parity::Plus, Parity::Minus}) {
    auto solve = [&](double w0, double W) {
      return diagonalize(build_parity_chain(RabiParams::from_lambda(w0, W, lambda), par, dim), K).energies;
    };
    const auto s = diagonalize(build_parity_chain(RabiParams::from_lambda(omega0, Omega, lambda), par, dim), K,
                               {.want_vectors = true});
    const auto obs = eigen_observables(s);
    const auto wp = solve(omega0 + h, Omega), wm = solve(omega0 - h, Omega);
    const auto Wp = solve(omega0, Omega + h), Wm = solve(omega0, Omega - h);
    for (std::size_t k = 0; k < K; ++k) {
      CHECK(obs.n_phot[k] == doctest::Approx((wp[k] - wm[k]) / (2 * h)).epsilon(1e-5));
      // dE/d(Omega/2) = <sigma_z>
      CHECK(obs.sz[k] == doctest::Approx(2.0 * (Wp[k] - Wm[k]) / (2 * h)).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("nearest level picks the lower one on a tie") {
  const auto p = RabiParams::from_coupling(1.0, 7.0, 0.0);
  const auto s = diagonalize(build_parity_chain(p, Parity::Minus, 30), 10);
  CHECK(nearest_level(s, -10.0) == 0);
  CHECK(nearest_level(s, s.eps[3] + 1e-9) == 3);
  // eps[4] and eps[5] are the degenerate pair |8 dn>, |1 up>.
  REQUIRE(s.eps[4] == s.eps[5]);
  CHECK(nearest_level(s, s.eps[5]) == 4);
  CHECK(s.eps[nearest_level(s, 1e6)] == s.eps.back());
  ParitySpectrum grid{Parity::Plus, p, 3, {0.0, 3.5, 7.0}, {0.0, 1.0, 2.0}, {}, 3};
  CHECK(nearest_level(grid, 0.5) == 0);
  CHECK(nearest_level(grid, 1.5) == 1);
}
