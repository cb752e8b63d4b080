#pragma once

// Quantum-side spectral diagnostics built from converged parity spectra.

#include <cstddef>
#include <vector>

#include "rabi/quantum.hpp"

namespace rabi::stats {

struct Level {
  double eps;
  Parity parity;
  std::size_t index;  // position within its parity sector
};

// Both sectors merged in ascending eps; only converged levels are used.
std::vector<Level> merge_levels(const ParitySpectrum& plus, const ParitySpectrum& minus);

struct WindowedPoint {
  double eps_bar;  // (eps_{i+N} + eps_i) / 2
  double nu_bar;   // N / (eps_{i+N} - eps_i), levels per unit eps
  double nu;       // nu_bar * 2 omega0 / Omega: levels per unit bare energy with omega0 = 1
};

struct WindowedDos {
  std::vector<WindowedPoint> points;
  std::size_t window_N = 0;
  double ratio = 0.0;
  double g = 0.0;
  std::size_t dim_plus = 0;
  std::size_t dim_minus = 0;
  std::size_t levels_used = 0;
  bool truncated = false;  // fewer than window_N + 1 converged levels were available
};

WindowedDos windowed_dos(const ParitySpectrum& plus, const ParitySpectrum& minus, std::size_t window_N = 10);

// Linear interpolation of a windowed curve at eps (clamped to its range).
double interpolate(const WindowedDos& dos, double eps);

struct GapEntry {
  double g;
  std::size_t k;
  double eps_mean;  // (eps_k^+ + eps_k^-) / 2
  double delta;     // eps_k^+ - eps_k^-
  bool converged;
};

struct GapMap {
  double ratio = 0.0;
  std::vector<GapEntry> entries;
  std::size_t excluded = 0;  // unconverged (g, k) pairs
};

struct GapMapOptions {
  double omega0 = 1.0;
  double tol = 1e-9;  // truncation convergence, units of omega0
  std::size_t min_dim = 0;
};

// Delta_k for k < k_max at every g. Each sector is solved at the default
// truncation and at 25% more; levels moving by more than tol are marked unconverged.
GapMap gap_map(double ratio, const std::vector<double>& g_values, std::size_t k_max, const GapMapOptions& options = {});

// Delta_k = eps_k^+ - eps_k^- resolved in 100-digit arithmetic by Sturm
// bisection at truncation `dim`. Double-precision spectra cannot resolve
// splittings below ~1e-15 |eps|; this reaches ~1e-90 |eps|. Throws
// ConvergenceError if |Delta_k| is below that floor.
double parity_splitting(const RabiParams& params, std::size_t k, std::size_t dim);

// Mean spacing of merged levels around eps, over `span` neighbours on each side.
double local_spacing(const std::vector<Level>& levels, double eps, std::size_t span = 5);

// eps of the smallest spacing averaged over `window` consecutive merged levels.
double min_spacing_location(const std::vector<Level>& levels, std::size_t window);

}  // namespace rabi::stats
