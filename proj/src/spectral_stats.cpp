#include "rabi/spectral_stats.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>

namespace rabi::stats {

namespace {

using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>, boost::multiprecision::et_off>;

struct WideChain {
  std::vector<Wide> diag;
  std::vector<Wide> hop2;  // squared off-diagonal
};

WideChain wide_chain(const RabiParams& p, Parity parity, std::size_t dim) {
  WideChain c;
  const Wide half_Omega = Wide(p.Omega()) / 2;
  const Wide lambda2 = Wide(p.g()) * Wide(p.g()) * Wide(p.omega0()) * Wide(p.Omega()) / 4;
  for (std::size_t n = 0; n < dim; ++n) {
    c.diag.push_back(Wide(p.omega0()) * n + ParityChain::spin_sign(parity, n) * half_Omega);
    if (n + 1 < dim) c.hop2.push_back(lambda2 * (n + 1));
  }
  return c;
}

std::size_t wide_count_below(const WideChain& c, const Wide& x, const Wide& pivmin) {
  std::size_t count = 0;
  Wide q = c.diag[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
    if (i + 1 == c.diag.size()) return count;
    q = c.diag[i + 1] - x - c.hop2[i] / q;
  }
}

// k-th eigenvalue (0-based), refining a double-precision estimate.
Wide wide_eigenvalue(const WideChain& c, std::size_t k, double estimate, double scale) {
  const Wide pivmin = Wide(scale) * std::numeric_limits<Wide>::epsilon() * std::numeric_limits<Wide>::epsilon();
  Wide step = Wide(scale) * 1e-10;
  Wide lo = Wide(estimate) - step, hi = Wide(estimate) + step;
  while (wide_count_below(c, lo, pivmin) > k) lo -= (step *= 2);
  while (wide_count_below(c, hi, pivmin) <= k) hi += (step *= 2);
  const Wide floor = Wide(scale) * std::numeric_limits<Wide>::epsilon() * 4;
  while (hi - lo > floor) {
    const Wide mid = (lo + hi) / 2;
    if (wide_count_below(c, mid, pivmin) > k)
      hi = mid;
    else
      lo = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace

std::vector<Level> merge_levels(const ParitySpectrum& plus, const ParitySpectrum& minus) {
  std::vector<Level> levels;
  for (const ParitySpectrum* s : {&plus, &minus}) {
    const std::size_t n = std::min(s->n_converged, s->eps.size());
    for (std::size_t k = 0; k < n; ++k) levels.push_back(Level{s->eps[k], s->parity, k});
  }
  std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.eps < b.eps; });
  return levels;
}

WindowedDos windowed_dos(const ParitySpectrum& plus, const ParitySpectrum& minus, std::size_t window_N) {
  if (window_N < 2) throw InvalidArgument("windowed_dos: window_N must be >= 2");
  if (plus.parity != Parity::Plus || minus.parity != Parity::Minus)
    throw InvalidArgument("windowed_dos: expected (Plus, Minus) spectra");
  const auto levels = merge_levels(plus, minus);
  WindowedDos out;
  out.window_N = window_N;
  out.ratio = plus.params.ratio();
  out.g = plus.params.g();
  out.dim_plus = plus.dim;
  out.dim_minus = minus.dim;
  out.levels_used = levels.size();
  if (levels.size() <= window_N) {
    out.truncated = true;
    return out;
  }
  const double to_energy_units = 2.0 * plus.params.omega0() / plus.params.Omega();
  const double n = static_cast<double>(window_N);
  for (std::size_t i = 0; i + window_N < levels.size(); ++i) {
    const double lo = levels[i].eps, hi = levels[i + window_N].eps;
    const double nu_bar = n / (hi - lo);
    out.points.push_back(WindowedPoint{0.5 * (lo + hi), nu_bar, nu_bar * to_energy_units});
  }
  return out;
}

double interpolate(const WindowedDos& dos, double eps) {
  const auto& p = dos.points;
  if (p.empty()) throw InvalidArgument("interpolate: empty curve");
  if (eps <= p.front().eps_bar) return p.front().nu;
  if (eps >= p.back().eps_bar) return p.back().nu;
  auto it = std::lower_bound(p.begin(), p.end(), eps,
                             [](const WindowedPoint& a, double e) { return a.eps_bar < e; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  if (b.eps_bar == a.eps_bar) return 0.5 * (a.nu + b.nu);
  const double t = (eps - a.eps_bar) / (b.eps_bar - a.eps_bar);
  return a.nu + t * (b.nu - a.nu);
}

GapMap gap_map(double ratio, const std::vector<double>& g_values, std::size_t k_max, const GapMapOptions& options) {
  if (k_max == 0) throw InvalidArgument("gap_map: k_max must be positive");
  GapMap map;
  map.ratio = ratio;
  for (double g : g_values) {
    const RabiParams params = RabiParams::from_coupling(options.omega0, ratio * options.omega0, g);
    const std::size_t dim = std::max({default_truncation(params), options.min_dim, k_max + 2});
    const std::size_t big = static_cast<std::size_t>(std::ceil(1.25 * static_cast<double>(dim)));
    std::vector<double> eps[2];
    std::vector<bool> ok(k_max, true);
    for (int s = 0; s < 2; ++s) {
      const Parity parity = s == 0 ? Parity::Plus : Parity::Minus;
      const auto a = diagonalize(build_parity_chain(params, parity, dim), k_max);
      const auto b = diagonalize(build_parity_chain(params, parity, big), k_max);
      for (std::size_t k = 0; k < k_max; ++k)
        if (!(std::abs(a.energies[k] - b.energies[k]) < options.tol * options.omega0)) ok[k] = false;
      eps[s] = a.eps;
    }
    for (std::size_t k = 0; k < k_max; ++k) {
      if (!ok[k]) ++map.excluded;
      map.entries.push_back(GapEntry{g, k, 0.5 * (eps[0][k] + eps[1][k]), eps[0][k] - eps[1][k], ok[k]});
    }
  }
  return map;
}

double parity_splitting(const RabiParams& params, std::size_t k, std::size_t dim) {
  if (dim <= k + 1) throw InvalidArgument("parity_splitting: dim must exceed k + 1");
  Wide e[2];
  double scale = 0.0;
  for (int s = 0; s < 2; ++s) {
    const Parity parity = s == 0 ? Parity::Plus : Parity::Minus;
    const auto chain = build_parity_chain(params, parity, dim);
    const auto spec = diagonalize(chain, k + 1);
    scale = std::max(scale, chain.matrix.norm());
    e[s] = wide_eigenvalue(wide_chain(params, parity, dim), k, spec.energies[k], chain.matrix.norm());
  }
  const Wide delta = (e[0] - e[1]) * 2 / Wide(params.Omega());
  const Wide resolution = Wide(scale) * std::numeric_limits<Wide>::epsilon() * 1e6 * 2 / Wide(params.Omega());
  if (abs(delta) <= resolution)
    throw ConvergenceError("parity_splitting: |Delta| below the 100-digit resolution", k);
  return static_cast<double>(delta);
}

double local_spacing(const std::vector<Level>& levels, double eps, std::size_t span) {
  if (levels.size() < 2) throw InvalidArgument("local_spacing: need at least two levels");
  auto it = std::lower_bound(levels.begin(), levels.end(), eps, [](const Level& a, double e) { return a.eps < e; });
  const std::size_t centre = static_cast<std::size_t>(it - levels.begin());
  const std::size_t lo = centre > span ? centre - span : 0;
  const std::size_t hi = std::min(levels.size() - 1, centre + span);
  if (hi <= lo) return levels.back().eps - levels.front().eps;
  return (levels[hi].eps - levels[lo].eps) / static_cast<double>(hi - lo);
}

double min_spacing_location(const std::vector<Level>& levels, std::size_t window) {
  if (window == 0 || levels.size() <= window) throw InvalidArgument("min_spacing_location: not enough levels");
  double best = std::numeric_limits<double>::infinity();
  double where = levels.front().eps;
  for (std::size_t i = 0; i + window < levels.size(); ++i) {
    const double width = levels[i + window].eps - levels[i].eps;
    if (width < best) {
      best = width;
      where = 0.5 * (levels[i + window].eps + levels[i].eps);
    }
  }
  return where;
}

}  // namespace rabi::stats
