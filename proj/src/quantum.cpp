#include "rabi/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rabi {

int ParityChain::spin_sign(Parity parity, std::size_t n) {
  const bool even = (n % 2) == 0;
  // Minus: even sites carry spin down. Plus: even sites carry spin up.
  if (parity == Parity::Minus) return even ? -1 : 1;
  return even ? 1 : -1;
}

ParityChain build_parity_chain(const RabiParams& params, Parity parity, std::size_t dim) {
  if (dim < 2) throw InvalidArgument("build_parity_chain: dim must be >= 2");
  SymTridiagonal m;
  m.diag.resize(dim);
  m.offdiag.resize(dim - 1);
  const double half_Omega = 0.5 * params.Omega();
  const double lambda = params.lambda();
  for (std::size_t n = 0; n < dim; ++n)
    m.diag[n] = params.omega0() * static_cast<double>(n) + ParityChain::spin_sign(parity, n) * half_Omega;
  for (std::size_t n = 0; n + 1 < dim; ++n) m.offdiag[n] = -lambda * std::sqrt(static_cast<double>(n + 1));
  return ParityChain{parity, params, std::move(m)};
}

ParitySpectrum diagonalize(const ParityChain& chain, std::size_t k_max, const DiagonalizeOptions& options) {
  ParitySpectrum out{chain.parity, chain.params, chain.dim(), {}, {}, {}, 0};
  out.energies = lowest_eigenvalues(chain.matrix, k_max, options.bisection);
  out.eps.reserve(out.energies.size());
  for (double e : out.energies) out.eps.push_back(chain.params.to_eps(e));
  if (options.want_vectors) {
    out.vectors.reserve(out.energies.size());
    for (std::size_t k = 0; k < out.energies.size(); ++k)
      out.vectors.push_back(inverse_iteration(chain.matrix, out.energies[k], k));
  }
  return out;
}

namespace {

std::size_t photon_estimate(const RabiParams& params, double eps_max) {
  const double g2 = params.g() * params.g();
  const double disc = std::max(0.0, g2 * g2 + 2.0 * eps_max * g2 + 1.0);
  const double x2sq = std::max(0.0, eps_max + g2 + std::sqrt(disc));
  const double n = 0.5 * params.ratio() * x2sq;
  return static_cast<std::size_t>(std::ceil(n + 16.0 + 2.0 * std::sqrt(n)));
}

}  // namespace

ConvergedWindow converged_window(const RabiParams& params, Parity parity, double eps_max,
                                 const ConvergenceOptions& options) {
  if (!std::isfinite(eps_max)) throw InvalidArgument("converged_window: eps_max must be finite");
  if (!(options.tol > 0.0)) throw InvalidArgument("converged_window: tol must be positive");
  const double cap_default = 200.0 * params.ratio() * std::max(1.0, params.g() * params.g());
  const std::size_t cap = options.max_dim.value_or(static_cast<std::size_t>(std::ceil(cap_default)));
  const double e_max = params.to_energy(eps_max);
  const double tol = options.tol * params.omega0();

  std::size_t dim = std::max<std::size_t>(2, options.start_dim.value_or(photon_estimate(params, eps_max)));
  if (dim > cap) throw TruncationError("converged_window: starting truncation exceeds cap " + std::to_string(cap));

  auto levels_at = [&](std::size_t d) {
    const ParityChain chain = build_parity_chain(params, parity, d);
    const std::size_t k = sturm_count(chain.matrix, e_max);
    return lowest_eigenvalues(chain.matrix, k, options.bisection);
  };

  std::vector<double> current = levels_at(dim);
  while (true) {
    const std::size_t next_dim = std::max(dim + 1, static_cast<std::size_t>(std::ceil(1.25 * static_cast<double>(dim))));
    if (next_dim > cap)
      throw TruncationError("converged_window: truncation cap " + std::to_string(cap) + " exceeded for eps_max=" +
                            std::to_string(eps_max));
    std::vector<double> next = levels_at(next_dim);
    bool ok = next.size() == current.size();
    for (std::size_t i = 0; ok && i < current.size(); ++i) ok = std::abs(current[i] - next[i]) < tol;
    if (ok) break;
    dim = next_dim;
    current = std::move(next);
  }

  DiagonalizeOptions dopts;
  dopts.want_vectors = options.want_vectors;
  dopts.bisection = options.bisection;
  ParitySpectrum spectrum = options.want_vectors
                                ? diagonalize(build_parity_chain(params, parity, dim), current.size(), dopts)
                                : ParitySpectrum{parity, params, dim, current, {}, {}, 0};
  if (!options.want_vectors)
    for (double e : spectrum.energies) spectrum.eps.push_back(params.to_eps(e));
  spectrum.n_converged = spectrum.energies.size();
  return ConvergedWindow{dim, std::move(spectrum)};
}

EigenObservables eigen_observables(const ParitySpectrum& spectrum) {
  if (!spectrum.has_vectors()) throw InvalidArgument("eigen_observables: spectrum carries no eigenvectors");
  EigenObservables out{spectrum.parity, spectrum.eps, {}, {}, {}};
  const std::size_t loc_site = spectrum.parity == Parity::Minus ? 0 : 1;
  for (const auto& v : spectrum.vectors) {
    double n_phot = 0.0, sz = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
      const double w = v[n] * v[n];
      n_phot += static_cast<double>(n) * w;
      sz += ParityChain::spin_sign(spectrum.parity, n) * w;
    }
    out.n_phot.push_back(n_phot);
    out.sz.push_back(std::clamp(sz, -1.0, 1.0));
    out.p_loc.push_back(loc_site < v.size() ? v[loc_site] * v[loc_site] : 0.0);
  }
  return out;
}

std::size_t nearest_level(const ParitySpectrum& spectrum, double eps_target) {
  if (spectrum.eps.empty()) throw InvalidArgument("nearest_level: empty spectrum");
  std::size_t best = 0;
  for (std::size_t k = 1; k < spectrum.eps.size(); ++k)
    if (std::abs(spectrum.eps[k] - eps_target) < std::abs(spectrum.eps[best] - eps_target)) best = k;
  return best;
}

}  // namespace rabi
