#pragma once

// Exact (to Fock truncation) diagonalization of the quantum Rabi Hamiltonian
// in its two parity sectors. Each sector is a real symmetric tridiagonal chain:
//   Minus: |0,dn>, |1,up>, |2,dn>, ...    Plus: |0,up>, |1,dn>, |2,up>, ...
// with on-site energy omega0 n +- Omega/2 and hopping -lambda sqrt(n+1).

#include <cstddef>
#include <optional>
#include <vector>

#include "rabi/params.hpp"
#include "rabi/tridiagonal.hpp"

namespace rabi {

struct ParityChain {
  Parity parity;
  RabiParams params;
  SymTridiagonal matrix;

  std::size_t dim() const { return matrix.size(); }
  // sigma_z eigenvalue (+1 or -1) of chain site n.
  static int spin_sign(Parity parity, std::size_t n);
};

struct ParitySpectrum {
  Parity parity;
  RabiParams params;
  std::size_t dim = 0;
  std::vector<double> energies;              // ascending, energy units
  std::vector<double> eps;                   // 2 E / Omega
  std::vector<std::vector<double>> vectors;  // one unit-norm column per stored eigenvalue; empty if not requested
  std::size_t n_converged = 0;               // leading eigenvalues certified against truncation

  bool has_vectors() const { return !vectors.empty(); }
};

struct EigenObservables {
  Parity parity;
  std::vector<double> eps;
  std::vector<double> n_phot;  // <a^dag a>
  std::vector<double> sz;      // <sigma_z>
  std::vector<double> p_loc;   // |<0,dn|phi>|^2 (Minus) or |<1,dn|phi>|^2 (Plus)
};

ParityChain build_parity_chain(const RabiParams& params, Parity parity, std::size_t dim);

struct DiagonalizeOptions {
  bool want_vectors = false;
  BisectionOptions bisection{};
};

// Lowest k_max eigenpairs of one sector. Energies are rescaled to eps only here.
ParitySpectrum diagonalize(const ParityChain& chain, std::size_t k_max, const DiagonalizeOptions& options = {});

struct ConvergenceOptions {
  double tol = 1e-8;                         // relative to omega0
  std::optional<std::size_t> start_dim{};    // defaults to a photon-number estimate at eps_max
  std::optional<std::size_t> max_dim{};      // defaults to 200 R max(1, g^2)
  bool want_vectors = false;
  BisectionOptions bisection{};
};

struct ConvergedWindow {
  std::size_t dim_required;
  ParitySpectrum spectrum;  // at dim_required; n_converged = number of levels with eps <= eps_max
};

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grows the truncation by 25% per step until every level with eps <= eps_max
// moves by less than tol*omega0 under the next 25% increase.
ConvergedWindow converged_window(const RabiParams& params, Parity parity, double eps_max,
                                 const ConvergenceOptions& options = {});

EigenObservables eigen_observables(const ParitySpectrum& spectrum);

// Index of the stored level closest to eps_target; the lower one wins a tie.
std::size_t nearest_level(const ParitySpectrum& spectrum, double eps_target);

}  // namespace rabi
