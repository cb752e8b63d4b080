#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

enum class Parity { Plus, Minus };

inline const char* to_string(Parity p) { return p == Parity::Plus ? "+" : "-"; }

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Physical parameters of H = omega0 a^dag a + (Omega/2) sigma_z - lambda (a^dag + a) sigma_x.
// The dimensionless coupling g is stored; lambda = g sqrt(omega0 Omega) / 2 is derived.
class RabiParams {
 public:
  static RabiParams from_coupling(double omega0, double Omega, double g);
  static RabiParams from_lambda(double omega0, double Omega, double lambda);

  double omega0() const { return omega0_; }
  double Omega() const { return Omega_; }
  double g() const { return g_; }
  double lambda() const;
  // Omega / omega0.
  double ratio() const { return Omega_ / omega0_; }

  // Rescaled energy eps = 2E/Omega and its inverse.
  double to_eps(double energy) const { return 2.0 * energy / Omega_; }
  double to_energy(double eps) const { return 0.5 * eps * Omega_; }

 private:
  RabiParams(double omega0, double Omega, double g) : omega0_(omega0), Omega_(Omega), g_(g) {}

  double omega0_;
  double Omega_;
  double g_;
};

// Truncation heuristic N_tr = ceil(4 R max(1, g^2)) + 100.
std::size_t default_truncation(const RabiParams& params);

}  // namespace rabi
