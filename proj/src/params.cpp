#include "rabi/params.hpp"

#include <algorithm>
#include <cmath>

namespace rabi {

RabiParams RabiParams::from_coupling(double omega0, double Omega, double g) {
  if (!std::isfinite(omega0) || !std::isfinite(Omega) || !std::isfinite(g))
    throw InvalidArgument("RabiParams: non-finite parameter");
  if (omega0 <= 0.0 || Omega <= 0.0) throw InvalidArgument("RabiParams: frequencies must be positive");
  if (g < 0.0) throw InvalidArgument("RabiParams: coupling g must be non-negative");
  if (Omega < omega0) throw InvalidArgument("RabiParams: frequency ratio Omega/omega0 must be >= 1");
  return RabiParams(omega0, Omega, g);
}

RabiParams RabiParams::from_lambda(double omega0, double Omega, double lambda) {
  if (!std::isfinite(omega0) || !std::isfinite(Omega) || !std::isfinite(lambda))
    throw InvalidArgument("RabiParams: non-finite parameter");
  if (omega0 <= 0.0 || Omega <= 0.0) throw InvalidArgument("RabiParams: frequencies must be positive");
  return from_coupling(omega0, Omega, 2.0 * lambda / std::sqrt(omega0 * Omega));
}

double RabiParams::lambda() const { return 0.5 * g_ * std::sqrt(omega0_ * Omega_); }

std::size_t default_truncation(const RabiParams& params) {
  const double g2 = std::max(1.0, params.g() * params.g());
  return static_cast<std::size_t>(std::ceil(4.0 * params.ratio() * g2)) + 100;
}

}  // namespace rabi
