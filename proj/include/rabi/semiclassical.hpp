#pragma once

// Semiclassical limit of the Rabi model on the low-energy spin branch.
//
// Rescaled coordinates x, p and rescaled energy eps = 2E/Omega. The classical
// shell is p^2 = r(x) = eps - x^2 + sqrt(1 + 2 g^2 x^2). Densities are returned
// in units of 1/omega0 (i.e. with omega0 = 1 they are states per unit bare
// energy, summed over both parity sectors).

#include <stdexcept>
#include <string>
#include <vector>

namespace rabi::semiclassical {

enum class Branch { Lower, Upper };

class NoAllowedOrbit : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DivergentPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

inline constexpr double kCriticalEnergy = -1.0;
inline constexpr double kDefaultQuadTol = 1e-9;
inline constexpr double kDivergenceGuard = 1e-8;

// V^{+-}(x) / Omega = x^2/2 +- sqrt(1 + 2 g^2 x^2) / 2.
double potential_value(Branch branch, double g, double x);

// Rescaled ground-state energy: -1 for g <= 1, -(g^2 + g^-2)/2 otherwise.
double ground_energy(double g);

struct TurningPoints {
  double x1 = 0.0;
  double x2 = 0.0;
  bool disconnected = false;  // two mirror wells (g > 1, eps < -1)
};

TurningPoints turning_points(double g, double eps);

// r(x) = eps - x^2 + sqrt(1 + 2 g^2 x^2)
double radicand(double g, double eps, double x);

struct QuadOptions {
  double tol = kDefaultQuadTol;  // relative
  unsigned max_depth = 30;
};

// nu(eps, g) = (2/pi) int_{x1}^{x2} dx / sqrt(r(x)).
double dos(double g, double eps, const QuadOptions& options = {});

// N(eps, g) = (4/pi) int_{x1}^{x2} sqrt(r(x)) dx; dN/deps = nu. Zero at the ground energy.
double accumulated_states(double g, double eps, const QuadOptions& options = {});

// Level count below bare energy E for bare parameters, both parity sectors:
// (Omega / (2 omega0)) N(2E/Omega, 2 lambda / sqrt(omega0 Omega)). Zero below the ground energy.
double accumulated_states_bare(double energy, double omega0, double Omega, double lambda,
                               const QuadOptions& options = {});

struct ShellObservables {
  double nphot_scaled;  // (omega0/Omega) <a^dag a>, without the -omega0/(2 Omega) zero-point shift
  double sz;            // <sigma_z>
};

// Energy-shell averages over the classical orbit at eps.
ShellObservables observables_microcanonical(double g, double eps, const QuadOptions& options = {});

// Same observables from -dN/d(omega0) / nu and -2 dN/d(Omega) / nu, with N in
// bare variables at fixed lambda, by central differences of relative step `step`.
ShellObservables observables_hellmann_feynman(double g, double eps, double step = 1e-5,
                                              const QuadOptions& options = {.tol = 1e-13, .max_depth = 30});

enum class DosSource { Semiclassical, QuantumWindowed };

struct DosCurve {
  double g = 0.0;
  DosSource source = DosSource::Semiclassical;
  std::vector<double> grid;  // eps
  std::vector<double> nu;    // units of 1/omega0
  std::vector<double> ncum;  // empty unless requested
};

DosCurve dos_curve(double g, const std::vector<double>& grid, bool with_ncum = false,
                   const QuadOptions& options = {});

struct ObservableCurve {
  double g = 0.0;
  std::vector<double> grid;
  std::vector<double> nphot_scaled;
  std::vector<double> sz;
};

ObservableCurve observable_curve(double g, const std::vector<double>& grid, const QuadOptions& options = {});

}  // namespace rabi::semiclassical
