#pragma once

// Closed-form critical laws of the semiclassical density of states and
// least-squares extraction of the divergence from sampled curves.

#include <cstddef>
#include <vector>

#include "rabi/semiclassical.hpp"

namespace rabi::asymptotics {

enum class LawKind { PowerLawQPT, LogESQPT };
enum class Side { Above, Below, Both };

struct CriticalLaw {
  LawKind kind;
  double g;
  double prefactor;  // units of 1/omega0
  double exponent;   // -1/4 for the power law; 0 (unused) for the log law
};

// nu(-1 + d, g = 1) ~ Gamma(5/4)/Gamma(3/4) 2^{5/4} / (omega0 sqrt(pi)) d^{-1/4}
CriticalLaw law_power_qpt(double omega0);

// nu(eps, g > 1) ~ -ln|eps + 1| / (omega0 pi sqrt(g^2 - 1))
CriticalLaw law_log_esqpt(double omega0, double g);

// Value of the law at distance d > 0 from eps_c (without the additive constant of the log law).
double evaluate(const CriticalLaw& law, double distance);

struct FitWindow {
  double min_distance;
  double max_distance;
};

inline constexpr FitWindow kSemiclassicalWindow{1e-6, 1e-3};

struct FitReport {
  LawKind kind;
  Side side;
  FitWindow window;
  std::size_t points = 0;
  // PowerLawQPT: slope = exponent of ln nu vs ln d, intercept = ln(prefactor).
  // LogESQPT: slope of nu vs -ln d, intercept = nu extrapolated to d = 1 (absorbs K).
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;

  double prefactor() const;  // exp(intercept) for the power law, slope for the log law
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FitReport fit_divergence(const semiclassical::DosCurve& curve, double eps_c, LawKind kind, FitWindow window,
                         Side side = Side::Above);

// Geometric grid of `count` distances in [min, max], mapped to eps_c +- d.
std::vector<double> geometric_grid(double eps_c, FitWindow window, std::size_t count, Side side);

// Semiclassical curve sampled for fitting.
semiclassical::DosCurve semiclassical_critical_curve(double g, FitWindow window, std::size_t count, Side side,
                                                     const semiclassical::QuadOptions& options = {});

}  // namespace rabi::asymptotics
