#include "rabi/asymptotics.hpp"
#include "rabi/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rabi::asymptotics {

CriticalLaw law_power_qpt(double omega0) {
  if (!(omega0 > 0.0)) throw InvalidArgument("law_power_qpt: omega0 must be positive");
  const double prefactor =
      std::tgamma(1.25) / std::tgamma(0.75) * std::pow(2.0, 1.25) / (omega0 * std::sqrt(std::numbers::pi));
  return CriticalLaw{LawKind::PowerLawQPT, 1.0, prefactor, -0.25};
}

CriticalLaw law_log_esqpt(double omega0, double g) {
  if (!(omega0 > 0.0)) throw InvalidArgument("law_log_esqpt: omega0 must be positive");
  if (!(g > 1.0)) throw InvalidArgument("law_log_esqpt: requires g > 1");
  return CriticalLaw{LawKind::LogESQPT, g, 1.0 / (omega0 * std::numbers::pi * std::sqrt(g * g - 1.0)), 0.0};
}

double evaluate(const CriticalLaw& law, double distance) {
  if (law.kind == LawKind::PowerLawQPT) return law.prefactor * std::pow(distance, law.exponent);
  return -law.prefactor * std::log(distance);
}

double FitReport::prefactor() const { return kind == LawKind::PowerLawQPT ? std::exp(intercept) : slope; }

FitReport fit_divergence(const semiclassical::DosCurve& curve, double eps_c, LawKind kind, FitWindow window,
                         Side side) {
  if (curve.grid.size() != curve.nu.size()) throw FitError("fit_divergence: grid/nu size mismatch");
  if (!(window.min_distance > 0.0) || !(window.max_distance > window.min_distance))
    throw FitError("fit_divergence: invalid window");
  if (kind == LawKind::PowerLawQPT && curve.g != 1.0) throw FitError("fit_divergence: power law requires g = 1");
  if (kind == LawKind::LogESQPT && !(curve.g > 1.0)) throw FitError("fit_divergence: log law requires g > 1");

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    const double offset = curve.grid[i] - eps_c;
    const double d = std::abs(offset);
    if (d < window.min_distance * (1.0 - 1e-9) || d > window.max_distance * (1.0 + 1e-9)) continue;
    if (side == Side::Above && offset <= 0.0) continue;
    if (side == Side::Below && offset >= 0.0) continue;
    if (kind == LawKind::PowerLawQPT) {
      if (!(curve.nu[i] > 0.0)) continue;
      xs.push_back(std::log(d));
      ys.push_back(std::log(curve.nu[i]));
    } else {
      xs.push_back(-std::log(d));
      ys.push_back(curve.nu[i]);
    }
  }
  if (xs.size() < 5) throw FitError("fit_divergence: fewer than 5 points in window");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("fit_divergence: degenerate abscissae");

  FitReport report{kind, side, window, xs.size(), sxy / sxx, 0.0, 0.0};
  report.intercept = my - report.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double res = ys[i] - (report.intercept + report.slope * xs[i]);
    rss += res * res;
  }
  report.residual_norm = std::sqrt(rss);
  return report;
}

std::vector<double> geometric_grid(double eps_c, FitWindow window, std::size_t count, Side side) {
  if (count < 2) throw InvalidArgument("geometric_grid: count must be >= 2");
  std::vector<double> distances(count);
  const double lmin = std::log(window.min_distance), lmax = std::log(window.max_distance);
  for (std::size_t i = 0; i < count; ++i)
    distances[i] = std::exp(lmin + (lmax - lmin) * static_cast<double>(i) / static_cast<double>(count - 1));
  std::vector<double> grid;
  if (side != Side::Above)
    for (auto it = distances.rbegin(); it != distances.rend(); ++it) grid.push_back(eps_c - *it);
  if (side != Side::Below)
    for (double d : distances) grid.push_back(eps_c + d);
  return grid;
}

semiclassical::DosCurve semiclassical_critical_curve(double g, FitWindow window, std::size_t count, Side side,
                                                     const semiclassical::QuadOptions& options) {
  return semiclassical::dos_curve(g, geometric_grid(semiclassical::kCriticalEnergy, window, count, side), false,
                                  options);
}

}  // namespace rabi::asymptotics
