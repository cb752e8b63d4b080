#include "rabi/semiclassical.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

namespace rabi::semiclassical {
namespace {

using boost::math::quadrature::gauss_kronrod;

void check_finite(double g, double eps) {
  if (!std::isfinite(g) || !std::isfinite(eps)) throw std::invalid_argument("semiclassical: non-finite argument");
  if (g < 0.0) throw std::invalid_argument("semiclassical: g must be non-negative");
}

bool within_guard(double g, double eps) {
  // Slack absorbs the rounding of eps = -1 + guard itself.
  return g > 1.0 && std::abs(eps - kCriticalEnergy) < kDivergenceGuard * (1.0 - 1e-6);
}

// Classical shell at (g, eps). y_plus, y_minus are the roots in y = x^2 of
// y^2 - 2(eps + g^2) y + eps^2 - 1, so that
//   r(x) = (y_plus - x^2)(x^2 - y_minus) / (S + x^2 - eps),  S = sqrt(1 + 2 g^2 x^2),
// wherever the denominator is positive.
struct Shell {
  double g;
  double g2;
  double eps;
  double y_plus;
  double y_minus;
  double x1;
  double x2;
  bool disconnected;
  bool empty;  // eps at the ground energy: the orbit has collapsed
};

Shell make_shell(double g, double eps) {
  check_finite(g, eps);
  const double eps_gs = ground_energy(g);
  if (eps < eps_gs) throw NoAllowedOrbit("no allowed orbit: eps below the ground energy");
  Shell s{g, g * g, eps, 0.0, 0.0, 0.0, 0.0, false, eps == eps_gs};
  if (s.empty) {
    if (g > 1.0) {
      s.y_plus = s.y_minus = eps + s.g2;
      s.x1 = s.x2 = std::sqrt(s.y_plus);
      s.disconnected = true;
    }
    return s;
  }
  const double disc = std::sqrt(std::max(0.0, s.g2 * s.g2 + 2.0 * eps * s.g2 + 1.0));
  const double b = eps + s.g2;
  const double c = (eps - 1.0) * (eps + 1.0);
  if (b >= 0.0) {
    s.y_plus = b + disc;
    s.y_minus = c / s.y_plus;
  } else {
    s.y_minus = b - disc;
    s.y_plus = c / s.y_minus;
  }
  s.disconnected = g > 1.0 && eps < kCriticalEnergy;
  s.x2 = std::sqrt(s.y_plus);
  s.x1 = s.disconnected ? std::sqrt(s.y_minus) : 0.0;
  return s;
}

struct Accumulator {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

template <class F>
void integrate(F&& f, double a, double b, const QuadOptions& opt, Accumulator& acc) {
  if (!(b > a)) return;
  double err = 0.0, l1 = 0.0;
  const double v = gauss_kronrod<double, 31>::integrate(f, a, b, opt.max_depth, opt.tol, &err, &l1);
  acc.value += v;
  acc.error += err;
  acc.l1 += l1;
}

// int_{x1}^{x2} w(x, S, r) / sqrt(r) dx over the shell. The inverse square-root
// endpoint singularities are removed by substitution: x = x2 - t^2 near the
// outer turning point, x = x1 cosh(u) at an inner turning point, and
// x = s sinh(u) with s^2 = -y_minus when the orbit passes close to the
// barrier top at x = 0 (the logarithmic region near eps_c).
template <class W>
double shell_integral(const Shell& s, W&& w, const QuadOptions& opt) {
  if (s.empty) return 0.0;
  const double g2 = s.g2, eps = s.eps, x1 = s.x1, x2 = s.x2;
  const double y_plus = s.y_plus, y_minus = s.y_minus;
  auto sroot = [g2](double x) { return std::sqrt(1.0 + 2.0 * g2 * x * x); };
  auto gap_minus = [&](double x) { return s.disconnected ? (x - x1) * (x + x1) : x * x - y_minus; };

  enum class Lower { Cosh, Sinh, Plain } lower;
  double xm;
  if (s.disconnected) {
    lower = Lower::Cosh;
    xm = 0.5 * (x1 + x2);
  } else if (y_minus < 0.0 && eps <= 0.5) {
    lower = Lower::Sinh;
    xm = 0.5 * x2;
  } else {
    lower = Lower::Plain;
    xm = 0.5 * (std::sqrt(std::max(0.0, y_minus)) + x2);
  }

  Accumulator acc;
  switch (lower) {
    case Lower::Cosh: {
      auto f = [&](double u) {
        const double x = x1 * std::cosh(u);
        const double S = sroot(x);
        const double den = S + x * x - eps;
        const double gp = (x2 - x) * (x2 + x);
        const double sh = x1 * std::sinh(u);
        const double r = gp * sh * sh / den;
        return w(x, S, r) * std::sqrt(den / gp);
      };
      integrate(f, 0.0, std::acosh(xm / x1), opt, acc);
      break;
    }
    case Lower::Sinh: {
      const double scale = std::sqrt(-y_minus);
      auto f = [&](double u) {
        const double x = scale * std::sinh(u);
        const double S = sroot(x);
        const double den = S + x * x - eps;
        const double gp = (x2 - x) * (x2 + x);
        const double ch = scale * std::cosh(u);
        const double r = gp * ch * ch / den;
        return w(x, S, r) * std::sqrt(den / gp);
      };
      integrate(f, 0.0, std::asinh(xm / scale), opt, acc);
      break;
    }
    case Lower::Plain: {
      auto f = [&](double x) {
        const double S = sroot(x);
        const double r = eps - x * x + S;
        return w(x, S, r) / std::sqrt(r);
      };
      integrate(f, 0.0, xm, opt, acc);
      break;
    }
  }

  auto upper = [&](double t) {
    const double x = x2 - t * t;
    const double S = sroot(x);
    const double den = S + x * x - eps;
    const double gp_over_t2 = 2.0 * x2 - t * t;
    const double gm = gap_minus(x);
    const double r = t * t * gp_over_t2 * gm / den;
    return 2.0 * w(x, S, r) * std::sqrt(den / (gp_over_t2 * gm));
  };
  integrate(upper, 0.0, std::sqrt(x2 - xm), opt, acc);

  if (!std::isfinite(acc.value) || acc.error > opt.tol * acc.l1)
    throw QuadratureError("shell quadrature did not reach tolerance: estimate " + std::to_string(acc.value) +
                              ", error " + std::to_string(acc.error),
                          acc.value, acc.error);
  return acc.value;
}

constexpr double kPi = std::numbers::pi;

double accumulated_or_zero(double g, double eps, const QuadOptions& options) {
  if (eps <= ground_energy(g)) return 0.0;
  return accumulated_states(g, eps, options);
}

}  // namespace

double potential_value(Branch branch, double g, double x) {
  const double root = 0.5 * std::sqrt(1.0 + 2.0 * g * g * x * x);
  return 0.5 * x * x + (branch == Branch::Lower ? -root : root);
}

double ground_energy(double g) {
  if (g <= 1.0) return -1.0;
  return -0.5 * (g * g + 1.0 / (g * g));
}

TurningPoints turning_points(double g, double eps) {
  const Shell s = make_shell(g, eps);
  return TurningPoints{s.x1, s.x2, s.disconnected};
}

double radicand(double g, double eps, double x) { return eps - x * x + std::sqrt(1.0 + 2.0 * g * g * x * x); }

double dos(double g, double eps, const QuadOptions& options) {
  const Shell s = make_shell(g, eps);
  if (s.empty) throw NoAllowedOrbit("dos: eps must exceed the ground energy");
  if (within_guard(g, eps)) throw DivergentPoint("dos: density of states diverges at eps_c for g > 1");
  return 2.0 / kPi * shell_integral(s, [](double, double, double) { return 1.0; }, options);
}

double accumulated_states(double g, double eps, const QuadOptions& options) {
  const Shell s = make_shell(g, eps);
  return 4.0 / kPi * shell_integral(s, [](double, double, double r) { return r; }, options);
}

double accumulated_states_bare(double energy, double omega0, double Omega, double lambda,
                               const QuadOptions& options) {
  if (!(omega0 > 0.0) || !(Omega > 0.0)) throw std::invalid_argument("accumulated_states_bare: bad frequencies");
  const double g = 2.0 * std::abs(lambda) / std::sqrt(omega0 * Omega);
  const double eps = 2.0 * energy / Omega;
  return 0.5 * Omega / omega0 * accumulated_or_zero(g, eps, options);
}

ShellObservables observables_microcanonical(double g, double eps, const QuadOptions& options) {
  const Shell s = make_shell(g, eps);
  if (s.empty) throw NoAllowedOrbit("observables: eps must exceed the ground energy");
  if (within_guard(g, eps)) throw DivergentPoint("observables: undefined at eps_c for g > 1");
  const double norm = shell_integral(s, [](double, double, double) { return 1.0; }, options);
  const double inv_s = shell_integral(s, [](double, double S, double) { return 1.0 / S; }, options);
  const double phot = shell_integral(s, [](double x, double, double r) { return 0.5 * (x * x + r); }, options);
  return ShellObservables{phot / norm, -inv_s / norm};
}

ShellObservables observables_hellmann_feynman(double g, double eps, double step, const QuadOptions& options) {
  check_finite(g, eps);
  if (within_guard(g, eps)) throw DivergentPoint("observables: undefined at eps_c for g > 1");
  // Reference bare point omega0 = Omega = 1, so lambda = g/2 and E = eps/2.
  const double lambda = 0.5 * g;
  const double energy = 0.5 * eps;
  const double nu = dos(g, eps, options);
  const double h = step;
  const double d_omega0 = (accumulated_states_bare(energy, 1.0 + h, 1.0, lambda, options) -
                           accumulated_states_bare(energy, 1.0 - h, 1.0, lambda, options)) /
                          (2.0 * h);
  const double d_Omega = (accumulated_states_bare(energy, 1.0, 1.0 + h, lambda, options) -
                          accumulated_states_bare(energy, 1.0, 1.0 - h, lambda, options)) /
                         (2.0 * h);
  return ShellObservables{-d_omega0 / nu, -2.0 * d_Omega / nu};
}

DosCurve dos_curve(double g, const std::vector<double>& grid, bool with_ncum, const QuadOptions& options) {
  DosCurve curve;
  curve.g = g;
  curve.source = DosSource::Semiclassical;
  curve.grid = grid;
  curve.nu.reserve(grid.size());
  for (double e : grid) curve.nu.push_back(dos(g, e, options));
  if (with_ncum)
    for (double e : grid) curve.ncum.push_back(accumulated_states(g, e, options));
  return curve;
}

ObservableCurve observable_curve(double g, const std::vector<double>& grid, const QuadOptions& options) {
  ObservableCurve curve;
  curve.g = g;
  curve.grid = grid;
  for (double e : grid) {
    const auto obs = observables_microcanonical(g, e, options);
    curve.nphot_scaled.push_back(obs.nphot_scaled);
    curve.sz.push_back(obs.sz);
  }
  return curve;
}

}  // namespace rabi::semiclassical
