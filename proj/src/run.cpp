#include "rabi/run.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "rabi/asymptotics.hpp"
#include "rabi/csv.hpp"
#include "rabi/quantum.hpp"
#include "rabi/semiclassical.hpp"
#include "rabi/spectral_stats.hpp"
#include "rabi/svg.hpp"

namespace rabi::io {

namespace sc = rabi::semiclassical;
using nlohmann::json;

const char* to_string(Command c) {
  switch (c) {
    case Command::Spectrum: return "spectrum";
    case Command::Gapmap: return "gapmap";
    case Command::Dos: return "dos";
    case Command::Observables: return "observables";
    case Command::Probabilities: return "probabilities";
    case Command::Asymptotics: return "asymptotics";
  }
  return "?";
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::Spectrum, Command::Gapmap, Command::Dos, Command::Observables, Command::Probabilities,
                    Command::Asymptotics})
    if (name == to_string(c)) return c;
  return std::nullopt;
}

double RunConfig::effective_ratio() const {
  if (ratio) return *ratio;
  return (command == Command::Spectrum || command == Command::Gapmap) ? 40.0 : 1e3;
}

void apply_config_file(const std::filesystem::path& path, RunConfig& c) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  try {
    if (j.contains("omega0")) c.omega0 = j["omega0"].get<double>();
    if (j.contains("ratio")) c.ratio = j["ratio"].get<double>();
    if (j.contains("g")) c.g = j["g"].get<double>();
    if (j.contains("g_min")) c.g_min = j["g_min"].get<double>();
    if (j.contains("g_max")) c.g_max = j["g_max"].get<double>();
    if (j.contains("g_steps")) c.g_steps = j["g_steps"].get<std::size_t>();
    if (j.contains("levels")) c.levels = j["levels"].get<std::size_t>();
    if (j.contains("window")) c.window = j["window"].get<std::size_t>();
    if (j.contains("quad_tol")) c.quad_tol = j["quad_tol"].get<double>();
    if (j.contains("conv_tol")) c.conv_tol = j["conv_tol"].get<double>();
    if (j.contains("eps_min")) c.eps_min = j["eps_min"].get<double>();
    if (j.contains("eps_max")) c.eps_max = j["eps_max"].get<double>();
    if (j.contains("points")) c.points = j["points"].get<std::size_t>();
    if (j.contains("truncation")) c.truncation = j["truncation"].get<std::size_t>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("emit_svg")) c.emit_svg = j["emit_svg"].get<bool>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Quantum Rabi model: spectra, density of states and excited-state criticality", "rabi-esqpt"};
  app.require_subcommand(1);

  struct Flags {
    std::optional<std::string> config;
    std::optional<double> omega0, ratio, g, g_min, g_max, quad_tol, conv_tol, eps_min, eps_max;
    std::optional<std::size_t> g_steps, levels, window, points, truncation;
    std::optional<std::string> out;
    bool emit_svg = false;
  } fl;

  std::vector<CLI::App*> subs;
  for (Command c : {Command::Spectrum, Command::Gapmap, Command::Dos, Command::Observables, Command::Probabilities,
                    Command::Asymptotics}) {
    CLI::App* s = app.add_subcommand(to_string(c));
    s->add_option("--config", fl.config, "JSON file with the same keys as the flags");
    s->add_option("--omega0", fl.omega0, "cavity frequency (energy unit)");
    s->add_option("--ratio", fl.ratio, "frequency ratio Omega/omega0");
    s->add_option("--g", fl.g, "dimensionless coupling");
    s->add_option("--g-min", fl.g_min, "sweep start");
    s->add_option("--g-max", fl.g_max, "sweep end");
    s->add_option("--g-steps", fl.g_steps, "sweep points");
    s->add_option("--levels", fl.levels, "levels per parity sector");
    s->add_option("--window", fl.window, "window size N of the averaged quantum DOS");
    s->add_option("--quad-tol", fl.quad_tol, "relative quadrature tolerance");
    s->add_option("--conv-tol", fl.conv_tol, "truncation convergence tolerance (units of omega0)");
    s->add_option("--eps-min", fl.eps_min, "lower rescaled energy");
    s->add_option("--eps-max", fl.eps_max, "upper rescaled energy");
    s->add_option("--points", fl.points, "semiclassical grid points");
    s->add_option("--truncation", fl.truncation, "Fock truncation (starting value for convergence search)");
    s->add_option("--out", fl.out, "output directory");
    s->add_flag("--emit-svg", fl.emit_svg, "write SVG plots");
    subs.push_back(s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what() + std::string("\n") + app.help());
  }

  RunConfig c;
  for (CLI::App* s : subs)
    if (s->parsed()) c.command = *parse_command(s->get_name());
  if (fl.config) apply_config_file(*fl.config, c);
  if (fl.omega0) c.omega0 = *fl.omega0;
  if (fl.ratio) c.ratio = *fl.ratio;
  if (fl.g) c.g = *fl.g;
  if (fl.g_min) c.g_min = *fl.g_min;
  if (fl.g_max) c.g_max = *fl.g_max;
  if (fl.g_steps) c.g_steps = *fl.g_steps;
  if (fl.levels) c.levels = *fl.levels;
  if (fl.window) c.window = *fl.window;
  if (fl.quad_tol) c.quad_tol = *fl.quad_tol;
  if (fl.conv_tol) c.conv_tol = *fl.conv_tol;
  if (fl.eps_min) c.eps_min = *fl.eps_min;
  if (fl.eps_max) c.eps_max = *fl.eps_max;
  if (fl.points) c.points = *fl.points;
  if (fl.truncation) c.truncation = *fl.truncation;
  if (fl.out) c.out = *fl.out;
  if (fl.emit_svg) c.emit_svg = true;
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!finite_pos(c.omega0)) throw UsageError("--omega0 must be positive");
  if (!finite_pos(c.effective_ratio()) || c.effective_ratio() < 1.0) throw UsageError("--ratio must be >= 1");
  if (!(std::isfinite(c.g) && c.g >= 0.0)) throw UsageError("--g must be non-negative");
  if (!(std::isfinite(c.g_min) && std::isfinite(c.g_max) && c.g_min >= 0.0 && c.g_max >= c.g_min))
    throw UsageError("g sweep range is empty or negative");
  if (c.g_steps < 1) throw UsageError("--g-steps must be >= 1");
  if (c.levels < 1) throw UsageError("--levels must be >= 1");
  if (c.window < 2) throw UsageError("--window must be >= 2");
  if (!finite_pos(c.quad_tol) || !finite_pos(c.conv_tol)) throw UsageError("tolerances must be positive");
  if (c.points < 2) throw UsageError("--points must be >= 2");
  if (!std::isfinite(c.eps_max) || (c.eps_min && !(*c.eps_min < c.eps_max)))
    throw UsageError("energy range is empty");
  if (c.truncation && *c.truncation < 2) throw UsageError("--truncation must be >= 2");
  if (c.command == Command::Asymptotics && c.g < 1.0) throw UsageError("asymptotics requires g >= 1");
}

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

class Context {
 public:
  Context(const RunConfig& c, std::ostream& log) : c_(c), log_(log) {}

  RabiParams params(double g) const { return RabiParams::from_coupling(c_.omega0, c_.effective_ratio() * c_.omega0, g); }

  void stamp(CsvTable& t) const {
    t.meta("command", to_string(c_.command));
    t.meta("version", RABI_VERSION);
    t.meta("omega0", c_.omega0);
    t.meta("ratio", c_.effective_ratio());
    t.meta("energy_convention", "eps = 2E/Omega");
  }

  json base_summary() const {
    return json{{"command", to_string(c_.command)}, {"version", RABI_VERSION}, {"omega0", c_.omega0},
                {"ratio", c_.effective_ratio()}};
  }

  void write(const CsvTable& t, const std::string& name) {
    t.write(c_.out / name);
    log_ << "wrote " << (c_.out / name).string() << " (" << t.rows() << " rows)\n";
  }
  void write(const json& j, const std::string& name) {
    std::ofstream f(c_.out / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (c_.out / name).string());
    f << j.dump(2) << '\n';
    log_ << "wrote " << (c_.out / name).string() << '\n';
  }
  void write(const Plot& p, const std::string& name) {
    if (!c_.emit_svg) return;
    write_svg(p, c_.out / name);
    log_ << "wrote " << (c_.out / name).string() << '\n';
  }

  ConvergenceOptions convergence(bool vectors) const {
    ConvergenceOptions o;
    o.tol = c_.conv_tol;
    o.want_vectors = vectors;
    o.start_dim = c_.truncation;
    return o;
  }

  sc::QuadOptions quad() const { return sc::QuadOptions{.tol = c_.quad_tol}; }

  // Semiclassical grid over (eps_gs, eps_max], avoiding the divergence guard band.
  std::vector<double> eps_grid(double g) const {
    const double eps_gs = sc::ground_energy(g);
    const double lo = std::max(c_.eps_min.value_or(eps_gs), eps_gs);
    std::vector<double> grid;
    for (double e : linspace(lo, c_.eps_max, c_.points)) {
      if (e <= eps_gs) continue;
      if (g > 1.0 && std::abs(e - sc::kCriticalEnergy) < 10.0 * sc::kDivergenceGuard) continue;
      grid.push_back(e);
    }
    return grid;
  }

  const RunConfig& c_;
  std::ostream& log_;
};

int run_spectrum(Context& ctx) {
  const RunConfig& c = ctx.c_;
  CsvTable table({"g", "parity", "k", "energy", "eps"});
  ctx.stamp(table);
  table.meta("levels", static_cast<double>(c.levels));
  table.meta("truncation", c.truncation ? std::to_string(*c.truncation) : "ceil(4 ratio max(1,g^2))+100");
  table.meta("units", "energy in units of omega0; eps dimensionless");
  Plot plot;
  plot.axes = Axes{"Rabi spectrum, Omega/omega0 = " + format_number(c.effective_ratio()), "g", "eps = 2E/Omega"};
  std::vector<Series> lines;
  const auto gs = linspace(c.g_min, c.g_max, c.g_steps);
  std::vector<std::vector<double>> tracks[2];
  double last_gap = 0.0;
  for (double g : gs) {
    const RabiParams p = ctx.params(g);
    const std::size_t dim = std::max(c.truncation.value_or(default_truncation(p)), c.levels + 2);
    double e0[2] = {0, 0};
    for (int s = 0; s < 2; ++s) {
      const Parity parity = s == 0 ? Parity::Plus : Parity::Minus;
      const auto spec = diagonalize(build_parity_chain(p, parity, dim), c.levels);
      tracks[s].resize(spec.eps.size());
      for (std::size_t k = 0; k < spec.eps.size(); ++k) {
        table.add_row({g, std::string(rabi::to_string(parity)), static_cast<long long>(k), spec.energies[k], spec.eps[k]});
        tracks[s][k].push_back(spec.eps[k]);
      }
      e0[s] = spec.eps.front();
    }
    last_gap = e0[0] - e0[1];
  }
  ctx.write(table, "spectrum.csv");
  for (int s = 0; s < 2; ++s)
    for (std::size_t k = 0; k < tracks[s].size(); ++k)
      plot.series.push_back(Series{k == 0 ? (s == 0 ? "parity +" : "parity -") : "", gs, tracks[s][k], false,
                                   s == 0 ? "#2ca02c" : "#d62728"});
  ctx.write(plot, "spectrum.svg");
  json j = ctx.base_summary();
  j["g_points"] = gs.size();
  j["levels"] = c.levels;
  j["delta0_at_g_max"] = last_gap;
  {
    const RabiParams p = ctx.params(gs.back());
    const std::size_t dim = std::max(c.truncation.value_or(default_truncation(p)), c.levels + 2);
    try {
      j["delta0_at_g_max_extended"] = stats::parity_splitting(p, 0, dim);
    } catch (const ConvergenceError&) {
      j["delta0_at_g_max_extended"] = nullptr;
    }
  }
  ctx.write(j, "spectrum.json");
  return 0;
}

int run_gapmap(Context& ctx) {
  const RunConfig& c = ctx.c_;
  const auto gs = linspace(c.g_min, c.g_max, c.g_steps);
  stats::GapMapOptions opts{c.omega0, c.conv_tol, c.truncation.value_or(0)};
  const auto map = stats::gap_map(c.effective_ratio(), gs, c.levels, opts);
  CsvTable table({"g", "k", "eps_mean", "delta", "abs_delta", "converged"});
  ctx.stamp(table);
  table.meta("levels", static_cast<double>(c.levels));
  table.meta("conv_tol", c.conv_tol);
  table.meta("delta", "eps_k^+ - eps_k^-");
  // Above eps = 1 the upper spin branch adds exact crossings unrelated to tunnelling.
  std::size_t small = 0, small_lower = 0;
  double lower_eps_max = -std::numeric_limits<double>::infinity(), lower_g_min = std::numeric_limits<double>::infinity();
  double small_eps_max = -std::numeric_limits<double>::infinity(), small_g_min = std::numeric_limits<double>::infinity();
  Series pts{"", {}, {}, true, "#000000"};
  for (const auto& e : map.entries) {
    table.add_row({e.g, static_cast<long long>(e.k), e.eps_mean, e.delta, std::abs(e.delta),
                   static_cast<long long>(e.converged)});
    if (!e.converged) continue;
    pts.x.push_back(e.eps_mean);
    pts.y.push_back(e.g);
    pts.values.push_back(std::log10(std::max(std::abs(e.delta), 1e-16)));
    if (std::abs(e.delta) < 1e-3) {
      ++small;
      small_eps_max = std::max(small_eps_max, e.eps_mean);
      small_g_min = std::min(small_g_min, e.g);
      if (e.eps_mean < 1.0) {
        ++small_lower;
        lower_eps_max = std::max(lower_eps_max, e.eps_mean);
        lower_g_min = std::min(lower_g_min, e.g);
      }
    }
  }
  ctx.write(table, "gapmap.csv");
  Plot plot;
  plot.axes = Axes{"log10 |Delta_k|, Omega/omega0 = " + format_number(c.effective_ratio()), "eps", "g"};
  plot.axes.vlines = {-1.0};
  plot.series.push_back(pts);
  ctx.write(plot, "gapmap.svg");
  json j = ctx.base_summary();
  j["entries"] = map.entries.size();
  j["excluded_unconverged"] = map.excluded;
  j["small_gap_count"] = small;
  if (small) {
    j["small_gap_eps_max"] = small_eps_max;
    j["small_gap_g_min"] = small_g_min;
  }
  j["lower_branch_small_gap_count"] = small_lower;
  if (small_lower) {
    j["lower_branch_small_gap_eps_max"] = lower_eps_max;
    j["lower_branch_small_gap_g_min"] = lower_g_min;
  }
  ctx.write(j, "gapmap.json");
  return 0;
}

struct QuantumPair {
  ConvergedWindow plus;
  ConvergedWindow minus;
};

QuantumPair quantum_pair(const Context& ctx, double g, bool vectors) {
  const RabiParams p = ctx.params(g);
  const auto o = ctx.convergence(vectors);
  return QuantumPair{converged_window(p, Parity::Plus, ctx.c_.eps_max, o),
                     converged_window(p, Parity::Minus, ctx.c_.eps_max, o)};
}

bool in_overlay_band(double eps) { return (eps >= -1.6 && eps <= -1.1) || (eps >= -0.9 && eps <= 0.0); }

int run_dos(Context& ctx) {
  const RunConfig& c = ctx.c_;
  const double g = c.g;
  const auto grid = ctx.eps_grid(g);
  const auto curve = sc::dos_curve(g, grid, true, ctx.quad());
  CsvTable semi({"eps", "nu", "ncum"});
  ctx.stamp(semi);
  semi.meta("g", g);
  semi.meta("quad_tol", c.quad_tol);
  semi.meta("units", "nu in 1/omega0 (levels per unit energy, both parities); ncum dimensionless");
  for (std::size_t i = 0; i < grid.size(); ++i) semi.add_row({grid[i], curve.nu[i], curve.ncum[i]});
  ctx.write(semi, "dos_semiclassical.csv");

  const auto q = quantum_pair(ctx, g, false);
  const auto wd = stats::windowed_dos(q.plus.spectrum, q.minus.spectrum, c.window);
  CsvTable quant({"eps_bar", "nu_bar", "nu"});
  ctx.stamp(quant);
  quant.meta("g", g);
  quant.meta("window", static_cast<double>(c.window));
  quant.meta("dim_plus", static_cast<double>(q.plus.dim_required));
  quant.meta("dim_minus", static_cast<double>(q.minus.dim_required));
  quant.meta("conv_tol", c.conv_tol);
  quant.meta("eps_max", c.eps_max);
  quant.meta("units", "nu_bar = N/delta_eps (per unit eps); nu = nu_bar * 2 omega0/Omega (1/omega0)");
  double max_dev = 0.0;
  for (const auto& pt : wd.points) {
    quant.add_row({pt.eps_bar, pt.nu_bar, pt.nu});
    if (in_overlay_band(pt.eps_bar) && pt.eps_bar > sc::ground_energy(g)) {
      const double ref = sc::dos(g, pt.eps_bar, ctx.quad());
      max_dev = std::max(max_dev, std::abs(pt.nu - ref) / ref);
    }
  }
  ctx.write(quant, "dos_quantum.csv");

  Plot plot;
  plot.axes = Axes{"Density of states, g = " + format_number(g) + ", N = " + std::to_string(c.window), "eps",
                   "nu (1/omega0)"};
  plot.axes.vlines = {sc::ground_energy(g), -1.0};
  plot.series.push_back(Series{"semiclassical", grid, curve.nu, false, "#000000"});
  Series qs{"quantum", {}, {}, true, "#d62728"};
  for (const auto& pt : wd.points) {
    qs.x.push_back(pt.eps_bar);
    qs.y.push_back(pt.nu);
  }
  plot.series.push_back(qs);
  ctx.write(plot, "dos.svg");

  json j = ctx.base_summary();
  j["g"] = g;
  j["window"] = c.window;
  j["quantum_points"] = wd.points.size();
  j["max_relative_deviation_overlay_band"] = max_dev;
  if (g > 1.0 && !wd.points.empty()) {
    semiclassical::DosCurve qc;
    qc.g = g;
    qc.source = sc::DosSource::QuantumWindowed;
    for (const auto& pt : wd.points) {
      qc.grid.push_back(pt.eps_bar);
      qc.nu.push_back(pt.nu);
    }
    const auto levels = stats::merge_levels(q.plus.spectrum, q.minus.spectrum);
    const double spacing = stats::local_spacing(levels, -1.0);
    try {
      const auto fit = asymptotics::fit_divergence(qc, -1.0, asymptotics::LawKind::LogESQPT, {3.0 * spacing, 0.1},
                                                   asymptotics::Side::Above);
      j["quantum_log_slope_above"] = fit.slope;
      j["law_log_prefactor"] = asymptotics::law_log_esqpt(c.omega0, g).prefactor * c.omega0;
    } catch (const asymptotics::FitError& e) {
      j["quantum_log_fit_error"] = e.what();
    }
  }
  ctx.write(j, "dos.json");
  return 0;
}

int run_observables(Context& ctx) {
  const RunConfig& c = ctx.c_;
  const double g = c.g;
  const auto grid = ctx.eps_grid(g);
  const auto curve = sc::observable_curve(g, grid, ctx.quad());
  CsvTable semi({"eps", "nphot_scaled", "tls_population", "sz"});
  ctx.stamp(semi);
  semi.meta("g", g);
  semi.meta("quad_tol", c.quad_tol);
  semi.meta("nphot_scaled", "(omega0/Omega) <a^dag a>, zero-point shift omitted");
  semi.meta("tls_population", "(<sigma_z> + 1)/2");
  for (std::size_t i = 0; i < grid.size(); ++i)
    semi.add_row({grid[i], curve.nphot_scaled[i], 0.5 * (curve.sz[i] + 1.0), curve.sz[i]});
  ctx.write(semi, "observables_semiclassical.csv");

  const auto q = quantum_pair(ctx, g, true);
  CsvTable quant({"parity", "k", "eps", "n_phot", "nphot_scaled", "sz", "tls_population"});
  ctx.stamp(quant);
  quant.meta("g", g);
  quant.meta("dim_plus", static_cast<double>(q.plus.dim_required));
  quant.meta("dim_minus", static_cast<double>(q.minus.dim_required));
  quant.meta("conv_tol", c.conv_tol);
  quant.meta("eps_max", c.eps_max);
  const double inv_ratio = 1.0 / c.effective_ratio();
  double max_dev = 0.0;
  Series qn{"quantum", {}, {}, true, "#d62728"}, qt{"quantum", {}, {}, true, "#d62728"};
  for (const ConvergedWindow* w : {&q.plus, &q.minus}) {
    const auto obs = eigen_observables(w->spectrum);
    for (std::size_t k = 0; k < obs.eps.size(); ++k) {
      const double ns = obs.n_phot[k] * inv_ratio, tls = 0.5 * (obs.sz[k] + 1.0);
      quant.add_row({std::string(rabi::to_string(obs.parity)), static_cast<long long>(k), obs.eps[k], obs.n_phot[k],
                     ns, obs.sz[k], tls});
      qn.x.push_back(obs.eps[k]);
      qn.y.push_back(ns);
      qt.x.push_back(obs.eps[k]);
      qt.y.push_back(tls);
      if (std::abs(obs.eps[k] + 1.0) > 0.05 && obs.eps[k] > sc::ground_energy(g)) {
        const auto ref = sc::observables_microcanonical(g, obs.eps[k], ctx.quad());
        max_dev = std::max(max_dev, std::abs(ns - ref.nphot_scaled) / ref.nphot_scaled);
        max_dev = std::max(max_dev, std::abs(tls - 0.5 * (ref.sz + 1.0)) / (0.5 * (ref.sz + 1.0)));
      }
    }
  }
  ctx.write(quant, "observables_quantum.csv");

  Plot pn, pt;
  pn.axes = Axes{"Photon number, g = " + format_number(g), "eps", "<a^dag a> omega0/Omega"};
  pt.axes = Axes{"TLS population, g = " + format_number(g), "eps", "(<sigma_z>+1)/2"};
  pn.axes.vlines = pt.axes.vlines = {-1.0};
  pn.series.push_back(Series{"semiclassical", grid, curve.nphot_scaled, false, "#000000"});
  std::vector<double> tls_curve;
  for (double s : curve.sz) tls_curve.push_back(0.5 * (s + 1.0));
  pt.series.push_back(Series{"semiclassical", grid, tls_curve, false, "#000000"});
  pn.series.push_back(qn);
  pt.series.push_back(qt);
  ctx.write(pn, "observables_nphot.svg");
  ctx.write(pt, "observables_tls.svg");

  json j = ctx.base_summary();
  j["g"] = g;
  j["quantum_states"] = quant.rows();
  j["max_relative_deviation_away_from_eps_c"] = max_dev;
  ctx.write(j, "observables.json");
  return 0;
}

int run_probabilities(Context& ctx) {
  const RunConfig& c = ctx.c_;
  const double g = c.g;
  const auto q = quantum_pair(ctx, g, true);
  CsvTable table({"parity", "k", "eps", "probability"});
  ctx.stamp(table);
  table.meta("g", g);
  table.meta("dim_plus", static_cast<double>(q.plus.dim_required));
  table.meta("dim_minus", static_cast<double>(q.minus.dim_required));
  table.meta("conv_tol", c.conv_tol);
  table.meta("eps_max", c.eps_max);
  table.meta("probability", "parity -: |<0,down|phi_k>|^2; parity +: |<1,down|phi_k>|^2");
  json j = ctx.base_summary();
  j["g"] = g;
  Plot plot;
  plot.axes = Axes{"Localization probability, g = " + format_number(g), "eps", "P"};
  plot.axes.vlines = {-1.0};
  for (const ConvergedWindow* w : {&q.minus, &q.plus}) {
    const auto obs = eigen_observables(w->spectrum);
    Series s{w->spectrum.parity == Parity::Minus ? "P_{0,down}^-" : "P_{1,down}^+", {}, {}, true,
             w->spectrum.parity == Parity::Minus ? "#d62728" : "#1f77b4"};
    std::size_t best = 0;
    for (std::size_t k = 0; k < obs.eps.size(); ++k) {
      table.add_row({std::string(rabi::to_string(obs.parity)), static_cast<long long>(k), obs.eps[k], obs.p_loc[k]});
      s.x.push_back(obs.eps[k]);
      s.y.push_back(obs.p_loc[k]);
      if (obs.p_loc[k] > obs.p_loc[best]) best = k;
    }
    if (!obs.eps.empty()) {
      const std::string key = w->spectrum.parity == Parity::Minus ? "minus" : "plus";
      j[key + "_argmax_eps"] = obs.eps[best];
      j[key + "_max_probability"] = obs.p_loc[best];
    }
    plot.series.push_back(s);
  }
  ctx.write(table, "probabilities.csv");
  ctx.write(plot, "probabilities.svg");
  ctx.write(j, "probabilities.json");
  return 0;
}

int run_asymptotics(Context& ctx) {
  const RunConfig& c = ctx.c_;
  const double g = c.g;
  namespace as = rabi::asymptotics;
  const as::FitWindow window = as::kSemiclassicalWindow;
  json j = ctx.base_summary();
  j["g"] = g;
  j["window"] = {window.min_distance, window.max_distance};
  CsvTable table({"eps", "distance", "nu"});
  ctx.stamp(table);
  table.meta("g", g);
  table.meta("quad_tol", c.quad_tol);
  table.meta("units", "nu in 1/omega0; distance = |eps + 1|");
  Plot plot;
  plot.axes = Axes{"Critical scaling, g = " + format_number(g), g == 1.0 ? "ln(eps + 1)" : "-ln|eps + 1|",
                   g == 1.0 ? "ln nu" : "nu"};
  const as::Side side = g == 1.0 ? as::Side::Above : as::Side::Both;
  const auto curve = as::semiclassical_critical_curve(g, window, 40, side, ctx.quad());
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    table.add_row({curve.grid[i], std::abs(curve.grid[i] + 1.0), curve.nu[i] / c.omega0});
  if (g == 1.0) {
    const auto law = as::law_power_qpt(c.omega0);
    const auto fit = as::fit_divergence(curve, -1.0, as::LawKind::PowerLawQPT, window);
    j["law"] = "power";
    j["law_exponent"] = law.exponent;
    j["law_prefactor"] = law.prefactor;
    j["exponent"] = fit.slope;
    j["fitted_prefactor"] = std::exp(fit.intercept) / c.omega0;
    j["residual_norm"] = fit.residual_norm;
    j["points"] = fit.points;
    Series s{"semiclassical", {}, {}, true, "#d62728"};
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      s.x.push_back(std::log(curve.grid[i] + 1.0));
      s.y.push_back(std::log(curve.nu[i]));
    }
    plot.series.push_back(s);
  } else {
    const auto law = as::law_log_esqpt(c.omega0, g);
    j["law"] = "log";
    j["law_prefactor"] = law.prefactor;
    for (as::Side sd : {as::Side::Above, as::Side::Below}) {
      const auto fit = as::fit_divergence(curve, -1.0, as::LawKind::LogESQPT, window, sd);
      const std::string key = sd == as::Side::Above ? "above" : "below";
      j["slope_" + key] = fit.slope / c.omega0;
      j["intercept_" + key] = fit.intercept / c.omega0;
      j["residual_norm_" + key] = fit.residual_norm;
      Series s{key, {}, {}, true, sd == as::Side::Above ? "#d62728" : "#1f77b4"};
      for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double off = curve.grid[i] + 1.0;
        if ((off > 0) != (sd == as::Side::Above)) continue;
        s.x.push_back(-std::log(std::abs(off)));
        s.y.push_back(curve.nu[i]);
      }
      plot.series.push_back(s);
    }
    j["K_estimate"] = j["intercept_above"];
  }
  ctx.write(table, "asymptotics_curve.csv");
  ctx.write(plot, "asymptotics.svg");
  ctx.write(j, "asymptotics.json");
  return 0;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  validate(config);
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + config.out.string() + ": " + ec.message());
  Context ctx(config, log);
  switch (config.command) {
    case Command::Spectrum: return run_spectrum(ctx);
    case Command::Gapmap: return run_gapmap(ctx);
    case Command::Dos: return run_dos(ctx);
    case Command::Observables: return run_observables(ctx);
    case Command::Probabilities: return run_probabilities(ctx);
    case Command::Asymptotics: return run_asymptotics(ctx);
  }
  return 2;
}

}  // namespace rabi::io
