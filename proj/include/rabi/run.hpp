#pragma once

// Command-line driver: run configuration, CSV/JSON/SVG artifacts.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rabi::io {

enum class Command { Spectrum, Gapmap, Dos, Observables, Probabilities, Asymptotics };

const char* to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

struct RunConfig {
  Command command = Command::Spectrum;
  double omega0 = 1.0;
  std::optional<double> ratio;  // Omega / omega0; 40 for spectrum/gapmap, 1e3 otherwise
  double g = 1.2;
  double g_min = 0.0;
  double g_max = 3.0;
  std::size_t g_steps = 61;
  std::size_t levels = 60;
  std::size_t window = 10;
  double quad_tol = 1e-9;
  double conv_tol = 1e-8;
  std::optional<double> eps_min;  // defaults to the semiclassical ground energy
  double eps_max = 0.0;
  std::size_t points = 400;
  std::optional<std::size_t> truncation;  // starting/fixed Fock truncation
  std::filesystem::path out = ".";
  bool emit_svg = false;

  double effective_ratio() const;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses "<command> [--flags]"; an optional --config JSON file supplies the
// same keys (snake_case), and explicit flags override it.
RunConfig parse_args(const std::vector<std::string>& args);

void validate(const RunConfig& config);

// Runs one command, writing artifacts into config.out. Returns the process exit status.
int run(const RunConfig& config, std::ostream& log);

// Reads a JSON config into `config` (keys mirror the CLI long names with '_').
void apply_config_file(const std::filesystem::path& path, RunConfig& config);

}  // namespace rabi::io
