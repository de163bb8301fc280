#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "raman/cli/output.hpp"
#include "raman/half_int.hpp"

namespace CLI {
class App;
}

namespace raman::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exactly one of amplitude (V/m) or intensity (W/m^2) per field.
struct FieldInput {
  std::optional<double> amplitude;
  std::optional<double> intensity;
  double phase = 0.0;  // rad

  bool given() const { return amplitude || intensity; }
  double amplitude_V_m() const;
};

enum class Command { table, spectrum, evolve, validate, eigs };

std::string to_string(Command c);

/// Everything a subcommand can read. Frequencies are held in Hz (cycles per
/// second) as entered and converted with the *_rad_s accessors.
struct RunConfig {
  std::string atom = "Cs";
  std::string atom_data;  // optional external catalogue
  std::string line = "D2";
  int qP = 1;
  int qS = 1;

  FieldInput pump;
  FieldInput stokes;
  // explicit per-level couplings Omega/2pi, bypass the atom geometry
  std::vector<double> pump_rabi_hz;
  std::vector<double> stokes_rabi_hz;
  std::optional<double> ground_splitting_hz;

  double single_photon_hz = 0.0;  // Delta/2pi
  double two_photon_hz = 0.0;     // delta/2pi
  std::optional<double> scan_from_hz;
  std::optional<double> scan_to_hz;
  int scan_points = 0;

  std::string mF = "0";
  std::optional<double> t_final_s;
  int samples = 200;
  double per_cycle = 96.0;
  double max_norm_drift = 1e-6;

  int random_levels = 0;
  std::uint64_t seed = 1;

  OutputFormat format = OutputFormat::csv;
  bool exact = false;
  bool oracle = false;
  bool strict = false;
  bool fig2 = false;

  double Delta_rad_s() const;
  double delta_rad_s() const;
  bool manual_couplings() const { return !pump_rabi_hz.empty() || !stokes_rabi_hz.empty(); }
  bool scanning() const { return scan_points > 0; }
  /// Two-photon detunings to evaluate, rad/s: the scan grid or the single value.
  std::vector<double> delta_grid_rad_s() const;

  /// Checks what the given subcommand needs; throws ConfigError.
  void validate(Command c) const;
};

double hz_to_rad_s(double hz);
/// I = eps0 c |E|^2 / 2
double intensity_to_amplitude(double intensity);
double amplitude_to_intensity(double amplitude);

/// "3", "-3", "5/2", "-1/2", "2.5"
HalfInt parse_half_int(std::string_view text);

/// Options shared by every subcommand, including --config <file> (key = value
/// lines, # comments; command-line flags take precedence).
void register_options(CLI::App &app, RunConfig &cfg);

}  // namespace raman::cli
