#include "raman/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include <CLI11.hpp>

#include "raman/constants.hpp"

namespace raman::cli {

double hz_to_rad_s(double hz) { return 2.0 * constants::pi * hz; }

double intensity_to_amplitude(double intensity) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity))
    throw ConfigError("intensity must be finite and non-negative");
  return std::sqrt(2.0 * intensity / (constants::vacuum_permittivity * constants::speed_of_light));
}

double amplitude_to_intensity(double amplitude) {
  return 0.5 * constants::vacuum_permittivity * constants::speed_of_light * amplitude * amplitude;
}

double FieldInput::amplitude_V_m() const {
  if (amplitude && intensity) throw ConfigError("give either an amplitude or an intensity, not both");
  if (amplitude) {
    if (!std::isfinite(*amplitude) || *amplitude < 0.0)
      throw ConfigError("field amplitude must be finite and non-negative");
    return *amplitude;
  }
  if (intensity) return intensity_to_amplitude(*intensity);
  throw ConfigError("field strength missing");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::table: return "table";
    case Command::spectrum: return "spectrum";
    case Command::evolve: return "evolve";
    case Command::validate: return "validate";
    case Command::eigs: return "eigs";
  }
  return "?";
}

double RunConfig::Delta_rad_s() const { return hz_to_rad_s(single_photon_hz); }
double RunConfig::delta_rad_s() const { return hz_to_rad_s(two_photon_hz); }

std::vector<double> RunConfig::delta_grid_rad_s() const {
  if (!scanning()) return {delta_rad_s()};
  std::vector<double> out;
  const double a = *scan_from_hz, b = *scan_to_hz;
  for (int k = 0; k < scan_points; ++k) {
    const double f = scan_points == 1 ? 0.0 : double(k) / (scan_points - 1);
    out.push_back(hz_to_rad_s(a + f * (b - a)));
  }
  return out;
}

HalfInt parse_half_int(std::string_view text) {
  auto bad = [&] { return ConfigError("not an integer or half-integer: '" + std::string(text) + "'"); };
  auto to_int = [&](std::string_view s) {
    int v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw bad();
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    if (to_int(text.substr(slash + 1)) != 2) throw bad();
    const int num = to_int(text.substr(0, slash));
    if (num % 2 == 0) throw bad();
    return HalfInt::from_twice(num);
  }
  if (text.find('.') != std::string_view::npos) {
    double v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || std::abs(2 * v - std::round(2 * v)) > 0)
      throw bad();
    return HalfInt::from_twice(static_cast<int>(std::lround(2 * v)));
  }
  return HalfInt::integer(to_int(text));
}

namespace {

void check_polarization(int q, const char *name) {
  if (q < -1 || q > 1) throw ConfigError(std::string(name) + " must be -1, 0 or 1");
}

void check_field(const FieldInput &f, const char *name) {
  if (f.amplitude && f.intensity)
    throw ConfigError(std::string(name) + ": give exactly one of amplitude and intensity");
  if (!f.given())
    throw ConfigError(std::string(name) + " field missing: set --" + name + "-amplitude or --" + name +
                      "-intensity");
  (void)f.amplitude_V_m();
}

}  // namespace

void RunConfig::validate(Command c) const {
  check_polarization(qP, "qp");
  check_polarization(qS, "qs");
  if (samples < 1) throw ConfigError("samples must be at least 1");
  if (!(per_cycle >= 20.0)) throw ConfigError("steps-per-cycle must be at least 20");
  if (!(max_norm_drift > 0.0)) throw ConfigError("max-norm-drift must be positive");
  if (scan_points < 0) throw ConfigError("scan-points must be non-negative");
  if (scanning()) {
    if (!scan_from_hz || !scan_to_hz) throw ConfigError("a scan needs scan-from-hz and scan-to-hz");
    if (scan_points > 1 && !(*scan_to_hz > *scan_from_hz))
      throw ConfigError("scan range is empty: scan-to-hz must exceed scan-from-hz");
  }
  if (t_final_s && !(*t_final_s > 0.0)) throw ConfigError("t-final must be positive");
  if (c == Command::table) return;

  if (random_levels < 0 || random_levels > 62) throw ConfigError("random-levels must be in [0, 62]");
  const bool need_fields = !manual_couplings() && random_levels == 0 && !(c == Command::spectrum && fig2);
  if (manual_couplings() && pump_rabi_hz.size() != stokes_rabi_hz.size())
    throw ConfigError("pump-rabi-hz and stokes-rabi-hz need the same number of levels");
  if (need_fields) {
    check_field(pump, "pump");
    check_field(stokes, "stokes");
  }
  if (c != Command::spectrum || !fig2) {
    if (!(single_photon_hz != 0.0) || !std::isfinite(single_photon_hz))
      throw ConfigError("single-photon detuning --delta-hz must be non-zero");
  }
  if (c == Command::evolve && scanning()) throw ConfigError("evolve takes a single two-photon detuning");
}

void register_options(CLI::App &app, RunConfig &cfg) {
  app.set_config("--config", "", "key = value file; flags given on the command line win");
  app.add_option("--atom", cfg.atom, "atom name from the catalogue")->capture_default_str();
  app.add_option("--atom-data", cfg.atom_data, "alternative atom data file");
  app.add_option("--line", cfg.line, "D1 or D2")->capture_default_str();
  app.add_option("--qp", cfg.qP, "pump polarization -1, 0, 1")->capture_default_str();
  app.add_option("--qs", cfg.qS, "Stokes polarization -1, 0, 1")->capture_default_str();

  auto *pa = app.add_option("--pump-amplitude", cfg.pump.amplitude, "pump field amplitude, V/m");
  auto *pi = app.add_option("--pump-intensity", cfg.pump.intensity, "pump intensity, W/m^2");
  auto *sa = app.add_option("--stokes-amplitude", cfg.stokes.amplitude, "Stokes field amplitude, V/m");
  auto *si = app.add_option("--stokes-intensity", cfg.stokes.intensity, "Stokes intensity, W/m^2");
  pa->excludes(pi);
  sa->excludes(si);
  app.add_option("--pump-phase", cfg.pump.phase, "pump field phase, rad");
  app.add_option("--stokes-phase", cfg.stokes.phase, "Stokes field phase, rad");
  app.add_option("--pump-rabi-hz", cfg.pump_rabi_hz, "explicit pump couplings Omega/2pi per level, Hz")
      ->delimiter(',');
  app.add_option("--stokes-rabi-hz", cfg.stokes_rabi_hz, "explicit Stokes couplings Omega/2pi per level, Hz")
      ->delimiter(',');
  app.add_option("--ground-splitting-hz", cfg.ground_splitting_hz, "override the ground splitting, Hz");

  app.add_option("--delta-hz", cfg.single_photon_hz, "single-photon detuning Delta/2pi, Hz");
  app.add_option("--two-photon-hz", cfg.two_photon_hz, "two-photon detuning delta/2pi, Hz");
  app.add_option("--scan-from-hz", cfg.scan_from_hz, "two-photon scan start, Hz");
  app.add_option("--scan-to-hz", cfg.scan_to_hz, "two-photon scan end, Hz");
  app.add_option("--scan-points", cfg.scan_points, "two-photon scan points (0: no scan)");

  app.add_option("--mf", cfg.mF, "lower-state mF of the pair (evolve, validate, eigs)")->capture_default_str();
  app.add_option("--t-final", cfg.t_final_s, "evolution time, s (default: two oscillation periods)");
  app.add_option("--samples", cfg.samples, "time samples after t=0")->capture_default_str();
  app.add_option("--steps-per-cycle", cfg.per_cycle, "oracle RK4 steps per fastest period")
      ->capture_default_str();
  app.add_option("--max-norm-drift", cfg.max_norm_drift, "oracle abort threshold on |norm - 1|")
      ->capture_default_str();
  app.add_option("--random-levels", cfg.random_levels, "eigs: seeded random system with this many levels");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();

  static const std::map<std::string, OutputFormat> formats{{"csv", OutputFormat::csv},
                                                           {"json", OutputFormat::json}};
  app.add_option("--format", cfg.format, "csv or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->default_str("csv");
  app.add_flag("--exact", cfg.exact, "table: exact rational strings");
  app.add_flag("--oracle", cfg.oracle, "evolve: add integrator columns");
  app.add_flag("--strict", cfg.strict, "regime failures are fatal (exit 3)");
  app.add_flag("--fig2", cfg.fig2, "spectrum: coupling-strength curves for I = 1/2 .. 9/2");
}

}  // namespace raman::cli
