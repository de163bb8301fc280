#include "raman/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "raman/constants.hpp"
#include "raman/eigensystem.hpp"
#include "raman/schrodinger.hpp"

namespace raman::cli {

namespace {

Polarization polarization(int q) { return Polarization(q); }

FieldSpec field(const FieldInput &f, int q) {
  return {std::polar(f.amplitude_V_m(), f.phase), polarization(q)};
}

LineLabel line_of(const RunConfig &cfg) {
  try {
    return parse_line_label(cfg.line);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

DetuningSet detunings(const RunConfig &cfg, double delta) { return {cfg.Delta_rad_s(), delta, {}}; }

bool report_regime(const RegimeReport &r, const std::string &label, std::ostream &diag) {
  bool ok = true;
  for (const auto &f : r.findings()) {
    if (f.pass) continue;
    ok = false;
    diag << "warning: " << label << ": " << f.name << " margin " << f.margin << " below "
         << f.threshold << '\n';
  }
  return ok;
}

void enforce_regime(const RunConfig &cfg, const PairSystem &p, std::ostream &diag) {
  const bool ok = report_regime(regime_check(p.couplings, p.detunings, p.omega10), p.label, diag);
  if (!ok && cfg.strict) throw RegimeError("effective two-level description not valid for " + p.label);
}

Eigen::VectorXcd rabi_vector(const std::vector<double> &hz) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(hz.size()));
  for (std::size_t i = 0; i < hz.size(); ++i) v[static_cast<Eigen::Index>(i)] = hz_to_rad_s(hz[i]);
  return v;
}

PairSystem random_system(const RunConfig &cfg) {
  // complex entries uniform in the unit square, then scaled so that the
  // scaled couplings sit at 1% of the scaled detuning
  boost::random::mt19937_64 rng(cfg.seed);
  boost::random::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Index n = cfg.random_levels;
  auto draw = [&] {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = u(rng);
      const double im = u(rng);
      v[i] = Complex(re, im);
    }
    return v;
  };
  PairSystem p;
  p.couplings.pump = draw();
  p.couplings.stokes = draw();
  const double target = 0.02 * std::abs(cfg.Delta_rad_s());
  p.couplings.pump *= target / p.couplings.pump.norm();
  p.couplings.stokes *= target / p.couplings.stokes.norm();
  p.detunings = detunings(cfg, cfg.delta_rad_s());
  p.omega10 = cfg.ground_splitting_hz ? hz_to_rad_s(*cfg.ground_splitting_hz)
                                      : resolve_atom(cfg).ground_splitting;
  p.label = "random seed " + std::to_string(cfg.seed);
  return p;
}

std::vector<Cell> spectrum_row(const SpectrumRow &r, double delta) {
  return {r.pair.lower.mF.str(), r.OmegaB, r.DeltaB, r.envelope, delta};
}

}  // namespace

AtomSpec resolve_atom(const RunConfig &cfg) {
  try {
    if (cfg.atom_data.empty()) return find_atom(builtin_atoms(), cfg.atom);
    return find_atom(load_atom_data(cfg.atom_data), cfg.atom);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
}

PairSystem resolve_pair(const RunConfig &cfg) {
  PairSystem p;
  p.detunings = detunings(cfg, cfg.delta_rad_s());
  if (cfg.manual_couplings()) {
    p.couplings.pump = rabi_vector(cfg.pump_rabi_hz);
    p.couplings.stokes = rabi_vector(cfg.stokes_rabi_hz);
    p.omega10 = cfg.ground_splitting_hz ? hz_to_rad_s(*cfg.ground_splitting_hz)
                                        : resolve_atom(cfg).ground_splitting;
    p.label = "explicit couplings";
    try {
      p.couplings.validate();
    } catch (const std::invalid_argument &e) {
      throw ConfigError(e.what());
    }
    return p;
  }

  const AtomSpec atom = resolve_atom(cfg);
  const HalfInt mF = parse_half_int(cfg.mF);
  const auto pairs = enumerate_pairs(atom, polarization(cfg.qP), polarization(cfg.qS));
  auto it = std::find_if(pairs.begin(), pairs.end(), [&](const RamanPair &r) { return r.lower.mF == mF; });
  if (it == pairs.end()) {
    std::string known;
    for (const auto &r : pairs) known += (known.empty() ? "" : ", ") + r.lower.mF.str();
    throw ConfigError("no Raman pair with lower mF=" + mF.str() + " for (qP,qS)=(" +
                      std::to_string(cfg.qP) + "," + std::to_string(cfg.qS) + "); available: " + known);
  }
  p.couplings = physical_couplings(atom, line_of(cfg), *it, field(cfg.pump, cfg.qP), field(cfg.stokes, cfg.qS));
  p.omega10 = cfg.ground_splitting_hz ? hz_to_rad_s(*cfg.ground_splitting_hz) : atom.ground_splitting;
  p.label = atom.name + " mF=" + mF.str();
  return p;
}

Outcome cmd_table(const RunConfig &cfg, std::ostream &) {
  const AtomSpec atom = resolve_atom(cfg);
  GeometryTable g;
  try {
    g = geometry_table(atom, line_of(cfg), polarization(cfg.qP), polarization(cfg.qS));
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  Outcome o;
  o.table.columns = {"mF", "gdot", "gs_norm_sq", "gp_norm_sq"};
  for (const auto &r : g.rows) {
    if (cfg.exact)
      o.table.add({r.mF.str(), r.gdot.text(g.denominator), r.gs_norm_sq.text(g.denominator),
                   r.gp_norm_sq.text(g.denominator)});
    else
      o.table.add({r.mF.str(), r.gdot.decimal, r.gs_norm_sq.decimal, r.gp_norm_sq.decimal});
  }
  return o;
}

Outcome cmd_spectrum(const RunConfig &cfg, std::ostream &diag) {
  Outcome o;
  if (cfg.fig2) {
    std::vector<HalfInt> spins;
    for (int twice = 1; twice <= 9; twice += 2) spins.push_back(HalfInt::from_twice(twice));
    o.table.columns = {"I", "mF", "gdot_11", "gdot_01"};
    for (const auto &p : coupling_curves(spins)) o.table.add({p.I.str(), p.mF.str(), p.gdot_11, p.gdot_01});
    return o;
  }
  if (cfg.manual_couplings() || cfg.random_levels > 0)
    throw ConfigError("spectrum works from the atom geometry; drop the explicit couplings");

  const AtomSpec atom = resolve_atom(cfg);
  const LineLabel line = line_of(cfg);
  const FieldSpec pump = field(cfg.pump, cfg.qP), stokes = field(cfg.stokes, cfg.qS);
  const double omega10 = cfg.ground_splitting_hz ? hz_to_rad_s(*cfg.ground_splitting_hz) : atom.ground_splitting;

  o.table.columns = {"mF", "OmegaB_rad_s", "DeltaB_rad_s", "envelope", "delta_rad_s"};
  bool checked = false;
  for (double delta : cfg.delta_grid_rad_s()) {
    const DetuningSet d = detunings(cfg, delta);
    const auto rows = spectrum(atom, line, pump, stokes, d);
    if (!checked) {
      bool ok = true;
      for (const auto &r : rows) {
        const std::string label = atom.name + " mF=" + r.pair.lower.mF.str();
        ok = report_regime(regime_check(r.couplings, d, omega10), label, diag) && ok;
      }
      if (!ok && cfg.strict) throw RegimeError("effective two-level description not valid for every pair");
      checked = true;
    }
    for (const auto &r : rows) o.table.add(spectrum_row(r, delta));
  }
  return o;
}

Outcome cmd_evolve(const RunConfig &cfg, std::ostream &diag) {
  const PairSystem p = resolve_pair(cfg);
  enforce_regime(cfg, p, diag);
  const EffectiveTwoLevel eff = mixing_angles(p.couplings, p.detunings);
  const double delta = p.detunings.delta;

  double T = 0.0;
  if (cfg.t_final_s) {
    T = *cfg.t_final_s;
  } else {
    if (!(eff.OmegaTildeD > 0.0)) throw ConfigError("no two-photon oscillation here; set --t-final");
    T = 2.0 * 2.0 * constants::pi / eff.OmegaTildeD;
  }

  const AmplitudePair initial{};
  Outcome o;
  o.table.columns = {"t_s", "P0", "P1"};
  std::vector<double> times(cfg.samples + 1);
  for (int k = 0; k <= cfg.samples; ++k) times[k] = T * k / cfg.samples;

  if (!cfg.oracle) {
    for (double t : times) {
      const AmplitudePair a = evolve_amplitudes(initial, eff, delta, t);
      o.table.add({t, std::norm(a.a0), std::norm(a.a1)});
    }
    return o;
  }

  const HamiltonianMatrix h = build_interaction_hamiltonian(p.couplings, p.detunings, 0.0);
  const double interval = T / cfg.samples;
  auto run_with = [&](double dt_hint) {
    StepOptions opts;
    const long per_sample = std::max(1L, static_cast<long>(std::ceil(interval / dt_hint - 1e-9)));
    opts.dt = interval / per_sample;
    opts.sample_every = per_sample;
    opts.max_norm_drift = cfg.max_norm_drift;
    return integrate_raman(p.couplings, p.detunings, initial, T, opts);
  };
  Trajectory tr;
  try {
    tr = run_with(suggest_step(max_angular_frequency(h, std::abs(delta)), cfg.per_cycle));
  } catch (const IntegrationError &e) {
    diag << "warning: oracle: " << e.what() << "; retrying\n";
    tr = run_with(e.suggested_dt);
  }

  o.table.columns.insert(o.table.columns.end(), {"P0_oracle", "P1_oracle", "P_intermediate_oracle"});
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const AmplitudePair a = evolve_amplitudes(initial, eff, delta, times[k]);
    const double n0 = std::norm(tr.states[k][0]), n1 = std::norm(tr.states[k][1]);
    const double rest = tr.states[k].tail(tr.states[k].size() - 2).squaredNorm();
    worst = std::max({worst, std::abs(std::norm(a.a0) - n0), std::abs(std::norm(a.a1) - n1)});
    o.table.add({times[k], std::norm(a.a0), std::norm(a.a1), n0, n1, rest});
  }
  diag << "oracle: " << tr.steps << " steps, max ground deviation " << worst
       << ", peak intermediate population " << tr.peak_tail_population << '\n';
  return o;
}

Outcome cmd_validate(const RunConfig &cfg, std::ostream &) {
  const PairSystem p = resolve_pair(cfg);
  const RegimeReport r = regime_check(p.couplings, p.detunings, p.omega10);
  Outcome o;
  o.table.columns = {"criterion", "margin", "threshold", "pass"};
  for (const auto &f : r.findings()) o.table.add({f.name, f.margin, f.threshold, f.pass});
  o.regime_failed = !r.all_pass();
  return o;
}

Outcome cmd_eigs(const RunConfig &cfg, std::ostream &diag) {
  const PairSystem p = cfg.random_levels > 0 ? random_system(cfg) : resolve_pair(cfg);
  const ScaledSystem s = scale_system(p.couplings, p.detunings);
  const NumericEigensystem num = numeric_eigensystem(expanded_matrix(s));
  const FiniteEigenvalues approx = finite_eigenvalues(s);
  const FiniteEigenvalues exact = exact_finite_eigenvalues(s);
  if (!approx.perturbative) diag << "warning: couplings not small against the detuning\n";

  const double d = s.deltaScaled;
  const double c2 = s.x.squaredNorm() + s.y.squaredNorm();
  const double ground_bound = 5.0 * c2 * c2 / std::pow(std::abs(d), 3);
  const double upper_bound = c2 / std::abs(d);
  const Eigen::Index n = num.values.size();

  // the two eigenvalues nearest the finite roots are the ground-like ones
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto nearest = [&](double target, Eigen::Index skip) {
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != skip && (best < 0 || std::abs(num.values[i] - target) < std::abs(num.values[best] - target)))
        best = i;
    return best;
  };
  const Eigen::Index ip = nearest(exact.plus, -1);
  const Eigen::Index im = nearest(exact.minus, ip);

  // intermediate-like ones: delta - (finite roots) for the two dressed
  // states, delta for the rest; matched in sorted order
  std::vector<double> upper_exact{d - exact.plus, d - exact.minus};
  upper_exact.resize(n - 2, d);
  std::sort(upper_exact.begin(), upper_exact.end());

  Outcome o;
  o.table.columns = {"index", "kind", "lambda_numeric", "lambda_analytic", "lambda_exact",
                     "deviation", "bound", "within_bound", "Omega0_rad_s"};
  std::size_t u = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = num.values[i];
    if (i == ip || i == im) {
      const double a = i == ip ? approx.plus : approx.minus;
      const double e = i == ip ? exact.plus : exact.minus;
      o.table.add({long(i), std::string("ground"), v, a, e, std::abs(v - a), ground_bound,
                   std::abs(v - a) <= ground_bound, s.Omega0});
    } else {
      o.table.add({long(i), std::string("intermediate"), v, d, upper_exact[u++], std::abs(v - d), upper_bound,
                   std::abs(v - d) <= upper_bound, s.Omega0});
    }
  }
  return o;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  RunConfig cfg;
  CLI::App app{"Effective two-level description of stimulated Raman transitions", "raman"};
  register_options(app, cfg);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  const std::map<std::string, std::pair<Command, std::string>> commands{
      {"table", {Command::table, "geometric factors |G_P.G_S|, ||G_S||^2, ||G_P||^2 per mF"}},
      {"spectrum", {Command::spectrum, "effective Rabi frequency, lightshift and envelope per mF"}},
      {"evolve", {Command::evolve, "ground-state populations against time for one pair"}},
      {"validate", {Command::validate, "regime criteria for the effective description"}},
      {"eigs", {Command::eigs, "perturbative against numerical spectrum of the frozen Hamiltonian"}}};
  std::map<const CLI::App *, Command> dispatch;
  for (const auto &[name, entry] : commands) {
    CLI::App *sub = app.add_subcommand(name, entry.second);
    sub->fallthrough();
    dispatch[sub] = entry.first;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
  }

  const Command cmd = dispatch.at(app.get_subcommands().front());
  try {
    cfg.validate(cmd);
    Outcome o;
    switch (cmd) {
      case Command::table: o = cmd_table(cfg, err); break;
      case Command::spectrum: o = cmd_spectrum(cfg, err); break;
      case Command::evolve: o = cmd_evolve(cfg, err); break;
      case Command::validate: o = cmd_validate(cfg, err); break;
      case Command::eigs: o = cmd_eigs(cfg, err); break;
    }
    write_table(out, o.table, cfg.format);
    if (o.regime_failed && cfg.strict) {
      err << "error: regime check failed\n";
      return kRegime;
    }
    return kSuccess;
  } catch (const RegimeError &e) {
    err << "error: " << e.what() << '\n';
    return kRegime;
  } catch (const IntegrationError &e) {
    err << "error: integrator: " << e.what() << '\n';
    return kNumerical;
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const AtomDataError &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace raman::cli
