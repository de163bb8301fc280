#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "raman/effective_dynamics.hpp"
#include "raman/eigensystem.hpp"

namespace raman {

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  double dt = 0.0;
  long steps = 0;
  double max_norm_drift = 0.0;
  double peak_tail_population = 0.0;  // per-step maximum over levels >= tail_from

  /// rows = samples, columns = levels
  Eigen::MatrixXd populations() const;
  double final_norm_drift() const;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string &what, double t, double dt, double drift, double suggested_dt)
      : std::runtime_error(what), t(t), dt(dt), drift(drift), suggested_dt(suggested_dt) {}
  double t, dt, drift, suggested_dt;
};

struct StepOptions {
  double dt = 0.0;
  long sample_every = 1;
  double max_norm_drift = 1e-6;
  Eigen::Index tail_from = 2;  // levels counted as "intermediate"
};

/// Angular-frequency bound used by the step heuristic: Gershgorin radius of H
/// plus the largest drive frequency, rad/s.
double max_angular_frequency(const HamiltonianMatrix &h, double drive = 0.0);
/// dt = 1/(per_cycle * f_max), f_max in cycles per unit time.
double suggest_step(double omega_max, double per_cycle = 64.0);
/// Largest step the oracle accepts, 1/(20 f_max).
double max_step(double omega_max);

namespace detail {

[[noreturn]] void drift_abort(double t, double dt, double drift, double limit);
void check_options(const Eigen::VectorXcd &psi0, double t_final, const StepOptions &o);

}  // namespace detail

namespace detail {

/// Shared stepping loop. `advance(t, h, psi)` moves psi from t to t+h in place.
template <class Advance>
Trajectory march(Advance &&advance, const Eigen::VectorXcd &psi0, double t_final,
                 const StepOptions &opts) {
  check_options(psi0, t_final, opts);
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / opts.dt - 1e-9)));
  const double h = t_final / steps;
  const Eigen::Index n = psi0.size();
  const Eigen::Index tail = n - std::min(opts.tail_from, n);

  Trajectory tr;
  tr.dt = h;
  tr.steps = steps;
  tr.times.push_back(0.0);
  tr.states.push_back(psi0);

  Eigen::VectorXcd psi = psi0;
  const double norm0 = psi0.squaredNorm();
  tr.peak_tail_population = psi0.tail(tail).squaredNorm();

  for (long s = 1; s <= steps; ++s) {
    advance((s - 1) * h, h, psi);

    const double drift = std::abs(psi.squaredNorm() - norm0);
    tr.max_norm_drift = std::max(tr.max_norm_drift, drift);
    if (!(drift <= opts.max_norm_drift)) drift_abort(s * h, h, drift, opts.max_norm_drift);
    tr.peak_tail_population = std::max(tr.peak_tail_population, psi.tail(tail).squaredNorm());

    if (s % opts.sample_every == 0 || s == steps) {
      tr.times.push_back(s * h);
      tr.states.push_back(psi);
    }
  }
  return tr;
}

}  // namespace detail

/// Fixed-step RK4 for dpsi/dt = f(t, psi). `deriv(t, psi, out)` writes
/// -i H(t) psi into out. Samples at t=0, every `sample_every` steps and at the
/// final step; t_final is reached exactly by shortening dt to t_final/steps.
template <class Deriv>
Trajectory integrate_rk4(Deriv &&deriv, const Eigen::VectorXcd &psi0, double t_final,
                         const StepOptions &opts) {
  const Eigen::Index n = psi0.size();
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto advance = [&](double t, double h, Eigen::VectorXcd &psi) {
    deriv(t, psi, k1);
    tmp.noalias() = psi + (0.5 * h) * k1;
    deriv(t + 0.5 * h, tmp, k2);
    tmp.noalias() = psi + (0.5 * h) * k2;
    deriv(t + 0.5 * h, tmp, k3);
    tmp.noalias() = psi + h * k3;
    deriv(t + h, tmp, k4);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  return detail::march(advance, psi0, t_final, opts);
}

/// Dense, time-dependent H(t).
Trajectory integrate(const std::function<HamiltonianMatrix(double)> &hamiltonian,
                     const Eigen::VectorXcd &psi0, double t_final, const StepOptions &opts);

/// Time-independent H. Each RK4 step is the degree-4 Taylor polynomial of
/// exp(-i H dt), which is formed once and applied as a single matrix.
Trajectory integrate_static(const HamiltonianMatrix &h, const Eigen::VectorXcd &psi0,
                            double t_final, const StepOptions &opts);

enum class RamanFrame {
  interaction,  // integrate the time-dependent interaction-picture matrix directly
  corotating,   // absorb exp(-i delta t) into level 1; H becomes static
};

/// Multilevel Raman problem started from `initial` on the ground pair. Returned
/// states are always interaction-picture amplitudes.
Trajectory integrate_raman(const CouplingVectors &c, const DetuningSet &d,
                           const AmplitudePair &initial, double t_final, const StepOptions &opts,
                           RamanFrame frame = RamanFrame::corotating);

struct LabFrameSpec {
  double omega0 = 0.0, omega1 = 0.0, omega2 = 0.0;  // Bohr frequencies
  double omegaP = 0.0, omegaS = 0.0;                // field frequencies
  double OmegaP = 0.0, OmegaS = 0.0;                // couplings

  /// omegaP = (omega2 - omega0) + Delta, omegaS = (omega2 - omega1) + (Delta - delta).
  static LabFrameSpec from_detunings(double omega0, double omega1, double omega2, double Delta,
                                     double delta, double OmegaP, double OmegaS);
  double Delta() const { return omegaP - (omega2 - omega0); }
  double delta() const { return (omegaP - omegaS) - (omega1 - omega0); }
};

HamiltonianMatrix build_lab_hamiltonian(const LabFrameSpec &spec, double t);
double lab_max_angular_frequency(const LabFrameSpec &spec);
Trajectory integrate_lab(const LabFrameSpec &spec, const Eigen::VectorXcd &psi0, double t_final,
                         const StepOptions &opts);

struct OscillationEstimate {
  double frequency = 0.0;  // rad/s, dominant angular frequency of |psi_0|^2
  double contrast = 0.0;   // peak-to-peak of |psi_1|^2 over the trajectory
};

/// FFT peak of the sampled ground population, refined by a least-squares
/// sinusoid fit within one bin of the peak. Needs uniform samples.
OscillationEstimate estimate_oscillation(const Trajectory &traj);

struct AnalyticComparison {
  double max_ground_deviation = 0.0;
  double max_intermediate_population = 0.0;
  double numeric_frequency = 0.0;
  double numeric_contrast = 0.0;
  double analytic_frequency = 0.0;
  double analytic_contrast = 0.0;
  double lightshift_estimate = 0.0;  // delta + sign(DeltaD) sqrt(f^2 - OmegaB^2)
};

AnalyticComparison compare_with_analytic(const Trajectory &traj, const EffectiveTwoLevel &eff,
                                         const AmplitudePair &initial, double delta);

/// Columns t, then P<i> per level, then re<i>, im<i> when amplitudes is set.
void write_trajectory_csv(std::ostream &out, const Trajectory &traj, bool amplitudes = false);

}  // namespace raman
