#include "raman/schrodinger.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <Eigen/Cholesky>
#include <unsupported/Eigen/FFT>

namespace raman {

namespace {

constexpr double two_pi = 2.0 * 3.14159265358979323846;
const Complex minus_i{0.0, -1.0};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Eigen::MatrixXd Trajectory::populations() const {
  if (states.empty()) return {};
  Eigen::MatrixXd p(states.size(), states.front().size());
  for (std::size_t k = 0; k < states.size(); ++k) p.row(k) = states[k].cwiseAbs2().transpose();
  return p;
}

double Trajectory::final_norm_drift() const {
  if (states.empty()) return 0.0;
  return std::abs(states.back().squaredNorm() - states.front().squaredNorm());
}

double max_angular_frequency(const HamiltonianMatrix &h, double drive) {
  double radius = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) radius = std::max(radius, h.row(i).cwiseAbs().sum());
  return radius + std::abs(drive);
}

double suggest_step(double omega_max, double per_cycle) {
  if (!(omega_max > 0.0)) throw std::invalid_argument("step heuristic needs a positive frequency");
  return two_pi / (per_cycle * omega_max);
}

double max_step(double omega_max) { return suggest_step(omega_max, 20.0); }

namespace detail {

void drift_abort(double t, double dt, double drift, double limit) {
  // drift over a fixed span scales as dt^5 for RK4
  const double suggested = dt * std::pow(0.5 * limit / drift, 0.2);
  std::ostringstream msg;
  msg.precision(3);
  msg << "norm drift " << drift << " exceeds " << limit << " at t=" << t << " with dt=" << dt
      << "; retry with dt <= " << suggested;
  throw IntegrationError(msg.str(), t, dt, drift, suggested);
}

void check_options(const Eigen::VectorXcd &psi0, double t_final, const StepOptions &o) {
  if (psi0.size() == 0) throw std::invalid_argument("initial state is empty");
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("initial state must be normalised");
  if (!(t_final > 0.0) || !std::isfinite(t_final))
    throw std::invalid_argument("final time must be positive");
  if (!(o.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (o.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
}

}  // namespace detail

Trajectory integrate(const std::function<HamiltonianMatrix(double)> &hamiltonian,
                     const Eigen::VectorXcd &psi0, double t_final, const StepOptions &opts) {
  auto deriv = [&](double t, const Eigen::VectorXcd &psi, Eigen::VectorXcd &out) {
    out.noalias() = minus_i * (hamiltonian(t) * psi);
  };
  return integrate_rk4(deriv, psi0, t_final, opts);
}

Trajectory integrate_static(const HamiltonianMatrix &h, const Eigen::VectorXcd &psi0,
                            double t_final, const StepOptions &opts) {
  if (h.rows() != psi0.size() || h.cols() != psi0.size())
    throw std::invalid_argument("Hamiltonian and state dimensions differ");
  detail::check_options(psi0, t_final, opts);
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / opts.dt - 1e-9)));
  const double dt = t_final / steps;

  const Eigen::Index n = h.rows();
  const Eigen::MatrixXcd a = minus_i * dt * h;
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd step = term;
  for (int k = 1; k <= 4; ++k) {
    term = (term * a) / static_cast<double>(k);
    step += term;
  }
  Eigen::VectorXcd next(n);
  auto advance = [&](double, double, Eigen::VectorXcd &psi) {
    next.noalias() = step * psi;
    psi.swap(next);
  };
  return detail::march(advance, psi0, t_final, opts);
}

Trajectory integrate_raman(const CouplingVectors &c, const DetuningSet &d,
                           const AmplitudePair &initial, double t_final, const StepOptions &opts,
                           RamanFrame frame) {
  c.validate();
  d.validate(c.levels());
  const Eigen::Index levels = c.levels();
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(levels + 2);
  psi0[0] = initial.a0;
  psi0[1] = initial.a1;

  if (frame == RamanFrame::corotating) {
    HamiltonianMatrix h = build_interaction_hamiltonian(c, d, 0.0);
    h(1, 1) = -d.delta;
    Trajectory tr = integrate_static(h, psi0, t_final, opts);
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      tr.states[k][1] *= std::exp(Complex(0.0, -d.delta * tr.times[k]));
    return tr;
  }

  const Eigen::VectorXcd p = 0.5 * c.pump, s = 0.5 * c.stokes;
  const Eigen::VectorXcd pc = p.conjugate(), sc = s.conjugate();
  Eigen::VectorXd diag(levels);
  for (Eigen::Index i = 0; i < levels; ++i) diag[i] = -d.level(i);

  auto deriv = [&](double t, const Eigen::VectorXcd &psi, Eigen::VectorXcd &out) {
    const Complex rot = std::polar(1.0, -d.delta * t);
    const auto upper = psi.tail(levels);
    const Complex g0 = psi[0], g1 = psi[1] * std::conj(rot);
    out[0] = minus_i * (p.transpose() * upper).value();
    out[1] = minus_i * rot * (s.transpose() * upper).value();
    out.tail(levels) = minus_i * (pc * g0 + sc * g1 + diag.cwiseProduct(upper));
  };
  return integrate_rk4(deriv, psi0, t_final, opts);
}

LabFrameSpec LabFrameSpec::from_detunings(double omega0, double omega1, double omega2,
                                          double Delta, double delta, double OmegaP,
                                          double OmegaS) {
  LabFrameSpec s;
  s.omega0 = omega0;
  s.omega1 = omega1;
  s.omega2 = omega2;
  s.omegaP = (omega2 - omega0) + Delta;
  s.omegaS = (omega2 - omega1) + (Delta - delta);
  s.OmegaP = OmegaP;
  s.OmegaS = OmegaS;
  return s;
}

HamiltonianMatrix build_lab_hamiltonian(const LabFrameSpec &spec, double t) {
  HamiltonianMatrix h = HamiltonianMatrix::Zero(3, 3);
  h(0, 0) = spec.omega0;
  h(1, 1) = spec.omega1;
  h(2, 2) = spec.omega2;
  h(0, 2) = h(2, 0) = spec.OmegaP * std::cos(spec.omegaP * t);
  h(1, 2) = h(2, 1) = spec.OmegaS * std::cos(spec.omegaS * t);
  return h;
}

double lab_max_angular_frequency(const LabFrameSpec &spec) {
  const double bohr = std::max({std::abs(spec.omega0), std::abs(spec.omega1), std::abs(spec.omega2)});
  return bohr + std::abs(spec.OmegaP) + std::abs(spec.OmegaS) +
         std::max(std::abs(spec.omegaP), std::abs(spec.omegaS));
}

Trajectory integrate_lab(const LabFrameSpec &spec, const Eigen::VectorXcd &psi0, double t_final,
                         const StepOptions &opts) {
  if (psi0.size() != 3) throw std::invalid_argument("lab-frame model has three levels");
  auto deriv = [&](double t, const Eigen::VectorXcd &psi, Eigen::VectorXcd &out) {
    const double cp = spec.OmegaP * std::cos(spec.omegaP * t);
    const double cs = spec.OmegaS * std::cos(spec.omegaS * t);
    out[0] = minus_i * (spec.omega0 * psi[0] + cp * psi[2]);
    out[1] = minus_i * (spec.omega1 * psi[1] + cs * psi[2]);
    out[2] = minus_i * (cp * psi[0] + cs * psi[1] + spec.omega2 * psi[2]);
  };
  return integrate_rk4(deriv, psi0, t_final, opts);
}

OscillationEstimate estimate_oscillation(const Trajectory &traj) {
  OscillationEstimate est;
  if (traj.times.size() < 4) return est;
  const double tau = traj.times[1] - traj.times[0];
  std::vector<double> x;
  double lo = 1.0, hi = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double p1 = std::norm(traj.states[k][1]);
    lo = std::min(lo, p1);
    hi = std::max(hi, p1);
    if (std::abs(traj.times[k] - k * tau) <= 1e-6 * tau) x.push_back(std::norm(traj.states[k][0]));
  }
  est.contrast = hi - lo;
  if (x.size() < 4) return est;

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= x.size();
  for (double &v : x) v -= mean;

  Eigen::FFT<double> fft;
  std::vector<Complex> spectrum;
  fft.fwd(spectrum, x);
  std::size_t peak = 1;
  for (std::size_t k = 1; k <= x.size() / 2; ++k)
    if (std::abs(spectrum[k]) > std::abs(spectrum[peak])) peak = k;
  if (std::abs(spectrum[peak]) == 0.0) return est;

  // refine with a least-squares sinusoid fit (offset, cosine, sine) around the peak bin
  const double bin = two_pi / (x.size() * tau);
  auto residual = [&](double w) {
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d atb = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < x.size(); ++k) {
      const Eigen::Vector3d row(1.0, std::cos(w * k * tau), std::sin(w * k * tau));
      ata += row * row.transpose();
      atb += row * x[k];
    }
    const Eigen::Vector3d coef = ata.ldlt().solve(atb);
    double r = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double fit = coef[0] + coef[1] * std::cos(w * k * tau) + coef[2] * std::sin(w * k * tau);
      r += (x[k] - fit) * (x[k] - fit);
    }
    return r;
  };
  const double a = std::max(0.5 * bin, (peak - 1.0) * bin);
  const double b = (peak + 1.0) * bin;
  est.frequency = boost::math::tools::brent_find_minima(residual, a, b, 40).first;
  return est;
}

AnalyticComparison compare_with_analytic(const Trajectory &traj, const EffectiveTwoLevel &eff,
                                         const AmplitudePair &initial, double delta) {
  AnalyticComparison r;
  r.max_intermediate_population = traj.peak_tail_population;
  double lo = 1.0, hi = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto &psi = traj.states[k];
    const auto a = evolve_amplitudes(initial, eff, delta, traj.times[k]);
    r.max_ground_deviation = std::max({r.max_ground_deviation,
                                       std::abs(std::norm(psi[0]) - std::norm(a.a0)),
                                       std::abs(std::norm(psi[1]) - std::norm(a.a1))});
    if (psi.size() > 2)
      r.max_intermediate_population = std::max(r.max_intermediate_population, psi.tail(psi.size() - 2).squaredNorm());
    lo = std::min(lo, std::norm(a.a1));
    hi = std::max(hi, std::norm(a.a1));
  }
  r.analytic_contrast = hi - lo;
  const double DeltaD = eff.DeltaB - delta;
  r.analytic_frequency = std::hypot(eff.OmegaB, DeltaD);

  const auto est = estimate_oscillation(traj);
  r.numeric_frequency = est.frequency;
  r.numeric_contrast = est.contrast;
  const double detuning = std::sqrt(std::max(0.0, est.frequency * est.frequency - eff.OmegaB * eff.OmegaB));
  r.lightshift_estimate = delta + (DeltaD < 0.0 ? -detuning : detuning);
  return r;
}

void write_trajectory_csv(std::ostream &out, const Trajectory &traj, bool amplitudes) {
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  out << "t_s";
  for (Eigen::Index i = 0; i < n; ++i) out << ",P" << i;
  if (amplitudes)
    for (Eigen::Index i = 0; i < n; ++i) out << ",re" << i << ",im" << i;
  out << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << num(traj.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << num(std::norm(traj.states[k][i]));
    if (amplitudes)
      for (Eigen::Index i = 0; i < n; ++i)
        out << ',' << num(traj.states[k][i].real()) << ',' << num(traj.states[k][i].imag());
    out << '\n';
  }
}

}  // namespace raman
