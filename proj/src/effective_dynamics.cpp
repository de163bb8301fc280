#include "raman/effective_dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

namespace raman {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_detuning(const DetuningSet &d) {
  if (d.Delta == 0.0 || !std::isfinite(d.Delta))
    throw std::invalid_argument("single-photon detuning Delta must be finite and non-zero");
}

double max_coupling_norm(const CouplingVectors &c) {
  return std::max(c.pump.norm(), c.stokes.norm());
}

RegimeFinding at_least(std::string name, double margin, double threshold) {
  return {std::move(name), margin, threshold, margin >= threshold};
}

}  // namespace

void CouplingVectors::validate() const {
  if (pump.size() == 0 || pump.size() != stokes.size())
    throw std::invalid_argument("pump and Stokes coupling vectors must have equal, non-zero length");
  if (!pump.allFinite() || !stokes.allFinite())
    throw std::invalid_argument("coupling vectors must be finite");
}

double coupling_scale(const CouplingVectors &c) {
  return std::sqrt(c.pump.squaredNorm() + c.stokes.squaredNorm());
}

void DetuningSet::validate(Eigen::Index levels) const {
  require_detuning(*this);
  if (!std::isfinite(delta)) throw std::invalid_argument("two-photon detuning must be finite");
  if (per_level_Delta) {
    if (per_level_Delta->size() != levels)
      throw std::invalid_argument("per-level detunings must match the number of intermediate levels");
    for (double v : *per_level_Delta)
      if (!(v * Delta > 0.0))
        throw std::invalid_argument("per-level detunings must share the sign of Delta");
  }
}

double effective_rabi(const CouplingVectors &c, const DetuningSet &d) {
  c.validate();
  require_detuning(d);
  // Eigen's dot() conjugates its left operand: stokes.dot(pump) = sum P_i S_i^*
  return std::abs(c.stokes.dot(c.pump)) / (2.0 * std::abs(d.Delta));
}

double lightshift(const CouplingVectors &c, const DetuningSet &d) {
  c.validate();
  require_detuning(d);
  return (c.stokes.squaredNorm() - c.pump.squaredNorm()) / (4.0 * d.Delta);
}

double second_angle(double theta, double OmegaTildeB, double delta) {
  return 0.5 * std::atan2(delta * std::sin(2.0 * theta), OmegaTildeB - delta * std::cos(2.0 * theta));
}

EffectiveTwoLevel mixing_angles(const CouplingVectors &c, const DetuningSet &d) {
  EffectiveTwoLevel e;
  e.OmegaB = effective_rabi(c, d);
  e.DeltaB = lightshift(c, d);
  if (!std::isfinite(e.OmegaB) || !std::isfinite(e.DeltaB))
    throw std::domain_error("effective coupling or lightshift is not finite");
  e.OmegaTildeB = std::hypot(e.OmegaB, e.DeltaB);

  // tan(theta) = (DeltaB - OmegaTildeB)/OmegaB, i.e. sin 2theta = -OmegaB/OmegaTildeB
  // and cos 2theta = DeltaB/OmegaTildeB. The half-angle form avoids cancellation.
  if (e.OmegaB == 0.0)
    e.theta = e.DeltaB < 0.0 ? -std::numbers::pi / 2.0 : 0.0;
  else
    e.theta = 0.5 * std::atan2(-e.OmegaB, e.DeltaB);

  e.theta2 = second_angle(e.theta, e.OmegaTildeB, d.delta);
  e.DeltaD = e.DeltaB - d.delta;
  e.OmegaTildeD = std::hypot(e.OmegaB, e.DeltaD);
  const Complex overlap = c.stokes.dot(c.pump);
  e.phi = overlap == Complex(0.0, 0.0) ? 0.0 : -std::arg(overlap);
  return e;
}

AmplitudePair evolve_amplitudes(const AmplitudePair &initial, const EffectiveTwoLevel &eff,
                                double delta, double t) {
  const double DeltaD = eff.DeltaB - delta;
  const double OmegaTildeD = std::hypot(eff.OmegaB, DeltaD);

  double c = 1.0, s = 0.0, detune = 0.0, couple = 0.0;
  if (OmegaTildeD > 0.0) {
    c = std::cos(0.5 * OmegaTildeD * t);
    s = std::sin(0.5 * OmegaTildeD * t);
    detune = DeltaD / OmegaTildeD;
    couple = eff.OmegaB / OmegaTildeD;
  }

  AmplitudePair out;
  out.a0 = initial.a0 * (c - kI * detune * s) + initial.a1 * kI * couple * s;
  out.a1 = (initial.a1 * (c + kI * detune * s) + initial.a0 * kI * couple * s) *
           std::exp(-kI * delta * t);
  return out;
}

Eigen::Matrix2cd rotation_BA(double theta, double delta, double t) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2cd m;
  m << c, std::exp(kI * delta * t) * s,
      -std::exp(-kI * delta * t) * s, c;
  return m;
}

Eigen::Matrix2cd phase_CB(double delta, double t) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  m(1, 1) = std::exp(kI * delta * t);
  return m;
}

Eigen::Matrix2cd rotation_DC(double theta2) {
  const double c = std::cos(theta2), s = std::sin(theta2);
  Eigen::Matrix2cd m;
  m << c, s,
      -s, c;
  return m;
}

Eigen::Matrix2cd transform_DA(const EffectiveTwoLevel &eff, double delta, double t) {
  const double theta2 = second_angle(eff.theta, eff.OmegaTildeB, delta);
  return rotation_DC(theta2) * phase_CB(delta, t) * rotation_BA(eff.theta, delta, t);
}

AmplitudePair evolve_via_dressed_chain(const AmplitudePair &initial, const EffectiveTwoLevel &eff,
                                       double delta, double t) {
  const double OmegaTildeD = std::hypot(eff.OmegaB, eff.DeltaB - delta);
  const Eigen::Vector2cd bare0(initial.a0, initial.a1);
  Eigen::Vector2cd dressed = transform_DA(eff, delta, 0.0) * bare0;
  dressed[1] *= std::exp(kI * OmegaTildeD * t);
  Eigen::Vector2cd bare = transform_DA(eff, delta, t).inverse() * dressed;
  bare *= std::exp(-kI * 0.5 * OmegaTildeD * t);
  return {bare[0], bare[1]};
}

double envelope(double OmegaB, double DeltaD) {
  const double tilde = std::hypot(OmegaB, DeltaD);
  return tilde > 0.0 ? std::abs(OmegaB) / tilde : 0.0;
}

double envelope(const EffectiveTwoLevel &eff) { return envelope(eff.OmegaB, eff.DeltaD); }

bool RegimeReport::all_pass() const {
  return far_detuned.pass && no_other_leg.pass && ground_resolved.pass && level_spread.pass;
}

std::vector<RegimeFinding> RegimeReport::findings() const {
  return {far_detuned, no_other_leg, ground_resolved, level_spread};
}

RegimeReport regime_check(const CouplingVectors &c, const DetuningSet &d, double omega10,
                          const RegimeThresholds &thresholds) {
  if (!(omega10 > 0.0)) throw std::invalid_argument("ground splitting must be positive");
  const double scale = max_coupling_norm(c);
  const double inf = std::numeric_limits<double>::infinity();
  auto ratio = [&](double x) { return scale > 0.0 ? std::abs(x) / scale : inf; };

  RegimeReport r;
  r.far_detuned = at_least("single_photon_detuning", ratio(d.Delta), thresholds.min_margin);
  r.no_other_leg =
      at_least("other_leg_detuning",
               std::min(ratio(d.Delta + omega10), ratio(d.Delta - omega10)), thresholds.min_margin);
  r.ground_resolved = at_least("ground_resolution", ratio(omega10), thresholds.min_margin);

  double spread = 0.0;
  if (d.per_level_Delta && d.per_level_Delta->size() > 0)
    spread = (d.per_level_Delta->maxCoeff() - d.per_level_Delta->minCoeff()) / std::abs(d.Delta);
  r.level_spread = {"intermediate_level_spread", spread, thresholds.max_level_spread,
                    spread <= thresholds.max_level_spread};
  return r;
}

}  // namespace raman
