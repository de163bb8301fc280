#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace raman {

using Complex = std::complex<double>;

/// Pump and Stokes couplings to each intermediate level, rad/s.
struct CouplingVectors {
  Eigen::VectorXcd pump;
  Eigen::VectorXcd stokes;

  Eigen::Index levels() const { return pump.size(); }
  /// Equal non-zero lengths, finite entries; throws std::invalid_argument.
  void validate() const;
};

/// sqrt(||Omega_P||^2 + ||Omega_S||^2)
double coupling_scale(const CouplingVectors &c);

/// Single-photon detuning Delta, two-photon detuning delta and optional
/// per-level single-photon detunings, rad/s.
struct DetuningSet {
  double Delta = 0.0;
  double delta = 0.0;
  std::optional<Eigen::VectorXd> per_level_Delta;

  /// Detuning of intermediate level i (per-level value if present).
  double level(Eigen::Index i) const { return per_level_Delta ? (*per_level_Delta)[i] : Delta; }
  void validate(Eigen::Index levels) const;
};

struct EffectiveTwoLevel {
  double OmegaB = 0.0;
  double DeltaB = 0.0;
  double OmegaTildeB = 0.0;
  double theta = 0.0;
  double theta2 = 0.0;
  double DeltaD = 0.0;
  double OmegaTildeD = 0.0;
  double phi = 0.0;
};

struct AmplitudePair {
  Complex a0{1.0, 0.0};
  Complex a1{0.0, 0.0};

  double norm_sq() const { return std::norm(a0) + std::norm(a1); }
};

/// |Omega_P . Omega_S^*| / (2|Delta|)
double effective_rabi(const CouplingVectors &c, const DetuningSet &d);
/// (||Omega_S||^2 - ||Omega_P||^2) / (4 Delta)
double lightshift(const CouplingVectors &c, const DetuningSet &d);

/// Populates every field of EffectiveTwoLevel. theta is the ground-state
/// dressing angle (tan theta = (DeltaB - OmegaTildeB)/OmegaB), theta2 the
/// second rotation that removes the two-photon detuning, phi = -arg(P.S^*).
EffectiveTwoLevel mixing_angles(const CouplingVectors &c, const DetuningSet &d);

/// Second dressing angle for a given two-photon detuning; 2*theta2 in (-pi, pi].
double second_angle(double theta, double OmegaTildeB, double delta);

/// Closed-form bare-state amplitudes at time t. The two-photon detuning passed
/// here is authoritative: DeltaD = eff.DeltaB - delta.
AmplitudePair evolve_amplitudes(const AmplitudePair &initial, const EffectiveTwoLevel &eff,
                                double delta, double t);

// Basis changes between the bare ground states (A), the dressed states (B),
// the rotating dressed frame (C) and the doubly dressed frame (D).
Eigen::Matrix2cd rotation_BA(double theta, double delta, double t);
Eigen::Matrix2cd phase_CB(double delta, double t);
Eigen::Matrix2cd rotation_DC(double theta2);
Eigen::Matrix2cd transform_DA(const EffectiveTwoLevel &eff, double delta, double t);

/// Same evolution as evolve_amplitudes, assembled from the transformation
/// chain: bare -> doubly dressed, pure phase evolution, back to bare. The
/// common phase exp(i OmegaTildeD t/2) is removed so both routes compare
/// amplitude by amplitude.
AmplitudePair evolve_via_dressed_chain(const AmplitudePair &initial, const EffectiveTwoLevel &eff,
                                       double delta, double t);

/// Oscillation envelope m = OmegaB / sqrt(OmegaB^2 + DeltaD^2); 0 when both vanish.
double envelope(const EffectiveTwoLevel &eff);
double envelope(double OmegaB, double DeltaD);

struct RegimeThresholds {
  double min_margin = 10.0;         // "much greater than"
  double max_level_spread = 0.1;    // spread of per-level detunings / |Delta|
};

struct RegimeFinding {
  std::string name;
  double margin = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct RegimeReport {
  RegimeFinding far_detuned;       // |Delta| >> ||Omega||
  RegimeFinding no_other_leg;      // |Delta +- omega10| >> ||Omega||
  RegimeFinding ground_resolved;   // omega10 >> ||Omega||
  RegimeFinding level_spread;      // per-level detunings close to Delta

  bool all_pass() const;
  std::vector<RegimeFinding> findings() const;
};

/// Validity of the effective two-level description. Never throws on a bad
/// regime; callers decide what to do with failed findings.
RegimeReport regime_check(const CouplingVectors &c, const DetuningSet &d, double omega10,
                          const RegimeThresholds &thresholds = {});

}  // namespace raman
