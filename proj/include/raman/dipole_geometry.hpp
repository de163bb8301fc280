#pragma once

#include <vector>

#include <Eigen/Core>

#include "raman/half_int.hpp"
#include "raman/wigner.hpp"

namespace raman {

/// Field polarisation component q in {-1, 0, +1}.
class Polarization {
 public:
  constexpr Polarization() = default;
  /// Throws std::invalid_argument outside {-1, 0, +1}.
  explicit Polarization(int q);

  constexpr int q() const { return q_; }
  constexpr bool operator==(const Polarization &) const = default;

 private:
  int q_ = 0;
};

/// Hyperfine Zeeman sublevel |I J F mF>.
struct AngularMomentumState {
  HalfInt I;
  HalfInt J;
  HalfInt F;
  HalfInt mF;

  /// Checks |I-J| <= F <= I+J, |mF| <= F and the F/mF parity.
  void validate() const;
};

/// Ground hyperfine manifold of an alkali atom: pump couples out of
/// F = I - 1/2, Stokes out of F = I + 1/2.
enum class Branch { pump, stokes };

HalfInt branch_F(HalfInt I, Branch branch);

struct GeometricComponent {
  HalfInt Fprime;
  double value = 0.0;
};

/// Geometric factors over every F' of one excited fine-structure manifold,
/// ascending in F'. Components forbidden by m-selection are kept as zeros so
/// that pump and Stokes vectors align index by index.
struct GeometricVector {
  std::vector<GeometricComponent> components;
  Branch branch = Branch::pump;

  Eigen::VectorXd values() const;
  double norm_sq() const { return values().squaredNorm(); }
};

struct ReducedDipole {
  double value = 0.0;  // C m
};

/// Geometric part of the dipole matrix element between ground and excited
/// sublevels for polarisation q,
///   G = (-1)^(2F'+J+I+mF) sqrt((2F'+1)(2F+1)(2J+1))
///       (F' 1 F; mF' -q -mF) {J J' 1; F' F I}.
/// The 3-j carries -q so that its selection rule is mF' = mF + q.
/// Throws std::invalid_argument if excited.mF != ground.mF + q or the nuclear
/// spins differ.
double geometric_factor(const AngularMomentumState &ground, const AngularMomentumState &excited,
                        Polarization q);
SignedSqrt geometric_factor_exact(const AngularMomentumState &ground,
                                  const AngularMomentumState &excited, Polarization q);

/// G over all F' of the J' manifold, |J'-I| <= F' <= J'+I. Requires ground.J = 1/2
/// and J' in {1/2, 3/2}.
GeometricVector coupling_vector(const AngularMomentumState &ground, Polarization q, HalfInt Jprime);

/// A(1/2) = -2 (D1), A(3/2) = 1 (D2); throws for any other J'.
int line_asymmetry(HalfInt Jprime);

/// Closed form of ||G||^2 = (1/3)(1 +/- A(J') q mF/(2I+1)), + for the Stokes
/// branch and - for the pump branch.
double g_norm_sq_closed(HalfInt I, Branch branch, HalfInt mF, Polarization q, HalfInt Jprime);
Rational g_norm_sq_closed_exact(HalfInt I, Branch branch, HalfInt mF, Polarization q,
                                HalfInt Jprime);

/// Closed form of |G_P . G_S| for a Raman pair labelled by the pump-branch mF.
/// Supported (qP, qS): (1,1) and (0,1) directly, (-1,-1) and (0,-1) through
/// mF -> -mF. Anything else throws std::invalid_argument.
double g_dot_closed(HalfInt I, HalfInt mF, Polarization qP, Polarization qS, HalfInt Jprime);
/// Square of g_dot_closed, exact.
Rational g_dot_closed_sq_exact(HalfInt I, HalfInt mF, Polarization qP, Polarization qS,
                               HalfInt Jprime);

/// n(n+1)/2
long long triangular(long long n);

/// Inverts Gamma = 16 pi^3/(3 eps0 h lambda^3) (2J+1)/(2J'+1) |<J||mu||J'>|^2.
/// gamma in rad/s, wavelength in m.
ReducedDipole reduced_dipole_from_linewidth(double gamma, double wavelength, HalfInt J,
                                            HalfInt Jprime);

}  // namespace raman
