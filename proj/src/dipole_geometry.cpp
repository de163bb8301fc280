#include "raman/dipole_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "raman/constants.hpp"

namespace raman {

namespace {

const HalfInt kOne = HalfInt::integer(1);

void require_same_parity(HalfInt F, HalfInt mF, const char *what) {
  if (!same_parity(F, mF) || abs(mF) > F)
    throw std::invalid_argument(std::string(what) + ": mF=" + mF.str() +
                                " is not a projection of F=" + F.str());
}

void require_supported_jprime(HalfInt Jprime) {
  if (Jprime.twice() != 1 && Jprime.twice() != 3)
    throw std::invalid_argument("J' must be 1/2 (D1) or 3/2 (D2), got " + Jprime.str());
}

// Prefactor sign and sqrt argument of the geometric factor, exact.
SignedSqrt geometric_prefactor(const AngularMomentumState &g, HalfInt Fprime) {
  const int exponent2 = 2 * (2 * Fprime.twice()) + g.J.twice() + g.I.twice() + g.mF.twice();
  const int sign = ((exponent2 / 2) % 2 == 0) ? 1 : -1;
  Rational sq = Rational((Fprime.twice() + 1) * (g.F.twice() + 1) * (g.J.twice() + 1));
  return {sign, sq};
}

}  // namespace

Polarization::Polarization(int q) : q_(q) {
  if (q < -1 || q > 1)
    throw std::invalid_argument("polarization q must be -1, 0 or +1, got " + std::to_string(q));
}

void AngularMomentumState::validate() const {
  if (I.twice() < 0 || J.twice() < 0 || F.twice() < 0)
    throw std::invalid_argument("angular momenta must be non-negative");
  if (!triangle_ok(I, J, F))
    throw std::invalid_argument("F=" + F.str() + " is not reachable from I=" + I.str() +
                                ", J=" + J.str());
  require_same_parity(F, mF, "state");
}

HalfInt branch_F(HalfInt I, Branch branch) {
  const HalfInt half = HalfInt::half(1);
  if (branch == Branch::pump) {
    if (I.twice() < 1) throw std::invalid_argument("I = 0 has no F = I - 1/2 manifold");
    return I - half;
  }
  return I + half;
}

Eigen::VectorXd GeometricVector::values() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(components.size()));
  for (std::size_t i = 0; i < components.size(); ++i) v[static_cast<Eigen::Index>(i)] = components[i].value;
  return v;
}

SignedSqrt geometric_factor_exact(const AngularMomentumState &ground,
                                  const AngularMomentumState &excited, Polarization q) {
  if (ground.I != excited.I)
    throw std::invalid_argument("ground and excited states must share the nuclear spin");
  if (excited.mF != ground.mF + q.q())
    throw std::invalid_argument("excited mF must equal ground mF + q (mF=" + ground.mF.str() +
                                ", q=" + std::to_string(q.q()) + ", mF'=" + excited.mF.str() + ")");

  const HalfInt qh = HalfInt::integer(q.q());
  SignedSqrt three = wigner_3j_exact({excited.F, kOne, ground.F, excited.mF, -qh, -ground.mF});
  if (three.sign == 0) return {};
  SignedSqrt six = wigner_6j_exact({ground.J, excited.J, kOne, excited.F, ground.F, ground.I});
  if (six.sign == 0) return {};

  SignedSqrt pre = geometric_prefactor(ground, excited.F);
  return {pre.sign * three.sign * six.sign, pre.square * three.square * six.square};
}

double geometric_factor(const AngularMomentumState &ground, const AngularMomentumState &excited,
                        Polarization q) {
  return geometric_factor_exact(ground, excited, q).value();
}

GeometricVector coupling_vector(const AngularMomentumState &ground, Polarization q,
                                HalfInt Jprime) {
  ground.validate();
  if (ground.J.twice() != 1) throw std::invalid_argument("ground state must have J = 1/2");
  require_supported_jprime(Jprime);

  GeometricVector out;
  out.branch = ground.F < ground.I ? Branch::pump : Branch::stokes;
  const HalfInt mFp = ground.mF + q.q();
  for (HalfInt Fp = abs(Jprime - ground.I); Fp <= Jprime + ground.I; Fp = Fp + 1) {
    AngularMomentumState excited{ground.I, Jprime, Fp, mFp};
    out.components.push_back({Fp, geometric_factor(ground, excited, q)});
  }
  return out;
}

int line_asymmetry(HalfInt Jprime) {
  require_supported_jprime(Jprime);
  return Jprime.twice() == 1 ? -2 : 1;
}

Rational g_norm_sq_closed_exact(HalfInt I, Branch branch, HalfInt mF, Polarization q,
                                HalfInt Jprime) {
  const int A = line_asymmetry(Jprime);
  require_same_parity(branch_F(I, branch), mF, "g_norm_sq_closed");
  const int sign = branch == Branch::stokes ? 1 : -1;
  // q mF/(2I+1) = q (2mF) / (2 (2I+1))
  Rational ratio(q.q() * mF.twice(), 2 * (I.twice() + 1));
  return Rational(1, 3) * (Rational(1) + sign * A * ratio);
}

double g_norm_sq_closed(HalfInt I, Branch branch, HalfInt mF, Polarization q, HalfInt Jprime) {
  return g_norm_sq_closed_exact(I, branch, mF, q, Jprime).convert_to<double>();
}

Rational g_dot_closed_sq_exact(HalfInt I, HalfInt mF, Polarization qP, Polarization qS,
                               HalfInt Jprime) {
  const int A = line_asymmetry(Jprime);
  require_same_parity(branch_F(I, Branch::pump), mF, "g_dot_closed");

  const int p = qP.q(), s = qS.q();
  Rational radicand;
  if ((p == 1 && s == 1) || (p == -1 && s == -1)) {
    // (I+1/2)^2 - mF^2, even in mF
    const int top = I.twice() + 1;
    radicand = Rational(top * top - mF.twice() * mF.twice(), 4);
  } else if (p == 0 && (s == 1 || s == -1)) {
    const HalfInt m = s == 1 ? mF : -mF;
    const HalfInt n = I + HalfInt::half(1) - m;
    radicand = Rational(triangular(n.as_int()));
  } else {
    throw std::invalid_argument("closed form |G_P.G_S| supports (qP,qS) = (1,1), (-1,-1), (0,1), "
                                "(0,-1); got (" +
                                std::to_string(p) + "," + std::to_string(s) +
                                "); use the coupling-vector route instead");
  }
  const int denom = 3 * (I.twice() + 1);
  return Rational(A * A, denom * denom) * radicand;
}

double g_dot_closed(HalfInt I, HalfInt mF, Polarization qP, Polarization qS, HalfInt Jprime) {
  return std::sqrt(g_dot_closed_sq_exact(I, mF, qP, qS, Jprime).convert_to<double>());
}

long long triangular(long long n) {
  if (n < 0) throw std::invalid_argument("triangular number of a negative index");
  return n * (n + 1) / 2;
}

ReducedDipole reduced_dipole_from_linewidth(double gamma, double wavelength, HalfInt J,
                                            HalfInt Jprime) {
  if (!(gamma > 0.0) || !(wavelength > 0.0))
    throw std::invalid_argument("linewidth and wavelength must be positive");
  using namespace constants;
  const double pi3 = pi * pi * pi;
  const double num = 3.0 * vacuum_permittivity * planck * wavelength * wavelength * wavelength *
                     gamma * (Jprime.twice() + 1);
  const double den = 16.0 * pi3 * (J.twice() + 1);
  return {std::sqrt(num / den)};
}

}  // namespace raman
