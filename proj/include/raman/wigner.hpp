#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "raman/half_int.hpp"

namespace raman {

using Rational = boost::multiprecision::cpp_rational;

struct ThreeJArgs {
  HalfInt j1, j2, j3;
  HalfInt m1, m2, m3;
};

struct SixJArgs {
  HalfInt j1, j2, j3;
  HalfInt j4, j5, j6;
};

/// A real number held exactly as sign * sqrt(square).
struct SignedSqrt {
  int sign = 0;  // -1, 0 or +1
  Rational square = 0;

  double value() const;
};

/// |a-b| <= c <= a+b with a+b+c integral.
bool triangle_ok(HalfInt a, HalfInt b, HalfInt c);

// Racah single-sum formulas evaluated in exact rational arithmetic.
// Selection-rule violations give exactly 0. Throws std::invalid_argument for
// negative j or a j/m pair that differs by a non-integer.
SignedSqrt wigner_3j_exact(const ThreeJArgs &args);
SignedSqrt wigner_6j_exact(const SixJArgs &args);

double wigner_3j(const ThreeJArgs &args);
double wigner_6j(const SixJArgs &args);

}  // namespace raman
