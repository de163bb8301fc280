#include "raman/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace raman {

namespace {

using boost::multiprecision::cpp_int;

const cpp_int &factorial(int n) {
  // Immutable after the (thread-safe) static initialisation.
  static const std::vector<cpp_int> table = [] {
    std::vector<cpp_int> f(256);
    f[0] = 1;
    for (int i = 1; i < 256; ++i) f[i] = f[i - 1] * i;
    return f;
  }();
  if (n < 0 || n >= static_cast<int>(table.size()))
    throw std::out_of_range("factorial argument outside the supported range");
  return table[n];
}

// Delta(abc) = (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!, arguments doubled.
Rational triangle_coefficient(int a2, int b2, int c2) {
  Rational num = factorial((a2 + b2 - c2) / 2) * factorial((a2 - b2 + c2) / 2) *
                 factorial((-a2 + b2 + c2) / 2);
  return num / Rational(factorial((a2 + b2 + c2) / 2 + 1));
}

int sign_of(const Rational &r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

void require_magnitude(HalfInt j, const char *what) {
  if (j.twice() < 0) throw std::invalid_argument(std::string(what) + " must be non-negative");
}

}  // namespace

double SignedSqrt::value() const {
  if (sign == 0) return 0.0;
  return sign * std::sqrt(square.convert_to<double>());
}

bool triangle_ok(HalfInt a, HalfInt b, HalfInt c) {
  if ((a.twice() + b.twice() + c.twice()) % 2 != 0) return false;
  return abs(a - b) <= c && c <= a + b;
}

SignedSqrt wigner_3j_exact(const ThreeJArgs &s) {
  require_magnitude(s.j1, "j1");
  require_magnitude(s.j2, "j2");
  require_magnitude(s.j3, "j3");
  if (!same_parity(s.j1, s.m1) || !same_parity(s.j2, s.m2) || !same_parity(s.j3, s.m3))
    throw std::invalid_argument("3-j symbol: j and m must differ by an integer");

  if ((s.m1 + s.m2 + s.m3).twice() != 0) return {};
  if (!triangle_ok(s.j1, s.j2, s.j3)) return {};
  if (abs(s.m1) > s.j1 || abs(s.m2) > s.j2 || abs(s.m3) > s.j3) return {};

  // All combinations below are integers once the selection rules hold.
  const int j1 = s.j1.twice(), j2 = s.j2.twice(), j3 = s.j3.twice();
  const int m1 = s.m1.twice(), m2 = s.m2.twice(), m3 = s.m3.twice();

  const int kmin = std::max({0, (j2 - j3 - m1) / 2, (j1 - j3 + m2) / 2});
  const int kmax = std::min({(j1 + j2 - j3) / 2, (j1 - m1) / 2, (j2 + m2) / 2});

  Rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    cpp_int den = factorial(k) * factorial((j3 - j2 + m1) / 2 + k) *
                  factorial((j3 - j1 - m2) / 2 + k) * factorial((j1 + j2 - j3) / 2 - k) *
                  factorial((j1 - m1) / 2 - k) * factorial((j2 + m2) / 2 - k);
    Rational term(cpp_int(1), den);
    sum += (k % 2 == 0) ? term : Rational(-term);
  }
  if (sum == 0) return {};

  Rational pre = triangle_coefficient(j1, j2, j3);
  pre *= factorial((j1 + m1) / 2) * factorial((j1 - m1) / 2) * factorial((j2 + m2) / 2) *
         factorial((j2 - m2) / 2) * factorial((j3 + m3) / 2) * factorial((j3 - m3) / 2);

  int sign = sign_of(sum);
  // (-1)^(j1-j2-m3)
  if (((j1 - j2 - m3) / 2) % 2 != 0) sign = -sign;
  return {sign, pre * sum * sum};
}

SignedSqrt wigner_6j_exact(const SixJArgs &s) {
  require_magnitude(s.j1, "j1");
  require_magnitude(s.j2, "j2");
  require_magnitude(s.j3, "j3");
  require_magnitude(s.j4, "j4");
  require_magnitude(s.j5, "j5");
  require_magnitude(s.j6, "j6");
  if (!triangle_ok(s.j1, s.j2, s.j3) || !triangle_ok(s.j1, s.j5, s.j6) ||
      !triangle_ok(s.j4, s.j2, s.j6) || !triangle_ok(s.j4, s.j5, s.j3))
    return {};

  const int a = s.j1.twice(), b = s.j2.twice(), c = s.j3.twice();
  const int d = s.j4.twice(), e = s.j5.twice(), f = s.j6.twice();

  const int t1 = (a + b + c) / 2, t2 = (a + e + f) / 2, t3 = (d + b + f) / 2,
            t4 = (d + e + c) / 2;
  const int u1 = (a + b + d + e) / 2, u2 = (b + c + e + f) / 2, u3 = (c + a + f + d) / 2;

  const int tmin = std::max({t1, t2, t3, t4});
  const int tmax = std::min({u1, u2, u3});

  Rational sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    cpp_int den = factorial(t - t1) * factorial(t - t2) * factorial(t - t3) * factorial(t - t4) *
                  factorial(u1 - t) * factorial(u2 - t) * factorial(u3 - t);
    Rational term(factorial(t + 1), den);
    sum += (t % 2 == 0) ? term : Rational(-term);
  }
  if (sum == 0) return {};

  Rational pre = triangle_coefficient(a, b, c) * triangle_coefficient(a, e, f) *
                 triangle_coefficient(d, b, f) * triangle_coefficient(d, e, c);
  return {sign_of(sum), pre * sum * sum};
}

double wigner_3j(const ThreeJArgs &args) { return wigner_3j_exact(args).value(); }

double wigner_6j(const SixJArgs &args) { return wigner_6j_exact(args).value(); }

}  // namespace raman
