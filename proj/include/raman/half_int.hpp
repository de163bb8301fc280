#pragma once

#include <compare>
#include <cstdlib>
#include <string>

namespace raman {

/// Angular-momentum quantum number stored as twice its value, so that
/// half-integers are exact and all comparisons are integral.
class HalfInt {
 public:
  constexpr HalfInt() = default;

  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
  static constexpr HalfInt integer(int n) { return HalfInt(2 * n); }
  /// n/2
  static constexpr HalfInt half(int n) { return HalfInt(n); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// Integer value; only meaningful when is_integer().
  constexpr int as_int() const { return twice_ / 2; }

  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
  constexpr HalfInt operator+(int n) const { return HalfInt(twice_ + 2 * n); }
  constexpr HalfInt operator-(int n) const { return HalfInt(twice_ - 2 * n); }
  constexpr HalfInt &operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }

  constexpr auto operator<=>(const HalfInt &) const = default;

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

 private:
  constexpr explicit HalfInt(int twice) : twice_(twice) {}
  int twice_ = 0;
};

constexpr HalfInt abs(HalfInt h) { return h.twice() < 0 ? -h : h; }

/// True when a and b differ by an integer.
constexpr bool same_parity(HalfInt a, HalfInt b) {
  return (a.twice() - b.twice()) % 2 == 0;
}

namespace literals {
/// 7_h2 == 7/2
constexpr HalfInt operator""_h2(unsigned long long twice) {
  return HalfInt::from_twice(static_cast<int>(twice));
}
}  // namespace literals

}  // namespace raman
