#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace laakso {

/// Exact dyadic rational numerator / 2^exponent with a 64-bit numerator.
///
/// Values are kept normalized: either the exponent is zero or the numerator
/// is odd. Arithmetic throws Error(kDomain) on 64-bit overflow instead of
/// silently losing exactness.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  constexpr explicit Dyadic(std::int64_t integer) : num_(integer) {}

  static Dyadic from_parts(std::int64_t numerator, int exponent);

  /// Parses a finite decimal ("-12.375") that denotes a dyadic rational.
  static Dyadic parse(std::string_view text);

  std::int64_t numerator() const { return num_; }
  int exponent() const { return exp_; }

  double to_double() const;

  /// Exact finite decimal expansion; dyadic rationals always terminate.
  std::string to_decimal() const;

  Dyadic half() const { return from_parts(num_, exp_ + 1); }
  Dyadic abs() const { return num_ < 0 ? from_parts(-num_, exp_) : *this; }
  bool is_zero() const { return num_ == 0; }

  /// Numerator of this value over the common denominator 2^exponent.
  /// Requires exponent >= exponent().
  std::int64_t scaled_to(int exponent) const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a) { return from_parts(-a.num_, a.exp_); }
  friend Dyadic operator*(const Dyadic& a, std::int64_t k);

  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  std::int64_t num_ = 0;
  int exp_ = 0;
};

}  // namespace laakso
