#include "laakso/dyadic.hpp"

#include <cmath>
#include <limits>

#include "laakso/error.hpp"

namespace laakso {
namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorKind::kDomain, "dyadic numerator overflows 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

i128 shift_up(std::int64_t num, int bits) {
  if (bits > 62) throw Error(ErrorKind::kDomain, "dyadic exponent gap too large");
  const i128 r = static_cast<i128>(num) << bits;
  return r;
}

}  // namespace

Dyadic Dyadic::from_parts(std::int64_t numerator, int exponent) {
  Dyadic d;
  if (numerator == 0) return d;
  if (exponent < 0) {
    d.num_ = narrow(shift_up(numerator, -exponent));
    return d;
  }
  while (exponent > 0 && (numerator & 1) == 0) {
    numerator /= 2;
    --exponent;
  }
  d.num_ = numerator;
  d.exp_ = exponent;
  return d;
}

std::int64_t Dyadic::scaled_to(int exponent) const {
  if (exponent < exp_) throw Error(ErrorKind::kDomain, "cannot scale dyadic to a coarser denominator");
  return narrow(shift_up(num_, exponent - exp_));
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num_), -exp_); }

std::string Dyadic::to_decimal() const {
  std::string out;
  i128 mag = num_;
  if (mag < 0) {
    out.push_back('-');
    mag = -mag;
  }
  const i128 denom = static_cast<i128>(1) << exp_;
  i128 whole = mag / denom;
  i128 rem = mag % denom;
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
    whole /= 10;
  } while (whole > 0);
  out += digits;
  if (rem != 0) {
    out.push_back('.');
    while (rem != 0) {
      rem *= 10;
      out.push_back(static_cast<char>('0' + static_cast<int>(rem / denom)));
      rem %= denom;
    }
  }
  return out;
}

Dyadic Dyadic::parse(std::string_view text) {
  auto fail = [&]() -> Error {
    return Error(ErrorKind::kParse, "not a dyadic decimal: '" + std::string(text) + "'");
  };
  if (text.empty()) throw fail();
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  i128 mantissa = 0;
  int frac_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (seen_point) throw fail();
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') throw fail();
    seen_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (mantissa > (static_cast<i128>(1) << 100)) throw fail();
    if (seen_point) ++frac_digits;
  }
  if (!seen_digit) throw fail();
  // value = mantissa / (2^k 5^k); exact iff 5^k divides mantissa.
  for (int i = 0; i < frac_digits; ++i) {
    if (mantissa % 5 != 0) throw fail();
    mantissa /= 5;
  }
  if (negative) mantissa = -mantissa;
  return from_parts(narrow(mantissa), frac_digits);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const int e = std::max(a.exp_, b.exp_);
  return Dyadic::from_parts(narrow(shift_up(a.num_, e - a.exp_) + shift_up(b.num_, e - b.exp_)), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  const int e = std::max(a.exp_, b.exp_);
  return Dyadic::from_parts(narrow(shift_up(a.num_, e - a.exp_) - shift_up(b.num_, e - b.exp_)), e);
}

Dyadic operator*(const Dyadic& a, std::int64_t k) {
  return Dyadic::from_parts(narrow(static_cast<i128>(a.num_) * k), a.exp_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const int e = std::max(a.exp_, b.exp_);
  const i128 x = shift_up(a.num_, e - a.exp_);
  const i128 y = shift_up(b.num_, e - b.exp_);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace laakso
