#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

#include "dshell/errors.hpp"

namespace dshell {

/// A decimal literal held exactly: value = (negative ? -1 : 1) * digits * 10^exponent,
/// with no leading or trailing zeros in `digits` (empty digits means zero).
struct Decimal {
  bool negative = false;
  std::string digits;
  int exponent = 0;

  bool is_zero() const { return digits.empty(); }
  bool equals_integer(long long v) const {
    if (v == 0) return is_zero();
    const bool neg = v < 0;
    std::string d = std::to_string(neg ? -v : v);
    int e = 0;
    while (d.size() > 1 && d.back() == '0') {
      d.pop_back();
      ++e;
    }
    return negative == neg && digits == d && exponent == e;
  }
};

/// Parses [+-]digits[.digits][(e|E)[+-]digits]. Returns nullopt on any
/// malformed input (including empty strings, "inf", "nan", hex).
inline std::optional<Decimal> parse_decimal(std::string_view s) {
  Decimal out;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    out.negative = s[i] == '-';
    ++i;
  }
  std::string mantissa;
  int frac_digits = 0;
  bool any_digit = false, seen_point = false;
  for (; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch >= '0' && ch <= '9') {
      mantissa.push_back(ch);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) return std::nullopt;
  long long exp10 = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') return std::nullopt;
    ++i;
    bool neg_exp = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      neg_exp = s[i] == '-';
      ++i;
    }
    if (i == s.size()) return std::nullopt;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      exp10 = exp10 * 10 + (s[i] - '0');
      if (exp10 > 100000) return std::nullopt;
    }
    if (neg_exp) exp10 = -exp10;
  }
  std::size_t first = mantissa.find_first_not_of('0');
  if (first == std::string::npos) {
    out.negative = false;
    return out;
  }
  mantissa.erase(0, first);
  long long e = exp10 - frac_digits;
  while (!mantissa.empty() && mantissa.back() == '0') {
    mantissa.pop_back();
    ++e;
  }
  out.digits = mantissa;
  out.exponent = static_cast<int>(e);
  return out;
}

/// Reduced fraction num/den with den > 0.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  int sign() const { return (num > 0) - (num < 0); }
  friend bool operator==(const Ratio&, const Ratio&) = default;

  /// Builds a reduced ratio from 128-bit parts; nullopt if it does not fit.
  static std::optional<Ratio> make(__int128 n, __int128 d) {
    if (d == 0) return std::nullopt;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 kLimit = INT64_MAX;
    if (n > kLimit || -n > kLimit || d > kLimit) return std::nullopt;
    return Ratio{static_cast<std::int64_t>(n), static_cast<std::int64_t>(d)};
  }
};

inline std::optional<Ratio> to_ratio(const Decimal& d) {
  if (d.is_zero()) return Ratio{0, 1};
  if (d.digits.size() > 18 || d.exponent > 18 || d.exponent < -18) return std::nullopt;
  __int128 n = 0;
  for (char ch : d.digits) n = n * 10 + (ch - '0');
  __int128 den = 1;
  for (int k = 0; k < std::abs(d.exponent); ++k) {
    if (d.exponent > 0) n *= 10; else den *= 10;
  }
  if (d.negative) n = -n;
  return Ratio::make(n, den);
}

/// Exact dyadic value of a finite double, when numerator and denominator fit.
inline std::optional<Ratio> ratio_from_double(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  if (v == 0.0) return Ratio{0, 1};
  int e = 0;
  const double frac = std::frexp(v, &e);  // v = frac * 2^e, 0.5 <= |frac| < 1
  auto mant = static_cast<__int128>(std::ldexp(frac, 53));
  int shift = e - 53;
  while (shift < 0 && (mant % 2 == 0)) {
    mant /= 2;
    ++shift;
  }
  if (shift >= 0) {
    if (shift > 62) return std::nullopt;
    return Ratio::make(mant << shift, 1);
  }
  if (-shift > 62) return std::nullopt;
  return Ratio::make(mant, static_cast<__int128>(1) << (-shift));
}

/// Coupling eta and mass m of the shell operator.
///
/// `critical()` is decided by exact comparison (eta == +-2) on the decimal
/// input, so "2", "2.0", "-2" and "0.2e1" are critical while "1.9999999" is
/// not. When available, the exact value of eta is kept as a reduced fraction
/// so that set-level formulas (band edge, eta -> -4/eta) are evaluated from
/// integers.
class ShellParams {
 public:
  ShellParams() = default;

  /// Parse decimal strings; throws ParseError on malformed input.
  static ShellParams parse(std::string_view eta, std::string_view m) {
    const auto eta_dec = parse_decimal(eta);
    if (!eta_dec) throw ParseError("invalid decimal for eta: '" + std::string(eta) + "'");
    const auto m_dec = parse_decimal(m);
    if (!m_dec) throw ParseError("invalid decimal for m: '" + std::string(m) + "'");
    ShellParams p;
    p.eta_ = to_double(eta, "eta");
    p.m_ = to_double(m, "m");
    p.critical_ = eta_dec->equals_integer(2) || eta_dec->equals_integer(-2);
    p.eta_exact_ = to_ratio(*eta_dec);
    return p;
  }

  /// Programmatic construction; criticality by exact floating comparison.
  static ShellParams make(double eta, double m) {
    if (!std::isfinite(eta) || !std::isfinite(m)) {
      throw ParseError("ShellParams: eta and m must be finite");
    }
    ShellParams p;
    p.eta_ = eta;
    p.m_ = m;
    p.critical_ = eta == 2.0 || eta == -2.0;
    p.eta_exact_ = ratio_from_double(eta);
    return p;
  }

  static ShellParams from_ratio(Ratio eta, double m) {
    ShellParams p;
    p.eta_ = eta.value();
    p.m_ = m;
    p.critical_ = eta.den == 1 && (eta.num == 2 || eta.num == -2);
    p.eta_exact_ = eta;
    return p;
  }

  double eta() const { return eta_; }
  double m() const { return m_; }
  double abs_m() const { return std::abs(m_); }
  bool critical() const { return critical_; }
  bool free() const { return eta_exact_ ? eta_exact_->num == 0 : eta_ == 0.0; }
  const std::optional<Ratio>& eta_exact() const { return eta_exact_; }

  /// Sign of eta * (eta^2 - 4), exact when the rational value is known.
  int band_side_sign() const {
    if (eta_exact_) {
      const __int128 n = eta_exact_->num, d = eta_exact_->den;
      const __int128 q = n * n - 4 * d * d;
      const int sq = (q > 0) - (q < 0);
      return eta_exact_->sign() * sq;
    }
    const double q = eta_ * eta_ - 4.0;
    return ((eta_ > 0) - (eta_ < 0)) * ((q > 0) - (q < 0));
  }

  friend bool operator==(const ShellParams& a, const ShellParams& b) {
    return a.eta_ == b.eta_ && a.m_ == b.m_ && a.critical_ == b.critical_;
  }

 private:
  static double to_double(std::string_view s, const char* name) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw ParseError(std::string("value out of range for ") + name + ": '" + std::string(s) + "'");
    }
    return v;
  }

  double eta_ = 0.0;
  double m_ = 1.0;
  bool critical_ = false;
  std::optional<Ratio> eta_exact_ = Ratio{0, 1};
};

}  // namespace dshell
