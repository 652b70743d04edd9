#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "quadpart/error.hpp"

namespace quadpart {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline int sign(const BigInt& x) { return x.sign(); }

// Floor division; boost truncates toward zero.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a.sign() < 0) != (b.sign() < 0))) --q;
  return q;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

inline BigInt isqrt(const BigInt& n) { return boost::multiprecision::sqrt(n); }

inline std::optional<std::int64_t> to_int64(const BigInt& x) {
  if (x > BigInt(INT64_MAX) || x < BigInt(INT64_MIN)) return std::nullopt;
  return static_cast<std::int64_t>(x);
}

inline std::string to_string(const BigInt& x) { return x.str(); }

inline BigInt parse_bigint(std::string_view text) {
  std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (start == text.size()) raise(Errc::ParseError, "empty integer literal");
  for (std::size_t k = start; k < text.size(); ++k) {
    if (text[k] < '0' || text[k] > '9') {
      raise(Errc::ParseError, "not a base-10 integer: '" + std::string(text) + "'");
    }
  }
  BigInt value(std::string(text.substr(start)));
  return text[0] == '-' ? BigInt(-value) : value;
}

// Signed 128-bit helpers for the small-coordinate fast paths.
using i128 = __int128;

inline std::int64_t isqrt128(i128 n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<i128>(r) * r > n) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace detail
}  // namespace quadpart
