#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "quadpart/detail/bigint.hpp"
#include "quadpart/error.hpp"

namespace quadpart {

enum class BasisCase { Sqrt, HalfIntegral };

inline bool is_squarefree(std::int64_t n) {
  if (n < 1) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

/// Constants of K = Q(sqrt D) over the integral basis (1, w).
///
/// w = sqrt D when D = 2,3 (mod 4) and (1 + sqrt D)/2 when D = 1 (mod 4).
/// In both cases w = (tr_omega + sqrt disc)/2 and w^2 = tr_omega*w - nm_omega.
class Field {
 public:
  std::int64_t D() const noexcept { return D_; }
  std::int64_t disc() const noexcept { return disc_; }
  BasisCase basis_case() const noexcept { return case_; }
  std::int64_t tr_omega() const noexcept { return tr_omega_; }
  std::int64_t nm_omega() const noexcept { return nm_omega_; }
  std::int64_t floor_xi() const noexcept { return floor_xi_; }
  std::int64_t c_D() const noexcept { return c_D_; }
  /// floor(sqrt disc)
  std::int64_t isqrt_disc() const noexcept { return isqrt_disc_; }

  friend const Field& make_field(std::int64_t D);

 private:
  explicit Field(std::int64_t D);

  std::int64_t D_;
  std::int64_t disc_;
  BasisCase case_;
  std::int64_t tr_omega_;
  std::int64_t nm_omega_;
  std::int64_t floor_xi_;
  std::int64_t c_D_;
  std::int64_t isqrt_disc_;
};

inline Field::Field(std::int64_t D) : D_(D) {
  if (D % 4 == 1) {
    case_ = BasisCase::HalfIntegral;
    disc_ = D;
    tr_omega_ = 1;
    nm_omega_ = (1 - D) / 4;
    c_D_ = (D - 1) / 4;
  } else {
    case_ = BasisCase::Sqrt;
    disc_ = 4 * D;
    tr_omega_ = 0;
    nm_omega_ = -D;
    c_D_ = D;
  }
  isqrt_disc_ = detail::isqrt128(disc_);
  std::int64_t isqrt_d = detail::isqrt128(D);
  // xi = -w' is sqrt D or (sqrt D - 1)/2; floor(x/2) = floor(floor(x)/2).
  floor_xi_ = case_ == BasisCase::Sqrt ? isqrt_d : detail::floor_div(isqrt_d - 1, 2);
}

/// Validates D and returns the process-wide context for Q(sqrt D).
/// Contexts are interned, so the returned reference stays valid for the
/// lifetime of the program and identity comparison is field equality.
inline const Field& make_field(std::int64_t D) {
  if (D < 2) raise(Errc::OutOfRange, "D must be >= 2, got " + std::to_string(D));
  if (D > (std::int64_t{1} << 40)) raise(Errc::OutOfRange, "D is too large: " + std::to_string(D));
  if (!is_squarefree(D)) raise(Errc::NotSquarefree, "D=" + std::to_string(D) + " has a square factor");
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<const Field>> registry;
  std::lock_guard lock(mu);
  auto& slot = registry[D];
  if (!slot) slot.reset(new Field(D));
  return *slot;
}

namespace detail {

// Exact sign of x + y*sqrt(disc) for integers x, y and non-square disc > 0.
inline int surd_sign_int(const BigInt& x, const BigInt& y, std::int64_t disc) {
  int sx = x.sign();
  int sy = y.sign();
  if (sx >= 0 && sy >= 0) return (sx | sy) ? 1 : 0;
  if (sx <= 0 && sy <= 0) return -1;
  // mixed signs: the term with the larger square wins
  BigInt lhs = x * x;
  BigInt rhs = y * y * disc;
  if (lhs == rhs) return 0;
  return (lhs > rhs) ? sx : sy;
}

inline int surd_sign_i128(i128 x, i128 y, std::int64_t disc) {
  if (x >= 0 && y >= 0) return (x != 0 || y != 0) ? 1 : 0;
  if (x <= 0 && y <= 0) return -1;
  i128 lhs = x * x;
  i128 rhs = y * y * disc;
  if (lhs == rhs) return 0;
  return (lhs > rhs) ? (x > 0 ? 1 : -1) : (y > 0 ? 1 : -1);
}

inline void check_same(const Field* lhs, const Field* rhs) {
  if (lhs != rhs) {
    raise(Errc::CtxMismatch, "elements of Q(sqrt " + std::to_string(lhs->D()) + ") and Q(sqrt " +
                                 std::to_string(rhs->D()) + ") cannot be combined");
  }
}

}  // namespace detail

/// x + y*sqrt(disc) with rational coordinates.
struct SurdExpr {
  Rational x;
  Rational y;
  const Field* field = nullptr;
};

inline int surd_sign(const SurdExpr& e) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  // Scale both coordinates by the (positive) product of denominators.
  BigInt dx = denominator(e.x);
  BigInt dy = denominator(e.y);
  BigInt x = numerator(e.x) * dy;
  BigInt y = numerator(e.y) * dx;
  return detail::surd_sign_int(x, y, e.field->disc());
}

inline SurdExpr operator+(const SurdExpr& l, const SurdExpr& r) {
  detail::check_same(l.field, r.field);
  return {l.x + r.x, l.y + r.y, l.field};
}
inline SurdExpr operator-(const SurdExpr& l, const SurdExpr& r) {
  detail::check_same(l.field, r.field);
  return {l.x - r.x, l.y - r.y, l.field};
}
inline SurdExpr operator-(const SurdExpr& e) { return {-e.x, -e.y, e.field}; }
inline SurdExpr operator*(const SurdExpr& l, const SurdExpr& r) {
  detail::check_same(l.field, r.field);
  return {l.x * r.x + l.y * r.y * l.field->disc(), l.x * r.y + l.y * r.x, l.field};
}

inline SurdExpr sqrt_disc(const Field& k) { return {Rational(0), Rational(1), &k}; }
inline SurdExpr surd_const(const Field& k, const Rational& value) { return {value, Rational(0), &k}; }

/// An element a + b*w of O_K.
class QuadInt {
 public:
  QuadInt(const Field& field, BigInt a, BigInt b) : a_(std::move(a)), b_(std::move(b)), field_(&field) {}
  QuadInt(const Field& field, std::int64_t a) : a_(a), b_(0), field_(&field) {}

  const BigInt& a() const noexcept { return a_; }
  const BigInt& b() const noexcept { return b_; }
  const Field& field() const noexcept { return *field_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  friend bool operator==(const QuadInt& l, const QuadInt& r) {
    return l.field_ == r.field_ && l.a_ == r.a_ && l.b_ == r.b_;
  }

  QuadInt& operator+=(const QuadInt& r) {
    detail::check_same(field_, r.field_);
    a_ += r.a_;
    b_ += r.b_;
    return *this;
  }
  QuadInt& operator-=(const QuadInt& r) {
    detail::check_same(field_, r.field_);
    a_ -= r.a_;
    b_ -= r.b_;
    return *this;
  }
  friend QuadInt operator+(QuadInt l, const QuadInt& r) { return l += r; }
  friend QuadInt operator-(QuadInt l, const QuadInt& r) { return l -= r; }
  friend QuadInt operator-(const QuadInt& x) { return QuadInt(*x.field_, -x.a_, -x.b_); }
  friend QuadInt operator*(const BigInt& k, const QuadInt& x) { return QuadInt(*x.field_, k * x.a_, k * x.b_); }
  friend QuadInt operator*(std::int64_t k, const QuadInt& x) { return BigInt(k) * x; }

  // w^2 = t*w - n
  friend QuadInt operator*(const QuadInt& l, const QuadInt& r) {
    detail::check_same(l.field_, r.field_);
    const Field& k = *l.field_;
    BigInt bb = l.b_ * r.b_;
    return QuadInt(k, l.a_ * r.a_ - k.nm_omega() * bb, l.a_ * r.b_ + r.a_ * l.b_ + k.tr_omega() * bb);
  }

  /// Lexicographic order on coordinates; only for use as a container key.
  friend bool coord_less(const QuadInt& l, const QuadInt& r) {
    if (l.a_ != r.a_) return l.a_ < r.a_;
    return l.b_ < r.b_;
  }

 private:
  BigInt a_;
  BigInt b_;
  const Field* field_;
};

struct CoordLess {
  bool operator()(const QuadInt& l, const QuadInt& r) const { return coord_less(l, r); }
};

inline QuadInt conjugate(const QuadInt& x) {
  return QuadInt(x.field(), x.a() + x.b() * x.field().tr_omega(), -x.b());
}

inline BigInt norm(const QuadInt& x) {
  const Field& k = x.field();
  return x.a() * x.a() + x.a() * x.b() * k.tr_omega() + x.b() * x.b() * k.nm_omega();
}

inline BigInt trace(const QuadInt& x) { return 2 * x.a() + x.b() * x.field().tr_omega(); }

/// Real value of the first embedding as an exact surd: (2a + bt)/2 + (b/2) sqrt(disc).
inline SurdExpr to_surd(const QuadInt& x) {
  return {Rational(trace(x), 2), Rational(x.b(), 2), &x.field()};
}

namespace detail {
// Sign of the first embedding; 2*(a + b*w) = (2a + bt) + b*sqrt(disc).
inline int embedding_sign(const QuadInt& x) {
  return surd_sign_int(trace(x), x.b(), x.field().disc());
}
}  // namespace detail

inline bool is_totally_positive(const QuadInt& x) {
  return detail::embedding_sign(x) > 0 && detail::embedding_sign(conjugate(x)) > 0;
}

/// Exact comparison of the first real embeddings.
inline std::strong_ordering cmp_real(const QuadInt& l, const QuadInt& r) {
  detail::check_same(&l.field(), &r.field());
  int s = detail::embedding_sign(l - r);
  return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

/// l > r in the totally positive order.
inline bool succ(const QuadInt& l, const QuadInt& r) {
  detail::check_same(&l.field(), &r.field());
  return is_totally_positive(l - r);
}

inline bool succeq(const QuadInt& l, const QuadInt& r) {
  detail::check_same(&l.field(), &r.field());
  return l == r || is_totally_positive(l - r);
}

/// Non-authoritative floating point value of the first embedding (for reports and screens).
inline long double approx(const QuadInt& x) {
  const Field& k = x.field();
  long double w = (static_cast<long double>(k.tr_omega()) + std::sqrt(static_cast<long double>(k.disc()))) / 2;
  return static_cast<long double>(x.a()) + static_cast<long double>(x.b()) * w;
}

inline std::string to_string(const QuadInt& x) {
  std::string s = x.a().str();
  if (x.b().sign() >= 0) s += "+";
  s += x.b().str();
  s += "w";
  return s;
}

}  // namespace quadpart
