#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "quadpart/cfrac.hpp"
#include "quadpart/detail/bigint.hpp"
#include "quadpart/detail/lattice.hpp"
#include "quadpart/error.hpp"
#include "quadpart/indec.hpp"
#include "quadpart/qfield.hpp"

namespace quadpart {

/// Either an exact count or a lower bound.
struct CountResult {
  enum class Kind { Exact, AtLeast };
  Kind kind = Kind::Exact;
  BigInt value = 1;

  static CountResult exact(BigInt v) { return {Kind::Exact, std::move(v)}; }
  static CountResult at_least(BigInt v) { return {Kind::AtLeast, std::move(v)}; }

  bool is_exact() const noexcept { return kind == Kind::Exact; }
  bool is_exactly(std::int64_t n) const { return kind == Kind::Exact && value == n; }
  /// True when the true count is known to differ from n.
  bool excludes(std::int64_t n) const { return kind == Kind::Exact ? value != n : value > n; }

  friend bool operator==(const CountResult&, const CountResult&) = default;
};

inline std::string to_string(const CountResult& c) {
  return (c.is_exact() ? "" : ">=") + c.value.str();
}

/// A partition with parts sorted by decreasing real value.
struct Partition {
  std::vector<QuadInt> parts;
};

namespace detail {

inline constexpr std::size_t kMaxRegionPoints = 400000;
inline constexpr std::uint64_t kUncapped = std::uint64_t{1} << 62;

inline std::optional<Pt> to_pt(const QuadInt& x) {
  auto a = to_int64(x.a());
  auto b = to_int64(x.b());
  const std::int64_t disc = x.field().disc();
  if (!a || !b || !coord_fits(*a, disc) || !coord_fits(*b, disc)) return std::nullopt;
  return Pt{*a, *b};
}

inline Pt require_pt(const QuadInt& x) {
  auto p = to_pt(x);
  if (!p) raise(Errc::TooLarge, "coordinates of " + to_string(x) + " exceed the lattice enumeration range");
  return *p;
}

inline QuadInt from_pt(const Field& k, Pt p) { return QuadInt(k, BigInt(p.a), BigInt(p.b)); }

// Exact comparison of first embeddings of two machine-word points.
inline int cmp_pt_real(Pt x, Pt y, std::int64_t t, std::int64_t disc) {
  Pt d = x - y;
  return surd_sign_i128(2 * static_cast<i128>(d.a) + static_cast<i128>(d.b) * t, d.b, disc);
}

inline QuadInt unit_power(const QuadInt& unit, std::int64_t n) {
  QuadInt out(unit.field(), 1);
  for (std::int64_t k = 0; k < n; ++k) out = out * unit;
  return out;
}

/// eta * alpha for the power eta of eps+ that brings both embeddings of alpha
/// closest together; returns (eta * alpha, eta^-1).
inline std::pair<QuadInt, QuadInt> balance(const BetaIndexMap& map, const QuadInt& alpha) {
  const QuadInt& ep = map.unit_data().eps_plus;
  long double l1 = std::log(approx(alpha));
  long double l2 = std::log(approx(conjugate(alpha)));
  long double le = std::log(approx(ep));
  auto q = static_cast<std::int64_t>(std::llround((l1 - l2) / (2 * le)));
  if (q == 0) return {alpha, QuadInt(alpha.field(), 1)};
  QuadInt down = conjugate(ep);
  if (q > 0) return {unit_power(down, q) * alpha, unit_power(ep, q)};
  return {unit_power(ep, -q) * alpha, unit_power(down, -q)};
}

inline void require_tp_or_zero(const BetaIndexMap& map, const QuadInt& alpha) {
  check_same(&map.field(), &alpha.field());
  if (!alpha.is_zero() && !is_totally_positive(alpha))
    raise(Errc::NotTotallyPositive, to_string(alpha) + " is not totally positive");
}

inline std::uint64_t limit_for(std::optional<std::int64_t> cap) {
  if (!cap) return kUncapped;
  if (*cap < 0) raise(Errc::OutOfRange, "cap must be non-negative");
  return static_cast<std::uint64_t>(*cap) + 1;
}

inline CountResult make_count(std::uint64_t v, std::optional<std::int64_t> cap) {
  if (cap && v > static_cast<std::uint64_t>(*cap)) return CountResult::at_least(BigInt(*cap + 1));
  return CountResult::exact(BigInt(v));
}

// Nonzero region points sorted by decreasing real value.
inline std::vector<Pt> region_parts(const Region& reg) {
  std::vector<Pt> parts;
  parts.reserve(reg.size());
  reg.for_each([&](Pt x) {
    if (x != Pt{0, 0}) parts.push_back(x);
  });
  std::sort(parts.begin(), parts.end(),
            [&](Pt x, Pt y) { return cmp_pt_real(x, y, reg.t(), reg.disc()) > 0; });
  return parts;
}

inline Region downset_region(const Field& k, Pt top, std::size_t max_points = kMaxRegionPoints) {
  return Region(k.tr_omega(), k.disc(), {ceiling_of(top, k.tr_omega())}, max_points);
}

// Multiset counting over a part list with memoized descent on (remainder, first allowed part).
class DescentCounter {
 public:
  DescentCounter(const Field& k, std::vector<Pt> parts, std::uint64_t limit)
      : t_(k.tr_omega()), disc_(k.disc()), parts_(std::move(parts)), limit_(limit) {}

  std::uint64_t count(Pt rem, std::size_t idx) {
    if (rem == Pt{0, 0}) return 1;
    Key key{rem.a, rem.b, idx};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::uint64_t total = 0;
    SatAdd add{limit_};
    for (std::size_t k = idx; k < parts_.size() && total < limit_; ++k) {
      Pt next = rem - parts_[k];
      if (!pt_nonneg(next, t_, disc_)) continue;
      add(total, count(next, k));
    }
    memo_.emplace(key, total);
    return total;
  }

 private:
  struct Key {
    std::int64_t a, b;
    std::size_t idx;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = static_cast<std::uint64_t>(k.a) * 0x9E3779B97F4A7C15ULL;
      h ^= static_cast<std::uint64_t>(k.b) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
      h ^= static_cast<std::uint64_t>(k.idx) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  std::int64_t t_;
  std::int64_t disc_;
  std::vector<Pt> parts_;
  std::uint64_t limit_;
  std::unordered_map<Key, std::uint64_t, KeyHash> memo_;
};

// Indecomposables below alpha (machine words), by decreasing real value.
inline std::vector<Pt> indec_parts(const BetaIndexMap& map, const QuadInt& alpha) {
  auto list = indecomposables_leq(map, alpha);
  std::vector<Pt> parts;
  for (auto it = list.rbegin(); it != list.rend(); ++it) parts.push_back(require_pt(it->second));
  return parts;
}

// Machine-word beta_j with cached values, for counting many small elements quickly.
class IndecScanner {
 public:
  explicit IndecScanner(const BetaIndexMap& map) : map_(map), t_(map.field().tr_omega()), disc_(map.field().disc()) {}

  Pt beta(std::int64_t j) {
    std::size_t n = static_cast<std::size_t>(j < 0 ? -j : j);
    while (cache_.size() <= n) cache_.push_back(require_pt(map_.beta(static_cast<std::int64_t>(cache_.size()))));
    Pt p = cache_[n];
    return j < 0 ? Pt{p.a + p.b * t_, -p.b} : p;
  }

  /// Indecomposables below alpha by decreasing real value; j is any index with beta_j <= alpha.
  std::vector<Pt> below(Pt alpha, std::int64_t j) {
    Pt alpha_c{alpha.a + alpha.b * t_, -alpha.b};
    std::vector<Pt> out;
    for (std::int64_t k = j + 1;; ++k) {
      Pt b = beta(k);
      if (cmp_pt_real(b, alpha, t_, disc_) > 0) break;
      if (pt_nonneg(alpha - b, t_, disc_)) out.push_back(b);
    }
    std::reverse(out.begin(), out.end());
    for (std::int64_t k = j;; --k) {
      Pt b = beta(k);
      Pt bc{b.a + b.b * t_, -b.b};
      if (cmp_pt_real(bc, alpha_c, t_, disc_) > 0) break;
      if (pt_nonneg(alpha - b, t_, disc_)) out.push_back(b);
    }
    return out;
  }

  /// p_K(alpha|I), saturated at limit.
  std::uint64_t pk_indec(Pt alpha, std::int64_t j, std::uint64_t limit) {
    DescentCounter counter(map_.field(), below(alpha, j), limit);
    return counter.count(alpha, 0);
  }

 private:
  const BetaIndexMap& map_;
  std::int64_t t_;
  std::int64_t disc_;
  std::vector<Pt> cache_;
};

}  // namespace detail

/// All totally positive gamma with gamma <= alpha, by decreasing real value.
inline std::vector<QuadInt> parts_leq(const BetaIndexMap& map, const QuadInt& alpha) {
  detail::require_tp_or_zero(map, alpha);
  if (alpha.is_zero()) raise(Errc::NotTotallyPositive, "0 is not totally positive");
  auto [bal, back] = detail::balance(map, alpha);
  detail::Region reg = detail::downset_region(map.field(), detail::require_pt(bal));
  std::vector<QuadInt> out;
  for (detail::Pt p : detail::region_parts(reg)) out.push_back(back * detail::from_pt(map.field(), p));
  return out;
}

/// p_K(alpha): number of partitions of alpha into totally positive parts. With a cap, counts
/// above the cap are reported as AtLeast(cap + 1).
inline CountResult pk(const BetaIndexMap& map, const QuadInt& alpha, std::optional<std::int64_t> cap = std::nullopt) {
  detail::require_tp_or_zero(map, alpha);
  std::uint64_t limit = detail::limit_for(cap);
  if (alpha.is_zero()) return detail::make_count(1, cap);
  detail::Pt top = detail::require_pt(detail::balance(map, alpha).first);
  detail::Region reg = detail::downset_region(map.field(), top);
  std::vector<detail::Pt> parts = detail::region_parts(reg);
  std::vector<std::uint64_t> ways;
  detail::count_partitions(reg, parts, ways, detail::SatAdd{limit});
  std::uint64_t v = ways[reg.index(top)];
  if (!cap && v >= limit) {
    std::vector<BigInt> big;
    detail::count_partitions(reg, parts, big, detail::BigAdd{});
    return CountResult::exact(big[reg.index(top)]);
  }
  return detail::make_count(v, cap);
}

/// p_K(alpha | I): partitions of alpha into indecomposable parts.
inline CountResult pk_indec(const BetaIndexMap& map, const QuadInt& alpha,
                            std::optional<std::int64_t> cap = std::nullopt) {
  detail::require_tp_or_zero(map, alpha);
  std::uint64_t limit = detail::limit_for(cap);
  if (alpha.is_zero()) return detail::make_count(1, cap);
  QuadInt bal = detail::balance(map, alpha).first;
  detail::Pt top = detail::require_pt(bal);
  detail::DescentCounter counter(map.field(), detail::indec_parts(map, bal), limit);
  std::uint64_t v = counter.count(top, 0);
  if (!cap && v >= limit) raise(Errc::Overflow, "p_K(alpha|I) exceeds 2^62 for " + to_string(alpha));
  return detail::make_count(v, cap);
}

/// Explicit list of partitions (all parts, or indecomposable parts only).
inline std::vector<Partition> list_partitions(const BetaIndexMap& map, const QuadInt& alpha, bool indec_only,
                                              std::size_t max_count = 100000) {
  detail::require_tp_or_zero(map, alpha);
  const Field& k = map.field();
  std::vector<Partition> out;
  if (alpha.is_zero()) {
    out.push_back({});
    return out;
  }
  auto [bal, back] = detail::balance(map, alpha);
  detail::Pt top = detail::require_pt(bal);
  std::vector<detail::Pt> parts = indec_only ? detail::indec_parts(map, bal)
                                             : detail::region_parts(detail::downset_region(k, top));
  std::vector<std::size_t> chosen;
  std::function<void(detail::Pt, std::size_t)> walk = [&](detail::Pt rem, std::size_t idx) {
    if (rem == detail::Pt{0, 0}) {
      if (out.size() >= max_count) raise(Errc::TooLarge, "more than " + std::to_string(max_count) + " partitions");
      Partition p;
      for (std::size_t c : chosen) p.parts.push_back(back * detail::from_pt(k, parts[c]));
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t c = idx; c < parts.size(); ++c) {
      detail::Pt next = rem - parts[c];
      if (!detail::pt_nonneg(next, k.tr_omega(), k.disc())) continue;
      chosen.push_back(c);
      walk(next, c);
      chosen.pop_back();
    }
  };
  walk(top, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms

enum class EfKind { Double, Pair };

/// Counts of 2*alpha_{i,r} (Double) and alpha_{i,r} + alpha_{i,r+1} (Pair), with all parts or
/// indecomposable parts only.
inline std::int64_t pk_ef_closed(const BetaIndexMap& map, std::int64_t i, std::int64_t r, EfKind kind,
                                 bool restricted) {
  if (i < -1 || detail::mod_floor(i, 2) != 1) raise(Errc::BadIndex, "i must be odd and >= -1");
  std::int64_t u = map.cf().u(i + 2);
  if (r < 0 || r > u - 1) raise(Errc::BadIndex, "r must lie in [0, u_{i+2} - 1]");
  std::int64_t extra = restricted ? 1 : 2;
  if (kind == EfKind::Double) return std::min(r + extra, u - r + extra);
  return std::min(r + extra, u - r + extra - 1);
}

/// Largest k0 with v_k = 2 for j - k0 <= k <= j + k0 + t; nullopt when v_j > 2 or v_{j+t} > 2.
inline std::optional<std::int64_t> k0_ef(const BetaIndexMap& map, std::int64_t j, std::int64_t t) {
  if (t != 0 && t != 1) raise(Errc::BadIndex, "t must be 0 or 1");
  if (map.v(j) > 2 || map.v(j + t) > 2) return std::nullopt;
  std::int64_t k0 = 0;
  while (map.v(j - k0 - 1) == 2 && map.v(j + k0 + 1 + t) == 2) ++k0;
  QuadInt sum = map.beta(j) + map.beta(j + t);
  for (std::int64_t k = 1; k <= k0 + 1; ++k) {
    if (map.beta(j - k) + map.beta(j + k + t) != sum)
      raise(Errc::InternalError, "chain identity fails at j=" + std::to_string(j) + ", k=" + std::to_string(k));
  }
  return k0;
}

namespace detail {
struct LocalV {
  std::int64_t vm1, v0, v1, v2;  // v_{j-1}, v_j, v_{j+1}, v_{j+2}
};
inline LocalV local_v(const BetaIndexMap& map, std::int64_t j) {
  return {map.v(j - 1), map.v(j), map.v(j + 1), map.v(j + 2)};
}
}  // namespace detail

/// p_K(alpha|I) = 1, decided from the canonical decomposition.
inline bool is_unique_decomp(const BetaIndexMap& map, const QuadInt& alpha) {
  CanonicalDecomp d = canonical_decomp(map, alpha);
  std::int64_t vj = map.v(d.j), vj1 = map.v(d.j + 1);
  return d.e >= 1 && d.e <= vj - 1 && d.f >= 0 && d.f <= vj1 - 1 && !(d.e == vj - 1 && d.f == vj1 - 1);
}

/// p_K(alpha|I) = 2, decided from the canonical decomposition.
inline bool is_pkI_2(const BetaIndexMap& map, const QuadInt& alpha) {
  CanonicalDecomp d = canonical_decomp(map, alpha);
  auto [vm1, v0, v1, v2] = detail::local_v(map, d.j);
  const BigInt& e = d.e;
  const BigInt& f = d.f;
  bool c1 = e >= v0 && e <= 2 * v0 - 1 && f >= 0 && f <= v1 - 2 && !(e == 2 * v0 - 1 && f == v1 - 2) &&
            !(vm1 == 2 && e == 2 * v0 - 1) && !(vm1 == 2 && e == 2 * v0 - 2 && f == v1 - 2);
  bool c2 = e >= 1 && e <= v0 - 2 && f >= v1 && f <= 2 * v1 - 1 && !(e == v0 - 2 && f == 2 * v1 - 1) &&
            !(f == 2 * v1 - 1 && v2 == 2) && !(e == v0 - 2 && f == 2 * v1 - 2 && v2 == 2);
  bool c3 = e == v0 - 1 && f == v1 - 1 && !(vm1 == 2 && v0 == 2 && v1 == 2 && v2 == 2);
  return c1 || c2 || c3;
}

namespace detail {

// Collects e*alpha_{i,r} + f*alpha_{i,r+1} over inclusive ranges of e and f.
class Emitter {
 public:
  explicit Emitter(const BetaIndexMap& map) : map_(map) {}

  void add(std::int64_t i, std::int64_t r, std::int64_t e0, std::int64_t e1, std::int64_t f0, std::int64_t f1) {
    if (r < 0 || r + 1 > map_.cf().u(i + 2)) return;
    QuadInt x = semiconvergent(map_.table(), i, r);
    QuadInt y = semiconvergent(map_.table(), i, r + 1);
    for (std::int64_t e = std::max<std::int64_t>(e0, 1); e <= e1; ++e)
      for (std::int64_t f = std::max<std::int64_t>(f0, 0); f <= f1; ++f) insert(e * x + f * y);
  }
  void add_one(const QuadInt& x) { insert(x); }

  std::vector<QuadInt> finish() const {
    std::vector<QuadInt> out;
    for (const QuadInt& x : seen_) {
      out.push_back(x);
      QuadInt c = conjugate(x);
      if (!seen_.count(c)) out.push_back(c);
    }
    std::sort(out.begin(), out.end(), [](const QuadInt& l, const QuadInt& r) { return cmp_real(l, r) < 0; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  void insert(const QuadInt& x) { seen_.insert(x); }

  const BetaIndexMap& map_;
  std::set<QuadInt, CoordLess> seen_;
};

inline void require_odd_imax(std::int64_t i_max) {
  if (i_max < -1 || mod_floor(i_max, 2) != 1) raise(Errc::BadIndex, "i_max must be odd and >= -1");
}

}  // namespace detail

/// Every alpha with p_K(alpha|I) = 2 built from alpha_{i,r} with -1 <= i <= i_max, and their conjugates.
inline std::vector<QuadInt> gen_pkI2(const BetaIndexMap& map, std::int64_t i_max) {
  detail::require_odd_imax(i_max);
  const CFData& cf = map.cf();
  detail::Emitter em(map);
  for (std::int64_t i = -1; i <= i_max; i += 2) {
    const std::int64_t u1 = cf.u(i + 1), u2 = cf.u(i + 2), u3 = cf.u(i + 3), u4 = cf.u(i + 4);
    const std::int64_t ua = cf.u(i < 0 ? -i : i);
    // condition (1)
    if (u2 >= 2) em.add(i, 0, u1 + 2, 2 * u1 + 1, 0, 0);
    if (ua == 1 && u2 >= 2) em.add(i, 0, 2 * u1 + 2, 2 * u1 + 2, 0, 0);
    if (ua >= 2 && u2 == 1) em.add(i, 0, u1 + 2, 2 * u1 + 1, 0, u3);
    if (ua >= 2 && u2 == 1) em.add(i, 0, 2 * u1 + 2, 2 * u1 + 2, 0, u3 - 1);
    if (ua == 1 && u2 == 1) em.add(i, 0, u1 + 2, 2 * u1 + 2, 0, u3);
    if (ua == 1 && u2 == 1) em.add(i, 0, 2 * u1 + 3, 2 * u1 + 3, 0, u3 - 1);
    if (u2 >= 3) em.add(i, 1, 2, 2, 0, 0);
    if (u2 == 2) em.add(i, 1, 2, 2, 0, u3);
    if (u2 == 2) em.add(i, 1, 3, 3, 0, u3 - 1);
    if (u2 >= 3) em.add(i, u2 - 1, 2, 2, 0, u3 - 1);
    // condition (2)
    if (u1 >= 2 && u2 >= 3) em.add(i, 0, 1, u1 - 1, 2, 2);
    if (u1 >= 2 && u2 == 2) em.add(i, 0, 1, u1 - 1, 2, 3);
    if (u2 == 2) em.add(i, 0, u1, u1, 2, 2);
    if (u1 >= 2 && u2 == 1 && u4 >= 2) em.add(i, 0, 1, u1 - 1, u3 + 2, 2 * u3 + 2);
    if (u2 == 1 && u4 >= 2) em.add(i, 0, u1, u1, u3 + 2, 2 * u3 + 1);
    if (u1 >= 2 && u2 == 1 && u4 == 1) em.add(i, 0, 1, u1 - 1, u3 + 2, 2 * u3 + 3);
    if (u2 == 1 && u4 == 1) em.add(i, 0, u1, u1, u3 + 2, 2 * u3 + 2);
    // condition (3)
    if (u2 >= 2) em.add(i, 0, u1 + 1, u1 + 1, 1, 1);
    if (u2 == 1) em.add(i, 0, u1 + 1, u1 + 1, u3 + 1, u3 + 1);
    if (u2 >= 3) em.add(i, 1, 1, 1, 1, 1);
    if (u2 == 2) em.add(i, 1, 1, 1, u3 + 1, u3 + 1);
    if (u2 >= 4) em.add(i, u2 - 2, 1, 1, 1, 1);
    if (u2 >= 3) em.add(i, u2 - 1, 1, 1, u3 + 1, u3 + 1);
  }
  return em.finish();
}

namespace detail {

inline CountResult p21_table(std::int64_t vm1, std::int64_t v0, std::int64_t v1) {
  if (v0 >= 3 && !(v0 == 3 && v1 == 2)) return CountResult::exact(4);
  if (v0 == 3 && v1 == 2) return CountResult::exact(5);
  // v0 == 2 from here on
  if (v1 >= 4) return CountResult::exact(6);
  if (v1 == 3) return CountResult::exact(vm1 > 2 ? 6 : 7);
  return CountResult::at_least(8);
}

}  // namespace detail

/// p_K(alpha) for small canonical coefficients, AtLeast(7) otherwise.
inline CountResult pk_closed_small(const BetaIndexMap& map, const QuadInt& alpha) {
  CanonicalDecomp d = canonical_decomp(map, alpha);
  auto e64 = detail::to_int64(d.e);
  auto f64 = detail::to_int64(d.f);
  if (!e64 || !f64 || *e64 + *f64 > 4 || (*e64 + *f64 == 4 && *e64 != 4))
    return CountResult::at_least(7);
  const std::int64_t e = *e64, f = *f64, j = d.j;
  auto [vm1, v0, v1, v2] = detail::local_v(map, j);
  if (e == 1 && f == 0) return CountResult::exact(1);
  if (e == 2 && f == 0) {
    BetaIndex idx = map.index_of(j < 0 ? -j : j);
    std::int64_t r = idx.r, u = map.cf().u(idx.i + 2);
    return CountResult::exact(std::min(r + 2, u - r + 2));
  }
  if (e == 1 && f == 1) {
    BetaIndex idx = map.index_of(j < 0 ? -j - 1 : j);
    std::int64_t r = idx.r, u = map.cf().u(idx.i + 2);
    return CountResult::exact(std::min(r + 2, u - r + 1));
  }
  if (e == 3 && f == 0) {
    if (v0 >= 4) return CountResult::exact(3);
    if (v0 == 3) return CountResult::exact(4);
    if (vm1 > 2 && v1 > 2) return CountResult::exact(6);
    return CountResult::at_least(8);
  }
  if (e == 4 && f == 0) {
    if (v0 >= 5) return CountResult::exact(5);
    if (v0 == 4) return CountResult::exact(6);
    if (v0 == 3) return CountResult::at_least(8);
    return CountResult::at_least(16);
  }
  if (e == 2 && f == 1) return detail::p21_table(vm1, v0, v1);
  // (1, 2) is the conjugate of a (2, 1) element
  return detail::p21_table(v2, v1, v0);
}

/// Every alpha with p_K(alpha) = 6 built from alpha_{i,r} with -1 <= i <= i_max, and their conjugates.
inline std::vector<QuadInt> gen_pk6(const BetaIndexMap& map, std::int64_t i_max) {
  detail::require_odd_imax(i_max);
  const CFData& cf = map.cf();
  const ConvergentTable& tab = map.table();
  detail::Emitter em(map);
  auto sc = [&](std::int64_t i, std::int64_t r) { return semiconvergent(tab, i, r); };
  for (std::int64_t i = -1; i <= i_max; i += 2) {
    const std::int64_t u1 = cf.u(i + 1), u2 = cf.u(i + 2), u3 = cf.u(i + 3);
    if (u2 >= 8) em.add_one(2 * sc(i, 4));
    if (u2 >= 9) em.add_one(2 * sc(i, u2 - 4));
    if (u2 >= 9) em.add_one(sc(i, 4) + sc(i, 5));
    if (u2 >= 10) em.add_one(sc(i, u2 - 5) + sc(i, u2 - 4));
    if (u2 == 2) em.add_one(3 * sc(i, 1));
    if (u1 == 2) em.add_one(4 * sc(i, 0));
    if ((u2 >= 2 && u3 >= 2) || (u2 == 2 && u3 == 1)) em.add_one(2 * sc(i, u2 - 1) + sc(i + 2, 0));
    if ((u1 >= 2 && u2 >= 2) || (u1 == 1 && u2 == 2)) em.add_one(sc(i, 0) + 2 * sc(i, 1));
  }
  return em.finish();
}

/// Some alpha in O_K^+ has exactly 6 partitions.
inline bool has_pk6(const CFData& cf) {
  const std::int64_t n = 2 * cf.s();
  for (std::int64_t i = 0; i <= n; ++i) {
    std::int64_t ui = cf.u(i);
    if (i % 2 == 1 && ui >= 8) return true;
    if (ui == 2) return true;
    if (ui >= 2 && cf.u(i + 1) >= 2) return true;
  }
  return false;
}

struct P6Suf {
  std::optional<QuadInt> alpha;    // absent for D = 5
  std::optional<std::int64_t> predicted;  // 6 or 9
};

/// The element (ceil(2 xi) + 2) + 2w with its predicted partition count.
inline P6Suf p6suf(const BetaIndexMap& map) {
  const Field& k = map.field();
  if (k.D() == 5) return {};
  // ceil(2 xi) = ceil(sqrt disc) - t
  std::int64_t c = k.isqrt_disc() + 1 - k.tr_omega();
  QuadInt alpha(k, BigInt(c + 2), BigInt(2));
  return {alpha, map.cf().u(1) >= 2 ? 6 : 9};
}

// ---------------------------------------------------------------------------
// Batch evaluation

/// p_K and p_K(.|I) for every point of a finite downward closed region, computed in one pass
/// each; counts are capped.
class PartitionTable {
 public:
  /// All alpha with both embeddings <= k*sqrt(disc).
  static PartitionTable box(const BetaIndexMap& map, std::int64_t k, std::int64_t cap) {
    std::vector<detail::Ceiling> c{{0, 2 * k, 0, 2 * k}};
    return PartitionTable(map, std::move(c), cap);
  }
  /// All alpha below at least one of the given tops.
  static PartitionTable below(const BetaIndexMap& map, const std::vector<QuadInt>& tops, std::int64_t cap) {
    std::vector<detail::Ceiling> c;
    for (const QuadInt& t : tops) c.push_back(detail::ceiling_of(detail::require_pt(t), map.field().tr_omega()));
    return PartitionTable(map, std::move(c), cap);
  }

  std::int64_t cap() const noexcept { return cap_; }
  const detail::Region& region() const noexcept { return reg_; }

  bool contains(const QuadInt& x) const {
    auto p = detail::to_pt(x);
    return p && reg_.contains(*p);
  }
  CountResult pk(const QuadInt& x) const { return lookup(full_, x); }
  CountResult pk_indec(const QuadInt& x) const { return lookup(indec_, x); }

  /// Totally positive points of the region.
  std::vector<QuadInt> points() const {
    std::vector<QuadInt> out;
    reg_.for_each([&](detail::Pt p) {
      if (p != detail::Pt{0, 0}) out.push_back(detail::from_pt(*field_, p));
    });
    return out;
  }

 private:
  PartitionTable(const BetaIndexMap& map, std::vector<detail::Ceiling> ceilings, std::int64_t cap)
      : field_(&map.field()),
        cap_(cap),
        reg_(map.field().tr_omega(), map.field().disc(), std::move(ceilings), 4 * detail::kMaxRegionPoints) {
    detail::SatAdd add{static_cast<std::uint64_t>(cap) + 1};
    detail::count_partitions(reg_, detail::region_parts(reg_), full_, add);
    detail::count_partitions(reg_, region_indecomposables(map), indec_, add);
  }

  std::vector<detail::Pt> region_indecomposables(const BetaIndexMap& map) const {
    std::vector<detail::Pt> out;
    const std::int64_t reach = std::max(reg_.bmax(), -reg_.bmin());
    auto keep = [&](const QuadInt& x) {
      auto p = detail::to_pt(x);
      if (p && reg_.contains(*p)) out.push_back(*p);
    };
    keep(map.beta(0));
    for (std::int64_t j = 1;; ++j) {
      QuadInt bj = map.beta(j);
      if (bj.b() > reach) break;
      keep(bj);
      keep(conjugate(bj));
    }
    return out;
  }

  CountResult lookup(const std::vector<std::uint64_t>& table, const QuadInt& x) const {
    detail::check_same(field_, &x.field());
    auto p = detail::to_pt(x);
    if (!p || !reg_.contains(*p)) raise(Errc::OutOfRange, to_string(x) + " lies outside the table");
    std::uint64_t v = table[reg_.index(*p)];
    return detail::make_count(v, cap_);
  }

  const Field* field_;
  std::int64_t cap_;
  detail::Region reg_;
  std::vector<std::uint64_t> full_;
  std::vector<std::uint64_t> indec_;
};

}  // namespace quadpart
