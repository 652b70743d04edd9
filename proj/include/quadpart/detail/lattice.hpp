#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "quadpart/detail/bigint.hpp"
#include "quadpart/error.hpp"

namespace quadpart::detail {

/// a + b*w with machine-word coordinates.
struct Pt {
  std::int64_t a = 0;
  std::int64_t b = 0;
  friend bool operator==(const Pt&, const Pt&) = default;
  friend Pt operator+(Pt l, Pt r) { return {l.a + r.a, l.b + r.b}; }
  friend Pt operator-(Pt l, Pt r) { return {l.a - r.a, l.b - r.b}; }
};

// Coordinates c admitted to machine-word arithmetic satisfy 16 c^2 (disc + 4) < 2^124, which keeps
// every intermediate of the surd comparisons below inside 128 bits.
inline bool coord_fits(std::int64_t c, std::int64_t disc) {
  if (c > (std::int64_t{1} << 58) || c < -(std::int64_t{1} << 58)) return false;
  i128 cc = static_cast<i128>(c) * c;
  return cc * 16 < (static_cast<i128>(1) << 124) / (disc + 4);
}

// floor((p + q*sqrt(disc))/2); disc is not a square.
inline std::int64_t floor_half_surd(std::int64_t p, std::int64_t q, std::int64_t disc) {
  std::int64_t fq = 0;
  if (q != 0) {
    std::int64_t root = isqrt128(static_cast<i128>(q) * q * disc);
    fq = q > 0 ? root : -root - 1;
  }
  return floor_div(p + fq, 2);
}

// x succeq 0 in the totally positive order (x = 0 allowed).
inline bool pt_nonneg(Pt x, std::int64_t t, std::int64_t disc) {
  i128 s = 2 * static_cast<i128>(x.a) + static_cast<i128>(x.b) * t;
  if (s < 0) return false;
  return s * s >= static_cast<i128>(x.b) * x.b * disc;
}

/// Upper constraint "first embedding <= (p1 + q1 sqrt disc)/2 and second embedding <= (p2 + q2 sqrt disc)/2".
/// For a top T = A + B*w this is (p1, q1, p2, q2) = (2A + Bt, B, 2A + Bt, -B).
struct Ceiling {
  std::int64_t p1, q1, p2, q2;
};

inline Ceiling ceiling_of(Pt top, std::int64_t t) {
  std::int64_t p = 2 * top.a + top.b * t;
  return {p, top.b, p, -top.b};
}

/// Finite set of points {0} U {x >> 0 : x below at least one ceiling}, stored row by row (rows indexed by b).
/// Every region is closed under x -> x - y for 0 << y <= x.
class Region {
 public:
  Region(std::int64_t t, std::int64_t disc, std::vector<Ceiling> ceilings, std::size_t max_points)
      : t_(t), disc_(disc), ceilings_(std::move(ceilings)) {
    // b*sqrt(disc) is the difference of the two embeddings, so -E2 < b*sqrt(disc) < E1.
    const long double root = std::sqrt(static_cast<long double>(disc));
    long double reach_up = 0, reach_down = 0;
    for (const Ceiling& c : ceilings_) {
      reach_up = std::max(reach_up, (c.p1 + c.q1 * root) / (2 * root));
      reach_down = std::max(reach_down, (c.p2 + c.q2 * root) / (2 * root));
    }
    std::int64_t b_lo = -static_cast<std::int64_t>(std::floor(reach_down)) - 1;
    std::int64_t b_hi = static_cast<std::int64_t>(std::floor(reach_up)) + 1;
    std::size_t total = 0;
    for (std::int64_t b = b_lo; b <= b_hi; ++b) {
      auto row = bounds(b);
      if (row.first > row.second) row.second = row.first - 1;
      total += static_cast<std::size_t>(row.second - row.first + 1);
      if (total > max_points || rows_.size() > 4 * max_points)
        raise(Errc::TooLarge, "lattice region exceeds " + std::to_string(max_points) + " points");
      rows_.push_back(row);
    }
    // trim empty rows at both ends (row 0 always holds the origin)
    std::size_t first = 0, last = rows_.size();
    while (first < last && rows_[first].first > rows_[first].second) ++first;
    while (last > first && rows_[last - 1].first > rows_[last - 1].second) --last;
    bmin_ = b_lo + static_cast<std::int64_t>(first);
    bmax_ = b_lo + static_cast<std::int64_t>(last) - 1;
    rows_ = std::vector<std::pair<std::int64_t, std::int64_t>>(rows_.begin() + static_cast<std::ptrdiff_t>(first),
                                                              rows_.begin() + static_cast<std::ptrdiff_t>(last));
    offsets_.reserve(rows_.size());
    std::size_t off = 0;
    for (auto [lo, hi] : rows_) {
      offsets_.push_back(off);
      off += static_cast<std::size_t>(hi - lo + 1);
    }
    size_ = off;
  }

  std::int64_t t() const noexcept { return t_; }
  std::int64_t disc() const noexcept { return disc_; }
  std::int64_t bmin() const noexcept { return bmin_; }
  std::int64_t bmax() const noexcept { return bmax_; }
  std::size_t size() const noexcept { return size_; }
  std::int64_t lo(std::int64_t b) const { return rows_[static_cast<std::size_t>(b - bmin_)].first; }
  std::int64_t hi(std::int64_t b) const { return rows_[static_cast<std::size_t>(b - bmin_)].second; }
  std::size_t row_offset(std::int64_t b) const { return offsets_[static_cast<std::size_t>(b - bmin_)]; }

  bool contains(Pt x) const { return x.b >= bmin_ && x.b <= bmax_ && x.a >= lo(x.b) && x.a <= hi(x.b); }
  std::size_t index(Pt x) const { return row_offset(x.b) + static_cast<std::size_t>(x.a - lo(x.b)); }

  template <class F>
  void for_each(F&& f) const {
    for (std::int64_t b = bmin_; b <= bmax_; ++b)
      for (std::int64_t a = lo(b); a <= hi(b); ++a) f(Pt{a, b});
  }

 private:
  std::pair<std::int64_t, std::int64_t> bounds(std::int64_t b) const {
    // x >> 0 means 2a + bt > |b| sqrt(disc); row 0 also holds the origin.
    std::int64_t lo = b == 0 ? 0 : floor_half_surd(-b * t_, b < 0 ? -b : b, disc_) + 1;
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (const Ceiling& c : ceilings_) {
      std::int64_t h1 = floor_half_surd(c.p1 - b * t_, c.q1 - b, disc_);
      std::int64_t h2 = floor_half_surd(c.p2 - b * t_, c.q2 + b, disc_);
      hi = std::max(hi, std::min(h1, h2));
    }
    return {lo, hi};
  }

  std::int64_t t_;
  std::int64_t disc_;
  std::vector<Ceiling> ceilings_;
  std::int64_t bmin_ = 0;
  std::int64_t bmax_ = -1;
  std::vector<std::pair<std::int64_t, std::int64_t>> rows_;
  std::vector<std::size_t> offsets_;
  std::size_t size_ = 0;
};

/// Saturating counter: values are clamped to `limit`.
struct SatAdd {
  std::uint64_t limit;
  void operator()(std::uint64_t& acc, std::uint64_t x) const {
    acc = (x >= limit - acc) ? limit : acc + x;
  }
};

struct BigAdd {
  void operator()(BigInt& acc, const BigInt& x) const { acc += x; }
};

/// Unbounded coin change over a region: after the call, ways[x] counts the multisets of
/// the given parts summing to x, for every x in the region (ways starts as the indicator of 0).
template <class C, class Add>
void count_partitions(const Region& reg, const std::vector<Pt>& parts, std::vector<C>& ways, Add add) {
  ways.assign(reg.size(), C(0));
  ways[reg.index(Pt{0, 0})] = C(1);
  for (Pt p : parts) {
    auto sweep_row = [&](std::int64_t b) {
      std::int64_t sb = b - p.b;
      if (sb < reg.bmin() || sb > reg.bmax()) return;
      std::int64_t a0 = std::max(reg.lo(b), reg.lo(sb) + p.a);
      std::int64_t a1 = std::min(reg.hi(b), reg.hi(sb) + p.a);
      if (a0 > a1) return;
      C* dst = ways.data() + reg.row_offset(b) + (a0 - reg.lo(b));
      const C* src = ways.data() + reg.row_offset(sb) + (a0 - p.a - reg.lo(sb));
      for (std::int64_t n = a1 - a0 + 1, k = 0; k < n; ++k) add(dst[k], src[k]);
    };
    if (p.b >= 0) {
      for (std::int64_t b = reg.bmin(); b <= reg.bmax(); ++b) sweep_row(b);
    } else {
      for (std::int64_t b = reg.bmax(); b >= reg.bmin(); --b) sweep_row(b);
    }
  }
}

}  // namespace quadpart::detail
