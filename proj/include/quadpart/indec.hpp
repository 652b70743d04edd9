#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "quadpart/cfrac.hpp"
#include "quadpart/detail/bigint.hpp"
#include "quadpart/error.hpp"
#include "quadpart/qfield.hpp"

namespace quadpart {

/// Position of beta_j (j >= 0) among the semiconvergents: beta_j = alpha_{i,r}.
struct BetaIndex {
  std::int64_t i;
  std::int64_t r;
  friend bool operator==(const BetaIndex&, const BetaIndex&) = default;
};

/// alpha = e*beta_j + f*beta_{j+1} with e >= 1, f >= 0.
struct CanonicalDecomp {
  std::int64_t j;
  BigInt e;
  BigInt f;
  friend bool operator==(const CanonicalDecomp&, const CanonicalDecomp&) = default;
};

/// The two-sided sequence ... < beta_{-1} < beta_0 = 1 < beta_1 < ... of all
/// indecomposables of O_K, with beta_{-j} = beta_j'.
///
/// For odd i >= -1 the block alpha_{i,0}, ..., alpha_{i,u_{i+2}-1} occupies
/// j = off(i), ..., off(i) + u_{i+2} - 1 where off(-1) = 0 and off(i+2) = off(i) + u_{i+2}.
/// Blocks repeat (up to multiplication by eps+) every `unit_period()` steps of i, which
/// is s' = s_prime() steps of j.
///
/// One map per field lives for the whole program; see BetaIndexMap::of.
class BetaIndexMap {
 public:
  explicit BetaIndexMap(const Field& k) : BetaIndexMap(std::make_shared<const CFData>(cf_expand(k))) {}

  explicit BetaIndexMap(std::shared_ptr<const CFData> cf)
      : field_(&cf->field()), cf_(std::move(cf)), table_(std::make_shared<ConvergentTable>(cf_)),
        units_(units(*cf_, *table_)) {
    const std::int64_t s = cf_->s();
    unit_period_ = (s % 2 == 0) ? s : 2 * s;
    std::int64_t off = 0;
    for (std::int64_t i = -1; i < -1 + unit_period_; i += 2) {
      block_start_.push_back(off);
      off += cf_->u(i + 2);
    }
    s_prime_ = off;
  }

  /// The shared map for Q(sqrt D), built on first use.
  static const BetaIndexMap& of(std::int64_t D) { return lookup(make_field(D).D(), nullptr); }

  /// Like of(), but builds the map from an already verified expansion when none exists yet.
  static const BetaIndexMap& of(const CFData& cf) {
    return lookup(cf.field().D(), std::make_shared<const CFData>(cf));
  }

  const Field& field() const noexcept { return *field_; }
  const CFData& cf() const noexcept { return *cf_; }
  const ConvergentTable& table() const noexcept { return *table_; }
  const Units& unit_data() const noexcept { return units_; }
  /// Period of the block structure in the convergent index i (s or 2s).
  std::int64_t unit_period() const noexcept { return unit_period_; }
  /// beta_{j + s'} = eps+ * beta_j
  std::int64_t s_prime() const noexcept { return s_prime_; }

  /// off(i) for odd i >= -1.
  std::int64_t offset(std::int64_t i) const {
    if (i < -1 || detail::mod_floor(i, 2) != 1) raise(Errc::BadIndex, "offset needs odd i >= -1");
    std::int64_t q = detail::floor_div(i + 1, unit_period_);
    std::int64_t k = (i + 1 - q * unit_period_) / 2;
    return q * s_prime_ + block_start_[static_cast<std::size_t>(k)];
  }

  /// j with beta_j = alpha_{i,r}; r = u_{i+2} gives the first index of the next block.
  std::int64_t j_of(std::int64_t i, std::int64_t r) const {
    if (r < 0 || r > cf_->u(i + 2)) raise(Errc::BadIndex, "r out of range in j_of");
    return offset(i) + r;
  }

  BetaIndex index_of(std::int64_t j) const {
    if (j < 0) raise(Errc::BadIndex, "index_of needs j >= 0; use |j| for conjugates");
    std::int64_t q = j / s_prime_;
    std::int64_t j0 = j % s_prime_;
    auto it = std::upper_bound(block_start_.begin(), block_start_.end(), j0);
    auto k = static_cast<std::int64_t>(it - block_start_.begin()) - 1;
    return BetaIndex{-1 + 2 * k + q * unit_period_, j0 - block_start_[static_cast<std::size_t>(k)]};
  }

  QuadInt beta(std::int64_t j) const {
    if (j < 0) return conjugate(beta(-j));
    std::lock_guard lock(mu_);
    while (static_cast<std::int64_t>(betas_.size()) <= j) {
      BetaIndex idx = index_of(static_cast<std::int64_t>(betas_.size()));
      betas_.push_back(semiconvergent(*table_, idx.i, idx.r));
    }
    return betas_[static_cast<std::size_t>(j)];
  }

  /// v_j with v_j beta_j = beta_{j-1} + beta_{j+1}.
  std::int64_t v(std::int64_t j) const {
    BetaIndex idx = index_of(j < 0 ? -j : j);
    return idx.r >= 1 ? 2 : cf_->u(idx.i + 1) + 2;
  }

 private:
  static const BetaIndexMap& lookup(std::int64_t D, std::shared_ptr<const CFData> cf) {
    static std::mutex mu;
    static std::map<std::int64_t, std::unique_ptr<const BetaIndexMap>> registry;
    std::unique_lock lock(mu);
    auto it = registry.find(D);
    if (it != registry.end()) return *it->second;
    lock.unlock();
    auto fresh = cf ? std::make_unique<const BetaIndexMap>(std::move(cf)) : std::make_unique<const BetaIndexMap>(make_field(D));
    lock.lock();
    auto& slot = registry[D];
    if (!slot) slot = std::move(fresh);
    return *slot;
  }

  const Field* field_;
  std::shared_ptr<const CFData> cf_;
  std::shared_ptr<ConvergentTable> table_;
  Units units_;
  std::int64_t unit_period_ = 0;
  std::int64_t s_prime_ = 0;
  std::vector<std::int64_t> block_start_;
  mutable std::mutex mu_;
  mutable std::deque<QuadInt> betas_;
};

inline QuadInt beta(const BetaIndexMap& map, std::int64_t j) { return map.beta(j); }
inline std::int64_t v(const BetaIndexMap& map, std::int64_t j) { return map.v(j); }

namespace detail {

inline void require_totally_positive(const BetaIndexMap& map, const QuadInt& x) {
  check_same(&map.field(), &x.field());
  if (!is_totally_positive(x)) raise(Errc::NotTotallyPositive, to_string(x) + " is not totally positive");
}

// Largest j with beta_j <= x (real values); x must have a positive first embedding.
inline std::int64_t last_beta_below(const BetaIndexMap& map, const QuadInt& x) {
  auto leq = [&](std::int64_t j) { return cmp_real(map.beta(j), x) <= 0; };
  std::int64_t j = 0;
  if (leq(0)) {
    const std::int64_t step = map.s_prime();
    while (leq(j + step)) j += step;
    while (leq(j + 1)) ++j;
  } else {
    const std::int64_t step = map.s_prime();
    while (!leq(j - step)) j -= step;
    while (!leq(j)) --j;
  }
  return j;
}

inline std::optional<std::pair<BigInt, BigInt>> solve_pair(const QuadInt& x, const QuadInt& y, const QuadInt& target) {
  BigInt det = x.a() * y.b() - y.a() * x.b();
  if (det.is_zero()) return std::nullopt;
  BigInt e_num = target.a() * y.b() - y.a() * target.b();
  BigInt f_num = x.a() * target.b() - target.a() * x.b();
  if (e_num % det != 0 || f_num % det != 0) return std::nullopt;
  return std::make_pair(BigInt(e_num / det), BigInt(f_num / det));
}

}  // namespace detail

/// Index window [lo, hi] of all j with beta_j <= alpha and beta_j' <= alpha' (real values).
/// These are exactly the indecomposables below alpha in the totally positive order.
inline std::pair<std::int64_t, std::int64_t> beta_window(const BetaIndexMap& map, const QuadInt& alpha) {
  detail::require_totally_positive(map, alpha);
  std::int64_t hi = detail::last_beta_below(map, alpha);
  std::int64_t lo = -detail::last_beta_below(map, conjugate(alpha));
  return {lo, hi};
}

/// The unique (j, e, f) with alpha = e beta_j + f beta_{j+1}, e >= 1, f >= 0.
///
/// Every beta_j with e >= 1 satisfies beta_j <= alpha in both embeddings, so j lies in
/// beta_window(alpha); each index of the window (plus one of slack per side) is tried
/// with an exact 2x2 solve.
inline CanonicalDecomp canonical_decomp(const BetaIndexMap& map, const QuadInt& alpha) {
  auto [lo, hi] = beta_window(map, alpha);
  std::optional<CanonicalDecomp> found;
  for (std::int64_t j = lo - 1; j <= hi + 1; ++j) {
    auto sol = detail::solve_pair(map.beta(j), map.beta(j + 1), alpha);
    if (!sol || sol->first < 1 || sol->second < 0) continue;
    if (found) raise(Errc::InternalError, "two canonical decompositions of " + to_string(alpha));
    found = CanonicalDecomp{j, sol->first, sol->second};
  }
  if (!found) raise(Errc::InternalError, "no canonical decomposition of " + to_string(alpha));
  return *found;
}

inline std::vector<std::pair<std::int64_t, QuadInt>> indecomposables_leq(const BetaIndexMap& map, const QuadInt& alpha) {
  auto [lo, hi] = beta_window(map, alpha);
  std::vector<std::pair<std::int64_t, QuadInt>> out;
  for (std::int64_t j = lo; j <= hi; ++j) {
    QuadInt b = map.beta(j);
    if (succeq(alpha, b)) out.emplace_back(j, std::move(b));
  }
  return out;
}

inline bool is_indecomposable(const BetaIndexMap& map, const QuadInt& alpha) {
  CanonicalDecomp d = canonical_decomp(map, alpha);
  return d.e == 1 && d.f == 0;
}

}  // namespace quadpart
