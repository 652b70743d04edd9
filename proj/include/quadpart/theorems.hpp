#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "quadpart/cfrac.hpp"
#include "quadpart/error.hpp"
#include "quadpart/indec.hpp"
#include "quadpart/partcount.hpp"
#include "quadpart/qfield.hpp"

namespace quadpart {

enum class BoundKind { DS, HK10, N, N2 };

inline std::string bound_name(BoundKind k) {
  switch (k) {
    case BoundKind::DS: return "ds";
    case BoundKind::HK10: return "hk10";
    case BoundKind::N: return "n";
    case BoundKind::N2: return "n2";
  }
  return "?";
}

/// Right-hand side of a norm bound as an exact x + y*sqrt(disc).
///   DS    c_D
///   HK10  sqrt(d)(2 sqrt(d) + 1)(3 sqrt(d) + 2)       = 7d + (6d + 2) sqrt(d)
///   N(m)  C sqrt(d)(sqrt(d) + 2)^2, C = m^2(2m+1)(2m+3) = 4Cd + C(d + 4) sqrt(d)
///   N2    5 sqrt(d)(sqrt(d) + 1)(3 sqrt(d) + 2)       = 25d + (15d + 10) sqrt(d)
inline SurdExpr bound_value(BoundKind kind, const Field& k, std::int64_t m = 1) {
  const BigInt d = k.disc();
  switch (kind) {
    case BoundKind::DS: return surd_const(k, Rational(k.c_D()));
    case BoundKind::HK10: return {Rational(7 * d), Rational(6 * d + 2), &k};
    case BoundKind::N: {
      if (m < 1) raise(Errc::OutOfRange, "m must be >= 1");
      BigInt c = BigInt(m) * m * (2 * m + 1) * (2 * m + 3);
      return {Rational(4 * c * d), Rational(c * (d + 4)), &k};
    }
    case BoundKind::N2: return {Rational(25 * d), Rational(15 * d + 10), &k};
  }
  raise(Errc::InternalError, "unknown bound kind");
}

/// All e*beta_j + f*beta_{j+1} with 0 <= j < s', 1 <= e <= m v_j - 1, 0 <= f <= m v_{j+1} - 1.
/// Every alpha with p_K(alpha|I) <= m is a totally positive unit multiple of one of these.
inline std::vector<QuadInt> candidate_set(const BetaIndexMap& map, std::int64_t m) {
  if (m < 1) raise(Errc::OutOfRange, "m must be >= 1");
  std::vector<QuadInt> out;
  for (std::int64_t j = 0; j < map.s_prime(); ++j) {
    QuadInt x = map.beta(j), y = map.beta(j + 1);
    std::int64_t emax = m * map.v(j) - 1, fmax = m * map.v(j + 1) - 1;
    for (std::int64_t e = 1; e <= emax; ++e)
      for (std::int64_t f = 0; f <= fmax; ++f) out.push_back(e * x + f * y);
  }
  return out;
}

namespace detail {

/// Walks the candidates of candidate_set(m) in order (j, e, f), skipping every candidate that
/// is known to exceed the threshold: the count is monotone in f and in e, so the walk stops a
/// row at the first count above the threshold and stops j at the first row whose f = 0 entry
/// is above it. `visit` reports whether a candidate is above the threshold and whether the
/// whole walk should stop.
struct StairVisit {
  bool above;
  bool stop;
};

template <class Visit>
std::int64_t staircase(const BetaIndexMap& map, std::int64_t m, Visit&& visit) {
  std::int64_t visited = 0;
  for (std::int64_t j = 0; j < map.s_prime(); ++j) {
    QuadInt x = map.beta(j), y = map.beta(j + 1);
    std::int64_t emax = m * map.v(j) - 1, fmax = m * map.v(j + 1) - 1;
    for (std::int64_t e = 1; e <= emax; ++e) {
      bool row_empty = false;
      for (std::int64_t f = 0; f <= fmax; ++f) {
        ++visited;
        StairVisit r = visit(j, e, f, e * x + f * y);
        if (r.stop) return visited;
        if (r.above) {
          row_empty = (f == 0);
          break;
        }
      }
      if (row_empty) break;
    }
  }
  return visited;
}

}  // namespace detail

struct BoundReport {
  std::int64_t D = 0;
  BoundKind kind = BoundKind::DS;
  std::int64_t m = 1;
  std::int64_t candidates_checked = 0;
  BigInt max_norm_seen = 0;
  SurdExpr bound;
  std::vector<QuadInt> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks a norm bound on every element it applies to, up to units and conjugation.
///   DS    every indecomposable has norm <= c_D
///   HK10  p_K(alpha|I) = 1  implies  Nm(alpha) < bound
///   N(m)  p_K(alpha|I) <= m implies  Nm(alpha) < bound
///   N2    p_K(alpha|I) = 2  implies  Nm(alpha) < bound, checked both on gen_pkI2 and on candidates
inline BoundReport verify_bound(const BetaIndexMap& map, BoundKind kind, std::int64_t m = 1) {
  const Field& k = map.field();
  BoundReport rep;
  rep.D = k.D();
  rep.kind = kind;
  rep.m = kind == BoundKind::N ? m : (kind == BoundKind::N2 ? 2 : 1);
  rep.bound = bound_value(kind, k, rep.m);
  auto check = [&](const QuadInt& alpha) {
    BigInt n = norm(alpha);
    if (n > rep.max_norm_seen) rep.max_norm_seen = n;
    int s = surd_sign(rep.bound - surd_const(k, Rational(n)));
    bool holds = kind == BoundKind::DS ? s >= 0 : s > 0;
    if (!holds) rep.violations.push_back(alpha);
  };

  if (kind == BoundKind::DS) {
    for (std::int64_t j = 0; j < map.s_prime(); ++j) check(map.beta(j));
    rep.candidates_checked = map.s_prime();
    return rep;
  }

  if (kind == BoundKind::N2) {
    std::int64_t i_max = map.unit_period() - 3;
    for (const QuadInt& alpha : gen_pkI2(map, i_max)) {
      ++rep.candidates_checked;
      check(alpha);
    }
  }

  const std::int64_t mm = rep.m;
  detail::IndecScanner scanner(map);
  const std::uint64_t limit = static_cast<std::uint64_t>(mm) + 1;
  rep.candidates_checked += detail::staircase(map, mm, [&](std::int64_t j, std::int64_t, std::int64_t, const QuadInt& alpha) {
    std::uint64_t c = scanner.pk_indec(detail::require_pt(alpha), j, limit);
    bool applies = kind == BoundKind::N ? c <= static_cast<std::uint64_t>(mm) : c == static_cast<std::uint64_t>(mm);
    if (applies) check(alpha);
    return detail::StairVisit{c > static_cast<std::uint64_t>(mm), false};
  });
  return rep;
}

/// Witnesses that {1, ..., floor(B/2) + 2} lies in the range of p_K, B = max u_i over odd i.
struct RangeWitnesses {
  std::int64_t B = 0;
  std::int64_t i = -1;  // odd i >= -1 with u_{i+2} = B
  std::map<std::int64_t, QuadInt> witnesses;
};

inline RangeWitnesses range_witnesses(const BetaIndexMap& map) {
  const CFData& cf = map.cf();
  RangeWitnesses out;
  for (std::int64_t i = 1; i <= 2 * cf.s(); i += 2) {
    if (cf.u(i) > out.B) {
      out.B = cf.u(i);
      out.i = i - 2;
    }
  }
  out.witnesses.emplace(1, map.beta(1));
  for (std::int64_t m = 2; m <= out.B / 2 + 2; ++m)
    out.witnesses.emplace(m, 2 * semiconvergent(map.table(), out.i, m - 2));
  return out;
}

struct Decision {
  bool in_range = false;
  std::optional<QuadInt> witness;
  std::int64_t candidates_evaluated = 0;
};

/// Decides whether some alpha in O_K^+ has exactly m partitions.
///
/// p_K(alpha) = m forces p_K(alpha|I) <= m, and then the canonical decomposition
/// alpha = e beta_j + f beta_{j+1} has e < m v_j and f < m v_{j+1} (otherwise the relation
/// v_j beta_j = beta_{j-1} + beta_{j+1} rewrites alpha in more than m ways). Multiplying by
/// a power of eps+ moves j into [0, s'), so alpha is a unit multiple of a candidate. The
/// walk is exhaustive over candidates with p_K <= m because p_K is strictly monotone.
inline Decision decide_m_in_range(const BetaIndexMap& map, std::int64_t m) {
  if (m < 1) raise(Errc::OutOfRange, "m must be >= 1");
  Decision out;
  out.candidates_evaluated = detail::staircase(map, m, [&](std::int64_t, std::int64_t, std::int64_t, const QuadInt& alpha) {
    CountResult c = pk(map, alpha, m);
    if (c.is_exactly(m)) {
      out.in_range = true;
      out.witness = alpha;
      return detail::StairVisit{false, true};
    }
    return detail::StairVisit{!c.is_exact(), false};
  });
  return out;
}

struct ScanRow {
  std::int64_t D = 0;
  std::int64_t m = 0;
  bool in_range = false;
  std::optional<QuadInt> witness;
};

inline std::vector<std::int64_t> squarefree_upto(std::int64_t X) {
  std::vector<std::int64_t> out;
  for (std::int64_t D = 2; D <= X; ++D)
    if (is_squarefree(D)) out.push_back(D);
  return out;
}

/// Runs f(D) for each D on worker threads; results come back in input order.
template <class T>
std::vector<T> parallel_map(const std::vector<std::int64_t>& items, const std::function<T(std::int64_t)>& f,
                            unsigned threads = 0) {
  std::vector<std::optional<T>> slots(items.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(items.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t idx; (idx = next.fetch_add(1)) < items.size();) {
      try {
        slots[idx].emplace(f(items[idx]));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// decide_m_in_range for every squarefree D in [2, X], ascending.
inline std::vector<ScanRow> scan_rows(std::int64_t m, std::int64_t X, unsigned threads = 0) {
  if (X < 2) raise(Errc::OutOfRange, "X must be >= 2");
  std::function<ScanRow(std::int64_t)> one = [m](std::int64_t D) {
    Decision d = decide_m_in_range(BetaIndexMap::of(D), m);
    return ScanRow{D, m, d.in_range, d.witness};
  };
  return parallel_map(squarefree_upto(X), one, threads);
}

/// D(m) restricted to [2, X].
inline std::vector<std::int64_t> scan_Dm(std::int64_t m, std::int64_t X, unsigned threads = 0) {
  std::vector<std::int64_t> out;
  for (const ScanRow& row : scan_rows(m, X, threads))
    if (!row.in_range) out.push_back(row.D);
  return out;
}

/// D(6) restricted to [2, X], from the continued fraction criterion alone.
inline std::vector<std::int64_t> scan_D6_fast(std::int64_t X) {
  if (X < 2) raise(Errc::OutOfRange, "X must be >= 2");
  std::vector<std::int64_t> out;
  for (std::int64_t D : squarefree_upto(X))
    if (!has_pk6(BetaIndexMap::of(D).cf())) out.push_back(D);
  return out;
}

struct DensityReport {
  std::int64_t m = 0;
  std::int64_t X = 0;
  std::int64_t squarefree_count = 0;
  /// D in E(m, X) with the values k <= m missing from the range of p_K.
  std::map<std::int64_t, std::vector<std::int64_t>> exceptional;
  /// 100 (2m-5)^{3/2} (log X)^{3/2} X^{7/8}, for reporting only.
  double formula_rhs = 0;
  /// X >= (2m-5)^12 (log X)^4
  bool hypothesis_holds = false;
};

inline DensityReport density_report(std::int64_t m, std::int64_t X, unsigned threads = 0) {
  if (m < 4) raise(Errc::OutOfRange, "the density report needs m >= 4");
  if (X < 2) raise(Errc::OutOfRange, "X must be >= 2");
  DensityReport rep;
  rep.m = m;
  rep.X = X;
  std::vector<std::int64_t> ds = squarefree_upto(X);
  rep.squarefree_count = static_cast<std::int64_t>(ds.size());
  std::function<std::vector<std::int64_t>(std::int64_t)> missing = [m](std::int64_t D) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    std::vector<std::int64_t> out;
    for (std::int64_t k = 1; k <= m; ++k)
      if (!decide_m_in_range(map, k).in_range) out.push_back(k);
    return out;
  };
  auto rows = parallel_map(ds, missing, threads);
  for (std::size_t n = 0; n < ds.size(); ++n)
    if (!rows[n].empty()) rep.exceptional.emplace(ds[n], rows[n]);
  const double lx = std::log(static_cast<double>(X));
  const double b = static_cast<double>(2 * m - 5);
  rep.formula_rhs = 100 * std::pow(b, 1.5) * std::pow(lx, 1.5) * std::pow(static_cast<double>(X), 0.875);
  rep.hypothesis_holds = static_cast<double>(X) >= std::pow(b, 12) * std::pow(lx, 4);
  return rep;
}

}  // namespace quadpart
