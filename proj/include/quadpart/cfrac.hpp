#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "quadpart/detail/bigint.hpp"
#include "quadpart/error.hpp"
#include "quadpart/qfield.hpp"

namespace quadpart {

/// The quadratic irrational (P + sqrt disc)/Q. Every state produced by the
/// expansion keeps Q != 0 and Q | disc - P^2.
struct CFState {
  std::int64_t P = 0;
  std::int64_t Q = 0;
  friend auto operator<=>(const CFState&, const CFState&) = default;
};

/// Continued fraction data of w_D and sigma_D = floor(xi_D) + w_D.
///
/// w_D = [ceil(u0/2); u_1, ..., u_s] with u_s = u0, and sigma_D = [u0, u_1, ..., u_{s-1}]
/// repeating. Partial quotients are indexed absolutely: u(i) = period[(i-1) mod s] for
/// every i >= 0, so that u(0) = u(s) = u0.
class CFData {
 public:
  const Field& field() const noexcept { return *field_; }
  std::int64_t u0() const noexcept { return u0_; }
  const std::vector<std::int64_t>& period() const noexcept { return period_; }
  std::int64_t s() const noexcept { return static_cast<std::int64_t>(period_.size()); }
  std::vector<std::int64_t> sigma_period() const {
    std::vector<std::int64_t> out{u0_};
    out.insert(out.end(), period_.begin(), period_.end() - 1);
    return out;
  }
  /// floor(w_D) = ceil(u0/2)
  std::int64_t floor_omega() const noexcept { return (u0_ + field_->tr_omega()) / 2; }

  std::int64_t u(std::int64_t i) const {
    if (i < 0) raise(Errc::BadIndex, "partial quotient index must be >= 0, got " + std::to_string(i));
    return period_[static_cast<std::size_t>(detail::mod_floor(i - 1, s()))];
  }

  /// gamma_i for i >= 1; gamma_0 = w_D.
  CFState state(std::int64_t i) const {
    if (i < 0) raise(Errc::BadIndex, "tail index must be >= 0");
    if (i == 0) return {field_->tr_omega(), 2};
    return states_[static_cast<std::size_t>(detail::mod_floor(i - 1, s()))];
  }

  friend CFData cf_expand(const Field& k);
  friend CFData cf_from_parts(const Field& k, std::int64_t u0, std::vector<std::int64_t> period);

 private:
  const Field* field_ = nullptr;
  std::int64_t u0_ = 0;
  std::vector<std::int64_t> period_;
  std::vector<CFState> states_;
};

namespace detail {

inline std::int64_t cf_floor(const CFState& st, std::int64_t isqrt_disc) {
  if (st.Q <= 0) raise(Errc::InternalError, "continued fraction state with Q <= 0");
  return floor_div(st.P + isqrt_disc, st.Q);
}

inline CFState cf_step(const CFState& st, std::int64_t a, std::int64_t disc) {
  CFState next;
  next.P = a * st.Q - st.P;
  i128 num = static_cast<i128>(disc) - static_cast<i128>(next.P) * next.P;
  if (num % st.Q != 0) raise(Errc::InternalError, "Q does not divide disc - P^2");
  next.Q = static_cast<std::int64_t>(num / st.Q);
  if (next.Q == 0) raise(Errc::InternalError, "continued fraction terminated for an irrational");
  return next;
}

inline std::int64_t period_cap(std::int64_t disc) {
  auto d = static_cast<double>(disc);
  return static_cast<std::int64_t>(10.0 * std::sqrt(d) * std::log(d)) + 100;
}

// Runs the expansion from `start` and returns (terms, states) for the purely periodic part
// that begins at state index `from`.
inline std::pair<std::vector<std::int64_t>, std::vector<CFState>> periodic_part(const Field& k, CFState start,
                                                                                int from) {
  const std::int64_t cap = period_cap(k.disc());
  std::vector<CFState> states{start};
  std::vector<std::int64_t> terms;
  std::map<CFState, std::size_t> seen;
  for (std::int64_t step = 0;; ++step) {
    if (step > cap + from) raise(Errc::InternalError, "period length exceeds sanity cap for D=" + std::to_string(k.D()));
    const CFState& st = states.back();
    if (static_cast<int>(states.size()) - 1 >= from) {
      auto [it, fresh] = seen.emplace(st, states.size() - 1);
      if (!fresh) {
        if (it->second != static_cast<std::size_t>(from)) {
          raise(Errc::InternalError, "expansion is not purely periodic from the expected index");
        }
        std::vector<std::int64_t> per(terms.begin() + from, terms.end());
        std::vector<CFState> sts(states.begin() + from, states.end() - 1);
        return {per, sts};
      }
    }
    std::int64_t a = cf_floor(st, k.isqrt_disc());
    terms.push_back(a);
    states.push_back(cf_step(st, a, k.disc()));
  }
}

}  // namespace detail

/// Expands w_D = (tr + sqrt disc)/2 with the (P, Q) recurrence and detects the period by
/// the first repeated state. Also expands sigma_D independently and checks it is purely
/// periodic with quotients [u0, u_1, ..., u_{s-1}].
inline CFData cf_expand(const Field& k) {
  CFData cf;
  cf.field_ = &k;
  const std::int64_t t = k.tr_omega();
  CFState omega{t, 2};
  std::int64_t a0 = detail::cf_floor(omega, k.isqrt_disc());
  auto [period, states] = detail::periodic_part(k, omega, 1);
  cf.period_ = std::move(period);
  cf.states_ = std::move(states);
  cf.u0_ = 2 * a0 - t;

  if (cf.period_.back() != cf.u0_) raise(Errc::InternalError, "u_s != u_0 for D=" + std::to_string(k.D()));
  if ((cf.u0_ + t) % 2 != 0 || (cf.u0_ + t) / 2 != a0) raise(Errc::InternalError, "floor(w) != ceil(u0/2)");
  if (cf.u0_ * cf.u0_ >= k.disc()) raise(Errc::InternalError, "u0^2 >= disc");
  for (auto u : cf.period_) {
    if (u < 1) raise(Errc::InternalError, "partial quotient < 1");
  }

  CFState sigma{2 * k.floor_xi() + t, 2};
  auto [sigma_period, sigma_states] = detail::periodic_part(k, sigma, 0);
  if (sigma_period != cf.sigma_period()) {
    raise(Errc::InternalError, "sigma_D expansion disagrees with the w_D period for D=" + std::to_string(k.D()));
  }
  return cf;
}

/// Rebuilds CFData from a cached (u0, period) pair; tail states are recomputed from
/// the quotients and must close up after one period.
inline CFData cf_from_parts(const Field& k, std::int64_t u0, std::vector<std::int64_t> period) {
  CFData fresh = cf_expand(k);
  if (fresh.u0_ != u0 || fresh.period_ != period) {
    raise(Errc::InternalError, "cached continued fraction for D=" + std::to_string(k.D()) + " is stale");
  }
  return fresh;
}

/// gamma_i = [u_i; u_{i+1}, ...] as an exact (P, Q) state, i >= 1.
inline CFState gamma(const CFData& cf, std::int64_t i) {
  if (i < 1) raise(Errc::BadIndex, "gamma is defined for i >= 1, got " + std::to_string(i));
  return cf.state(i);
}

struct ConvergentRow {
  BigInt p;
  BigInt q;
  QuadInt alpha;  // p + q*xi_D
  BigInt N;       // |Nm(alpha)|
};

/// Convergents p_i/q_i of w_D and alpha_i = p_i + q_i xi_D for i >= -1.
///
/// Rows are computed on demand by the three-term recurrence and memoized. Extension
/// happens under a lock and rows live in a deque, so references handed out stay valid.
class ConvergentTable {
 public:
  explicit ConvergentTable(std::shared_ptr<const CFData> cf) : cf_(std::move(cf)) {
    push(BigInt(1), BigInt(0), -1);
    push(BigInt(cf_->floor_omega()), BigInt(1), 0);
  }

  const CFData& cf() const noexcept { return *cf_; }

  const ConvergentRow& row(std::int64_t i) const {
    if (i < -1) raise(Errc::BadIndex, "convergent index must be >= -1, got " + std::to_string(i));
    std::lock_guard lock(mu_);
    while (static_cast<std::int64_t>(rows_.size()) - 2 < i) {
      std::int64_t next = static_cast<std::int64_t>(rows_.size()) - 1;
      const ConvergentRow& r1 = rows_[rows_.size() - 1];
      const ConvergentRow& r0 = rows_[rows_.size() - 2];
      std::int64_t u = cf_->u(next);
      push(u * r1.p + r0.p, u * r1.q + r0.q, next);
    }
    return rows_[static_cast<std::size_t>(i + 1)];
  }

 private:
  void push(BigInt p, BigInt q, std::int64_t i) const {
    const Field& k = cf_->field();
    // xi = w - tr
    QuadInt alpha(k, p - q * k.tr_omega(), q);
    BigInt n = norm(alpha);
    if (is_totally_positive(alpha) != (detail::mod_floor(i, 2) == 1)) {
      raise(Errc::InternalError, "alpha_" + std::to_string(i) + " violates the parity/positivity rule");
    }
    if (n.sign() < 0) n = -n;
    rows_.push_back(ConvergentRow{std::move(p), std::move(q), std::move(alpha), std::move(n)});
  }

  std::shared_ptr<const CFData> cf_;
  mutable std::mutex mu_;
  mutable std::deque<ConvergentRow> rows_;
};

inline const ConvergentRow& convergent(const ConvergentTable& tab, std::int64_t i) { return tab.row(i); }

/// alpha_{i,r} = alpha_i + r alpha_{i+1} for odd i >= -1 and 0 <= r <= u_{i+2}.
inline QuadInt semiconvergent(const ConvergentTable& tab, std::int64_t i, std::int64_t r) {
  if (i < -1 || detail::mod_floor(i, 2) != 1) raise(Errc::BadIndex, "semiconvergent needs odd i >= -1, got " + std::to_string(i));
  std::int64_t u = tab.cf().u(i + 2);
  if (r < 0 || r > u) {
    raise(Errc::BadIndex, "r=" + std::to_string(r) + " outside [0, " + std::to_string(u) + "] for i=" + std::to_string(i));
  }
  return tab.row(i).alpha + r * tab.row(i + 1).alpha;
}

struct Units {
  QuadInt eps;       // fundamental unit > 1
  QuadInt eps_plus;  // smallest totally positive unit > 1
  bool s_odd;
};

inline Units units(const CFData& cf, const ConvergentTable& tab) {
  const std::int64_t s = cf.s();
  const bool odd = s % 2 == 1;
  QuadInt eps = tab.row(s - 1).alpha;
  QuadInt eps_plus = odd ? tab.row(2 * s - 1).alpha : eps;
  BigInt ne = norm(eps);
  if (ne != 1 && ne != -1) raise(Errc::InternalError, "Nm(eps) is not a unit norm");
  if (norm(eps_plus) != 1 || !is_totally_positive(eps_plus)) {
    raise(Errc::InternalError, "eps+ is not a totally positive unit");
  }
  return Units{std::move(eps), std::move(eps_plus), odd};
}

struct Na1Result {
  bool ok = true;
  std::string diagnostic;
};

/// Checks N_{i+1} = sqrt(disc)/g - N_i/g^2 with g = gamma_{i+2}, after clearing
/// denominators, together with (N_i u_{i+1})^2 < disc.
inline Na1Result check_na1(const ConvergentTable& tab, const CFData& cf, std::int64_t i) {
  Na1Result out;
  const std::int64_t disc = cf.field().disc();
  const BigInt& n0 = tab.row(i).N;
  const BigInt& n1 = tab.row(i + 1).N;
  CFState g = gamma(cf, i + 2);
  // N1 (P + r)^2 - r Q (P + r) + N0 Q^2 = 0 with r = sqrt(disc), split into rational and r parts.
  BigInt rational_part = n1 * (BigInt(g.P) * g.P + disc) - BigInt(g.Q) * disc + n0 * BigInt(g.Q) * g.Q;
  BigInt surd_part = 2 * BigInt(g.P) * n1 - BigInt(g.Q) * g.P;
  if (!rational_part.is_zero() || !surd_part.is_zero()) {
    out.ok = false;
    out.diagnostic = "identity fails at i=" + std::to_string(i) + ": residue " + rational_part.str() + " + " +
                     surd_part.str() + " sqrt(disc)";
    return out;
  }
  BigInt lhs = n0 * cf.u(i + 1);
  if (lhs * lhs >= disc) {
    out.ok = false;
    out.diagnostic = "N_i * u_{i+1} >= sqrt(disc) at i=" + std::to_string(i);
  }
  return out;
}

}  // namespace quadpart
