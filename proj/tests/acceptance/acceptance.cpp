// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "quadpart.hpp"

using namespace quadpart;

namespace {

using Ids = std::vector<std::int64_t>;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string join(const Ids& xs) {
  std::string s = "{";
  for (std::size_t n = 0; n < xs.size(); ++n) s += (n ? "," : "") + std::to_string(xs[n]);
  return s + "}";
}

Ids first_squarefree(std::size_t n) {
  Ids out;
  for (std::int64_t D = 2; out.size() < n; ++D)
    if (is_squarefree(D)) out.push_back(D);
  return out;
}

const Ids kClosedFormFields{2, 3, 5, 6, 7, 10, 11, 13, 14, 17, 19, 21, 22, 23, 29};

Outcome dm_tables() {
  Outcome o;
  struct Row {
    std::int64_t m, X;
    Ids expect;
  };
  const std::vector<Row> rows{{1, 50, {}},           {2, 50, {}},        {3, 50, {5}},
                              {5, 50, {2, 3, 5}},    {7, 50, {2, 5}},    {11, 50, {2, 3, 5, 6, 7, 13, 21}},
                              {4, 30, {}}};
  std::ostringstream d;
  for (const Row& r : rows) {
    Ids got = scan_Dm(r.m, r.X);
    d << "D(" << r.m << ")=" << join(got) << " ";
    if (got != r.expect) o.fail("D(" + std::to_string(r.m) + ") = " + join(got) + ", expected " + join(r.expect));
  }
  if (o.pass) o.detail = d.str();
  return o;
}

Outcome e6_lists() {
  Outcome o;
  Ids none = scan_D6_fast(47);
  if (none != Ids{5, 7, 15, 17, 21, 23, 34, 35, 37, 43, 47}) o.fail("non-existence list " + join(none));
  Ids exist;
  for (std::int64_t D : squarefree_upto(46))
    if (has_pk6(BetaIndexMap::of(D).cf())) exist.push_back(D);
  const Ids expect{2, 3, 6, 10, 11, 13, 14, 19, 22, 26, 29, 30, 31, 33, 38, 39, 41, 42, 46};
  if (exist != expect) o.fail("existence list " + join(exist));
  Ids fast = scan_D6_fast(50), slow = scan_Dm(6, 50);
  if (fast != slow) o.fail("fast6 " + join(fast) + " vs decision " + join(slow));
  if (o.pass) o.detail = "D(6) up to 50 = " + join(fast);
  return o;
}

Outcome p6suf_check() {
  Outcome o;
  int n = 0;
  for (std::int64_t D : squarefree_upto(100)) {
    if (D == 5) continue;
    const BetaIndexMap& map = BetaIndexMap::of(D);
    P6Suf s = p6suf(map);
    if (!s.alpha || !s.predicted) {
      o.fail("no element for D=" + std::to_string(D));
      continue;
    }
    std::int64_t want = map.cf().u(1) >= 2 ? 6 : 9;
    CountResult c = pk(map, *s.alpha);
    if (*s.predicted != want || !c.is_exactly(want))
      o.fail("D=" + std::to_string(D) + ": pk(" + to_string(*s.alpha) + ") = " + to_string(c) + ", want " +
             std::to_string(want));
    ++n;
  }
  if (o.pass) o.detail = std::to_string(n) + " fields";
  return o;
}

Outcome ef_closed() {
  Outcome o;
  int n = 0;
  for (std::int64_t D : kClosedFormFields) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    oracle::F f(map.field());
    for (std::int64_t i = -1; i <= 5; i += 2) {
      for (std::int64_t r = 0; r < map.cf().u(i + 2); ++r) {
        QuadInt a0 = semiconvergent(map.table(), i, r), a1 = semiconvergent(map.table(), i, r + 1);
        for (EfKind kind : {EfKind::Double, EfKind::Pair}) {
          oracle::El x = oracle::of(kind == EfKind::Double ? 2 * a0 : a0 + a1);
          for (bool restricted : {false, true}) {
            std::int64_t closed = pk_ef_closed(map, i, r, kind, restricted);
            auto brute = static_cast<std::int64_t>(restricted ? oracle::pk_indec(f, x) : oracle::pk(f, x));
            ++n;
            if (closed != brute)
              o.fail("D=" + std::to_string(D) + " i=" + std::to_string(i) + " r=" + std::to_string(r) + ": closed " +
                     std::to_string(closed) + " vs oracle " + std::to_string(brute));
          }
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(n) + " comparisons";
  return o;
}

Outcome d1_d2() {
  Outcome o;
  int n = 0;
  for (std::int64_t D : kClosedFormFields) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    oracle::F f(map.field());
    for (std::int64_t j = 0; j < map.s_prime(); ++j)
      for (std::int64_t e = 1; e <= 2 * map.v(j) + 2; ++e)
        for (std::int64_t fc = 0; fc <= 2 * map.v(j + 1) + 2; ++fc) {
          QuadInt x = e * map.beta(j) + fc * map.beta(j + 1);
          std::uint64_t c = oracle::pk_indec(f, oracle::of(x), 2);
          ++n;
          if (is_unique_decomp(map, x) != (c == 1) || is_pkI_2(map, x) != (c == 2))
            o.fail("D=" + std::to_string(D) + " j=" + std::to_string(j) + " e=" + std::to_string(e) +
                   " f=" + std::to_string(fc) + " oracle " + std::to_string(c));
        }
  }
  if (o.pass) o.detail = std::to_string(n) + " elements";
  return o;
}

// Smallest odd i such that every element the generators build from index >= i has an
// embedding above the box.
std::int64_t imax_for_box(const BetaIndexMap& map, std::int64_t k) {
  long double lim = k * std::sqrt(static_cast<long double>(map.field().disc()));
  std::int64_t i = 1;
  while (approx(map.table().row(i).alpha) <= lim) i += 2;
  return i + 2;
}

Outcome generators() {
  Outcome o;
  std::size_t total = 0;
  for (std::int64_t D : {2, 3, 6, 7, 10, 13}) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    PartitionTable tab = PartitionTable::box(map, 40, 7);
    std::int64_t imax = imax_for_box(map, 40);
    std::set<QuadInt, CoordLess> want2, want6, got2, got6;
    for (const QuadInt& x : tab.points()) {
      if (tab.pk_indec(x).is_exactly(2)) want2.insert(x);
      if (tab.pk(x).is_exactly(6)) want6.insert(x);
    }
    for (const QuadInt& x : gen_pkI2(map, imax))
      if (tab.contains(x)) got2.insert(x);
    for (const QuadInt& x : gen_pk6(map, imax))
      if (tab.contains(x)) got6.insert(x);
    total += tab.points().size();
    if (want2 != got2)
      o.fail("D=" + std::to_string(D) + ": pk_indec=2 set has " + std::to_string(want2.size()) + " elements, generator " +
             std::to_string(got2.size()));
    if (want6 != got6)
      o.fail("D=" + std::to_string(D) + ": pk=6 set has " + std::to_string(want6.size()) + " elements, generator " +
             std::to_string(got6.size()));
  }
  if (o.pass) o.detail = std::to_string(total) + " box points";
  return o;
}

Outcome norm_bounds() {
  Outcome o;
  std::int64_t checked = 0;
  for (std::int64_t D : first_squarefree(50)) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    std::vector<BoundReport> reps{verify_bound(map, BoundKind::DS), verify_bound(map, BoundKind::HK10),
                                  verify_bound(map, BoundKind::N2)};
    for (std::int64_t m = 1; m <= 3; ++m) reps.push_back(verify_bound(map, BoundKind::N, m));
    for (const BoundReport& r : reps) {
      checked += r.candidates_checked;
      if (!r.ok())
        o.fail("D=" + std::to_string(D) + " " + bound_name(r.kind) + ": " + to_string(r.violations.front()));
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " checks, 0 violations";
  return o;
}

Outcome structure() {
  Outcome o;
  std::int64_t n = 0;
  for (std::int64_t D : first_squarefree(100)) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    const CFData& cf = map.cf();
    const ConvergentTable& tab = map.table();
    const Units& un = map.unit_data();
    const std::string at = "D=" + std::to_string(D);
    const std::int64_t sp = map.s_prime(), P = map.unit_period(), s = cf.s();
    for (std::int64_t j = -2 * sp; j <= 2 * sp; ++j) {
      ++n;
      if (map.v(j) * map.beta(j) != map.beta(j - 1) + map.beta(j + 1)) o.fail(at + " v relation at j=" + std::to_string(j));
      if (map.beta(j + sp) != un.eps_plus * map.beta(j)) o.fail(at + " eps+ shift at j=" + std::to_string(j));
    }
    for (std::int64_t i = -1; i <= 2 * P; ++i) {
      ++n;
      if (is_totally_positive(tab.row(i).alpha) != (i % 2 != 0)) o.fail(at + " parity at i=" + std::to_string(i));
      if (i % 2 != 0 && semiconvergent(tab, i, cf.u(i + 2)) != tab.row(i + 2).alpha)
        o.fail(at + " block end at i=" + std::to_string(i));
      if (un.eps * tab.row(i).alpha != tab.row(s + i).alpha) o.fail(at + " eps shift at i=" + std::to_string(i));
      Na1Result na = check_na1(tab, cf, i);
      if (!na.ok) o.fail(at + " " + na.diagnostic);
    }
  }
  if (o.pass) o.detail = std::to_string(n) + " index checks";
  return o;
}

Outcome symmetries() {
  Outcome o;
  std::mt19937_64 rng(20260101);
  const Ids fields{2, 3, 5, 6, 7, 10, 13, 17, 21, 29};
  int n = 0;
  for (std::int64_t D : fields) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    const Field& k = map.field();
    oracle::F f(k);
    std::vector<oracle::El> pool = oracle::below(f, oracle::of(QuadInt(k, 6) + 2 * map.beta(1) + 2 * map.beta(-1)));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const QuadInt& ep = map.unit_data().eps_plus;
    for (int t = 0; t < 50; ++t, ++n) {
      oracle::El xe = pool[pick(rng)], ye = pool[pick(rng)];
      QuadInt x = oracle::to_quad(k, xe), y = oracle::to_quad(k, ye);
      std::uint64_t px = oracle::pk(f, xe), pix = oracle::pk_indec(f, xe);
      std::string at = "D=" + std::to_string(D) + " " + to_string(x);
      if (oracle::pk(f, oracle::of(conjugate(x))) != px || oracle::pk_indec(f, oracle::of(conjugate(x))) != pix)
        o.fail(at + " conjugation");
      if (!pk(map, ep * x).is_exactly(static_cast<std::int64_t>(px)) ||
          !pk_indec(map, ep * x).is_exactly(static_cast<std::int64_t>(pix)))
        o.fail(at + " unit invariance");
      if (!pk(map, x).is_exactly(static_cast<std::int64_t>(px))) o.fail(at + " library vs oracle");
      oracle::El ze = oracle::of(x + y);
      if (!(oracle::pk(f, ze) > px) || !(oracle::pk_indec(f, ze) >= pix)) o.fail(at + " monotonicity");
    }
  }
  if (o.pass) o.detail = std::to_string(n) + " instances";
  return o;
}

Outcome density() {
  Outcome o;
  DensityReport r = density_report(4, 200);
  for (std::int64_t D : squarefree_upto(200)) {
    Ids missing;
    for (std::int64_t k = 1; k <= 4; ++k)
      if (!decide_m_in_range(BetaIndexMap::of(D), k).in_range) missing.push_back(k);
    auto it = r.exceptional.find(D);
    bool listed = it != r.exceptional.end();
    if (listed != !missing.empty() || (listed && it->second != missing))
      o.fail("D=" + std::to_string(D) + " membership disagrees with per-k decisions");
  }
  std::ostringstream d;
  d << "#E(4,200) = " << r.exceptional.size() << " of " << r.squarefree_count << " squarefree D; formula value "
    << r.formula_rhs << "; hypothesis " << (r.hypothesis_holds ? "holds" : "does not hold") << " at this X";
  if (o.pass) o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"D(m) tables", dm_tables},
      {"pk = 6 existence lists", e6_lists},
      {"pk of the 6-or-9 construction", p6suf_check},
      {"closed forms for 2a and a + a' against the oracle", ef_closed},
      {"pk_indec = 1 and = 2 characterizations", d1_d2},
      {"generator completeness on boxes", generators},
      {"norm bounds", norm_bounds},
      {"structural identities", structure},
      {"symmetry and monotonicity", symmetries},
      {"density report consistency", density},
  };
  int failed = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[n].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n + 1 << ": " << criteria[n].first << " ("
              << o.detail << ") [" << secs << "s]" << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
