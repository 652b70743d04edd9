#include <gtest/gtest.h>

#include <memory>

#include "quadpart/cfrac.hpp"
#include "quadpart/theorems.hpp"

using namespace quadpart;

namespace {

// Continued fraction of (P0 + sqrt disc)/Q0 by the textbook floating-free recurrence, with no
// period detection: just n quotients.
std::vector<std::int64_t> naive_quotients(std::int64_t disc, std::int64_t P, std::int64_t Q, int n) {
  std::int64_t r = 0;
  while ((r + 1) * (r + 1) <= disc) ++r;
  std::vector<std::int64_t> out;
  for (int k = 0; k < n; ++k) {
    // Q stays positive along the expansion of w
    std::int64_t a = (P + r) / Q;
    out.push_back(a);
    P = a * Q - P;
    Q = (disc - P * P) / Q;
  }
  return out;
}

}  // namespace

TEST(CfExpand, Examples) {
  CFData c2 = cf_expand(make_field(2));
  EXPECT_EQ(c2.u0(), 2);
  EXPECT_EQ(c2.period(), std::vector<std::int64_t>{2});
  CFData c5 = cf_expand(make_field(5));
  EXPECT_EQ(c5.u0(), 1);
  EXPECT_EQ(c5.period(), std::vector<std::int64_t>{1});
  CFData c3 = cf_expand(make_field(3));
  EXPECT_EQ(c3.u0(), 2);
  EXPECT_EQ(c3.period(), (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(c3.s(), 2);
  EXPECT_EQ(c3.u(0), 2);
  EXPECT_EQ(c3.u(1), 1);
  EXPECT_EQ(c3.u(4), 2);
}

TEST(CfExpand, Gamma) {
  CFData c2 = cf_expand(make_field(2));
  EXPECT_EQ(gamma(c2, 1), (CFState{2, 2}));
  CFData c3 = cf_expand(make_field(3));
  EXPECT_EQ(gamma(c3, 2), (CFState{2, 2}));
  EXPECT_THROW(gamma(c3, 0), Error);
}

TEST(CfExpand, MatchesUnwrappedExpansion) {
  for (std::int64_t D : squarefree_upto(300)) {
    const Field& k = make_field(D);
    CFData cf = cf_expand(k);
    int n = static_cast<int>(3 * cf.s() + 1);
    auto q = naive_quotients(k.disc(), k.tr_omega(), 2, n + 1);
    // q[0] = floor(w), the rest are u_1, u_2, ...
    EXPECT_EQ(q[0], cf.floor_omega()) << D;
    for (int i = 1; i <= n; ++i) EXPECT_EQ(q[static_cast<std::size_t>(i)], cf.u(i)) << "D=" << D << " i=" << i;
    EXPECT_EQ(cf.u(cf.s()), cf.u0());
  }
}

TEST(CfExpand, RebuildFromParts) {
  const Field& k = make_field(94);
  CFData cf = cf_expand(k);
  CFData again = cf_from_parts(k, cf.u0(), cf.period());
  EXPECT_EQ(again.period(), cf.period());
  auto wrong = cf.period();
  wrong[0] += 1;
  EXPECT_THROW(cf_from_parts(k, cf.u0(), wrong), Error);
}

TEST(Convergents, TableAndUnits) {
  for (std::int64_t D : squarefree_upto(120)) {
    auto cf = std::make_shared<const CFData>(cf_expand(make_field(D)));
    ConvergentTable tab(cf);
    Units un = units(*cf, tab);
    const std::int64_t s = cf->s();
    for (std::int64_t i = -1; i <= 4 * s; ++i) {
      const ConvergentRow& row = tab.row(i);
      EXPECT_EQ(is_totally_positive(row.alpha), i % 2 != 0) << D << " " << i;
      BigInt n = norm(row.alpha);
      EXPECT_EQ(n < 0 ? BigInt(-n) : n, row.N);
      if (i >= 1) {
        EXPECT_EQ(row.p, cf->u(i) * tab.row(i - 1).p + tab.row(i - 2).p);
        EXPECT_EQ(row.q, cf->u(i) * tab.row(i - 1).q + tab.row(i - 2).q);
      }
      if (i % 2 != 0) {
        EXPECT_EQ(semiconvergent(tab, i, cf->u(i + 2)), tab.row(i + 2).alpha);
        EXPECT_EQ(semiconvergent(tab, i, 0), tab.row(i).alpha);
      }
      if (i <= s) { EXPECT_EQ(un.eps * row.alpha, tab.row(s + i).alpha); }
      EXPECT_TRUE(check_na1(tab, *cf, i).ok) << check_na1(tab, *cf, i).diagnostic;
    }
    EXPECT_EQ(un.s_odd, s % 2 == 1);
    EXPECT_EQ(un.eps_plus, s % 2 == 1 ? un.eps * un.eps : un.eps);
    EXPECT_EQ(norm(un.eps), s % 2 == 1 ? -1 : 1);
  }
}

TEST(Convergents, FundamentalUnitsKnown) {
  auto eps = [](std::int64_t D) {
    auto cf = std::make_shared<const CFData>(cf_expand(make_field(D)));
    ConvergentTable tab(cf);
    return units(*cf, tab).eps;
  };
  const Field& k2 = make_field(2);
  EXPECT_EQ(eps(2), QuadInt(k2, BigInt(1), BigInt(1)));
  const Field& k5 = make_field(5);
  EXPECT_EQ(eps(5), QuadInt(k5, BigInt(0), BigInt(1)));
  const Field& k3 = make_field(3);
  EXPECT_EQ(eps(3), QuadInt(k3, BigInt(2), BigInt(1)));
  // (39 + 5 sqrt 61)/2
  const Field& k61 = make_field(61);
  EXPECT_EQ(eps(61), QuadInt(k61, BigInt(17), BigInt(5)));
}

TEST(Convergents, Semiconvergents) {
  auto cf = std::make_shared<const CFData>(cf_expand(make_field(2)));
  ConvergentTable tab(cf);
  const Field& k = cf->field();
  EXPECT_EQ(semiconvergent(tab, -1, 1), QuadInt(k, BigInt(2), BigInt(1)));
  EXPECT_THROW(semiconvergent(tab, 0, 0), Error);
  EXPECT_THROW(semiconvergent(tab, -1, 3), Error);
  EXPECT_THROW(tab.row(-2), Error);
}
