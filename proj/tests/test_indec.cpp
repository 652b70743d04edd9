#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "quadpart/indec.hpp"
#include "quadpart/theorems.hpp"

using namespace quadpart;

namespace {

const std::vector<std::int64_t> kFields{2, 3, 5, 6, 7, 10, 11, 13, 14, 17, 19, 21, 22, 23, 29, 94};

QuadInt q(const Field& k, std::int64_t a, std::int64_t b) { return QuadInt(k, BigInt(a), BigInt(b)); }

}  // namespace

TEST(Beta, SequenceForSqrt2) {
  const BetaIndexMap& map = BetaIndexMap::of(2);
  const Field& k = map.field();
  EXPECT_EQ(map.s_prime(), 2);
  EXPECT_EQ(map.beta(0), q(k, 1, 0));
  EXPECT_EQ(map.beta(1), q(k, 2, 1));
  EXPECT_EQ(map.beta(2), q(k, 3, 2));
  EXPECT_EQ(map.beta(3), q(k, 10, 7));
  EXPECT_EQ(map.beta(-1), q(k, 2, -1));
  EXPECT_EQ(map.v(0), 4);
  EXPECT_EQ(map.v(1), 2);
  EXPECT_EQ(map.v(2), 4);
  EXPECT_EQ(map.v(-1), 2);
}

TEST(Beta, SPrime) {
  EXPECT_EQ(BetaIndexMap::of(3).s_prime(), 1);
  EXPECT_EQ(BetaIndexMap::of(5).s_prime(), 1);
  EXPECT_EQ(BetaIndexMap::of(7).s_prime(), 2);
  EXPECT_EQ(BetaIndexMap::of(13).s_prime(), 3);
}

TEST(Beta, StructuralIdentities) {
  for (std::int64_t D : squarefree_upto(200)) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    const Field& k = map.field();
    const std::int64_t sp = map.s_prime();
    const QuadInt& ep = map.unit_data().eps_plus;
    for (std::int64_t j = -3 * sp; j <= 3 * sp; ++j) {
      ASSERT_EQ(map.v(j) * map.beta(j), map.beta(j - 1) + map.beta(j + 1)) << "D=" << D << " j=" << j;
      EXPECT_EQ(map.beta(-j), conjugate(map.beta(j)));
      EXPECT_EQ(map.v(-j), map.v(j));
      EXPECT_EQ(cmp_real(map.beta(j), map.beta(j + 1)), std::strong_ordering::less);
      EXPECT_EQ(map.beta(j + sp), ep * map.beta(j));
      BigInt n = norm(map.beta(j));
      EXPECT_TRUE(n >= 1 && n <= k.c_D()) << "D=" << D << " j=" << j;
      EXPECT_GE(map.v(j), 2);
    }
  }
}

TEST(Beta, DressScharlauAttained) {
  for (std::int64_t D : {2, 3, 5, 6, 7, 13}) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    BigInt mx = 0;
    for (std::int64_t j = 0; j < map.s_prime(); ++j) mx = std::max(mx, norm(map.beta(j)));
    EXPECT_LE(mx, map.field().c_D());
    if (norm(map.unit_data().eps) == -1) { EXPECT_EQ(mx, map.field().c_D()) << D; }
  }
}

TEST(Beta, MatchesBruteForceIndecomposables) {
  for (std::int64_t D : kFields) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    const Field& k = map.field();
    oracle::F f(k);
    QuadInt top = 4 * (map.beta(-1) + map.beta(0) + map.beta(1) + map.beta(2));
    std::vector<oracle::El> brute = oracle::indecomposables_below(f, oracle::of(top));
    auto lib = indecomposables_leq(map, top);
    ASSERT_EQ(brute.size(), lib.size()) << D;
    for (const auto& [j, b] : lib) {
      EXPECT_TRUE(std::find(brute.begin(), brute.end(), oracle::of(b)) != brute.end());
      EXPECT_TRUE(is_indecomposable(map, b));
      EXPECT_TRUE(oracle::is_indecomposable(f, oracle::of(b)));
    }
  }
}

TEST(Indecomposable, Examples) {
  const BetaIndexMap& map = BetaIndexMap::of(2);
  const Field& k = map.field();
  EXPECT_TRUE(is_indecomposable(map, q(k, 2, 1)));
  EXPECT_EQ(norm(q(k, 2, 1)), 2);
  EXPECT_FALSE(is_indecomposable(map, q(k, 4, 2)));
  EXPECT_THROW(is_indecomposable(map, q(k, 1, 1)), Error);
  for (std::int64_t D : kFields) EXPECT_TRUE(is_indecomposable(BetaIndexMap::of(D), QuadInt(make_field(D), 1)));
}

TEST(Indecomposable, Leq) {
  const BetaIndexMap& map = BetaIndexMap::of(2);
  const Field& k = map.field();
  oracle::F f(k);
  std::vector<std::int64_t> js;
  for (const auto& [j, b] : indecomposables_leq(map, q(k, 4, 2))) js.push_back(j);
  std::vector<std::int64_t> brute_js;
  for (std::int64_t j = -6; j <= 6; ++j)
    if (oracle::leq(f, oracle::of(map.beta(j)), {4, 2})) brute_js.push_back(j);
  EXPECT_EQ(js, brute_js);
  EXPECT_EQ(js, (std::vector<std::int64_t>{0, 1, 2}));

  for (std::int64_t D : kFields) {
    const BetaIndexMap& m = BetaIndexMap::of(D);
    auto one = indecomposables_leq(m, QuadInt(m.field(), 1));
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].first, 0);
  }

  const BetaIndexMap& m5 = BetaIndexMap::of(5);
  std::vector<std::int64_t> e5;
  for (const auto& [j, b] : indecomposables_leq(m5, m5.unit_data().eps_plus)) e5.push_back(j);
  oracle::F f5(m5.field());
  std::vector<std::int64_t> b5;
  for (std::int64_t j = -6; j <= 6; ++j)
    if (oracle::leq(f5, oracle::of(m5.beta(j)), oracle::of(m5.unit_data().eps_plus))) b5.push_back(j);
  EXPECT_EQ(e5, b5);
}

TEST(Decomp, Examples) {
  const BetaIndexMap& map = BetaIndexMap::of(2);
  const Field& k = map.field();
  CanonicalDecomp d = canonical_decomp(map, q(k, 4, 2));
  EXPECT_EQ(d.j, 1);
  EXPECT_EQ(d.e, 2);
  EXPECT_EQ(d.f, 0);
  d = canonical_decomp(map, map.beta(5));
  EXPECT_EQ(d.j, 5);
  EXPECT_EQ(d.e, 1);
  EXPECT_EQ(d.f, 0);
  d = canonical_decomp(map, q(k, 5, 2));
  EXPECT_EQ(d.e * map.beta(d.j) + d.f * map.beta(d.j + 1), q(k, 5, 2));
  EXPECT_EQ(d.j, 0);
  EXPECT_EQ(d.e, 1);
  EXPECT_EQ(d.f, 2);
  EXPECT_THROW(canonical_decomp(map, q(k, 1, 1)), Error);
  EXPECT_THROW(canonical_decomp(map, QuadInt(k, 0)), Error);
}

TEST(Decomp, RoundTrip) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> ed(1, 50), fd(0, 50), jd(-20, 20);
  for (std::int64_t D : kFields) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    for (int n = 0; n < 100; ++n) {
      std::int64_t j = jd(rng), e = ed(rng), f = fd(rng);
      CanonicalDecomp d = canonical_decomp(map, e * map.beta(j) + f * map.beta(j + 1));
      EXPECT_EQ(d.j, j);
      EXPECT_EQ(d.e, e);
      EXPECT_EQ(d.f, f);
    }
  }
}

TEST(Index, OffsetsAndBlocks) {
  for (std::int64_t D : kFields) {
    const BetaIndexMap& map = BetaIndexMap::of(D);
    const ConvergentTable& tab = map.table();
    for (std::int64_t i = -1; i <= 2 * map.unit_period(); i += 2) {
      for (std::int64_t r = 0; r < map.cf().u(i + 2); ++r) {
        std::int64_t j = map.j_of(i, r);
        BetaIndex idx = map.index_of(j);
        EXPECT_EQ(idx.i, i);
        EXPECT_EQ(idx.r, r);
        EXPECT_EQ(map.beta(j), semiconvergent(tab, i, r));
        EXPECT_EQ(map.v(j), r >= 1 ? 2 : map.cf().u(i + 1) + 2);
      }
    }
    EXPECT_THROW(map.offset(0), Error);
    EXPECT_THROW(map.index_of(-1), Error);
  }
}
