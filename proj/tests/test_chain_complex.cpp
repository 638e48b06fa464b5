#include <gtest/gtest.h>

#include "support.hpp"

using namespace dtw;
using namespace dtw::testing;

namespace {

ChainComplex two_term(Wn W, i64 a) {
  Ring S = Ring::scalars(W);
  ChainComplex C(S, 0, {1, 1});
  RMat d(1, 1, S);
  d.set(0, 0, S.scalar(a));
  C.set_diff(1, d);
  return C;
}

ChainComplex direct_sum(const ChainComplex& A, const ChainComplex& B) {
  int lo = std::min(A.lo, B.lo), hi = std::max(A.hi, B.hi);
  std::vector<int> ranks;
  for (int i = lo; i <= hi; ++i) ranks.push_back(A.rank(i) + B.rank(i));
  ChainComplex C(A.S, lo, ranks);
  for (int i = lo + 1; i <= hi; ++i)
    C.set_diff(i, RMat::from_wmat(WMat::block_diag(A.diff(i).augmented(), B.diff(i).augmented()), A.S));
  return C;
}

}  // namespace

TEST(ChainComplex, KoszulOneElementValidates) {
  Ring S = Ring::truncated(Wn(2, 1), 1, 4);
  ChainComplex K = koszul_complex(S, {S.var(0)});
  EXPECT_TRUE(validate(K).ok);
}

TEST(ChainComplex, DetectsNonzeroSquare) {
  Wn W(2, 2);
  Ring S = Ring::scalars(W);
  ChainComplex C(S, 0, {1, 1, 1});
  RMat one(1, 1, S);
  one.set(0, 0, S.scalar(1));
  RMat two(1, 1, S);
  two.set(0, 0, S.scalar(2));
  C.set_diff(1, one);
  C.set_diff(2, two);
  auto rep = validate(C);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.degree, 2);
}

TEST(ChainComplex, RandomComplexesValidate) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) EXPECT_TRUE(validate(random_complex(rng, Wn(3, 2), -1, 3)).ok);
}

TEST(ChainComplex, MultiplicationByP) {
  ChainComplex C = two_term(Wn(2, 2), 2);
  GradedModule H = homology(C);
  EXPECT_EQ(H.at(0), std::vector<int>({1}));
  EXPECT_EQ(H.at(1), std::vector<int>({1}));
  EXPECT_EQ(brute_homology_order(C, 0), 2);
  EXPECT_EQ(brute_homology_order(C, 1), 2);
}

TEST(ChainComplex, ZeroDifferentialsGiveFreeHomology) {
  Wn W(3, 2);
  Ring S = Ring::scalars(W);
  ChainComplex C(S, 0, {2, 3, 1});
  GradedModule H = homology(C);
  EXPECT_EQ(H.free_rank(0), 2);
  EXPECT_EQ(H.free_rank(1), 3);
  EXPECT_EQ(H.free_rank(2), 1);
}

TEST(ChainComplex, ConeAndFibreOfIdentityAreAcyclic) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    ChainComplex A = random_complex(rng, Wn(2, 3), 0, 3);
    for (const auto& C : {cone(identity_map(A)), hofib(identity_map(A))}) {
      ASSERT_TRUE(validate(C).ok);
      GradedModule H = homology(C);
      for (int i = C.lo; i <= C.hi; ++i) ASSERT_TRUE(H.at(i).empty());
    }
  }
}

TEST(ChainComplex, HomologyMatchesBruteForce) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    Wn W = (t % 2) ? Wn(2, 2) : Wn(3, 1);
    ChainComplex C = random_complex(rng, W, 0, 3, 2);
    if (*std::max_element(C.ranks.begin(), C.ranks.end()) > 5) continue;
    GradedModule H = homology(C);
    for (int i = C.lo; i <= C.hi; ++i) ASSERT_EQ(order_of(H.at(i), W.p), brute_homology_order(C, i)) << t << " " << i;
  }
}

TEST(ChainComplex, FibreOfZeroMapSplits) {
  std::mt19937_64 rng(4);
  Wn W(3, 2);
  ChainComplex A = random_complex(rng, W, 0, 2), B = random_complex(rng, W, 0, 2);
  ChainComplex C = hofib(zero_map(A, B));
  GradedModule HA = homology(A), HB = homology(B), HC = homology(C);
  for (int n = C.lo; n <= C.hi; ++n) {
    std::vector<int> want = HA.at(n);
    for (int e : HB.at(n + 1)) want.push_back(e);
    std::sort(want.begin(), want.end());
    std::vector<int> got = HC.at(n);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, want) << n;
  }
}

TEST(ChainComplex, LongExactSequenceOfFibre) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 15; ++t) {
    Wn W = (t % 2) ? Wn(2, 3) : Wn(3, 2);
    ChainComplex B = random_complex(rng, W, 0, 3);
    ChainComplex E = random_complex(rng, W, 0, 3);
    ChainComplex A = direct_sum(B, E);
    // projection onto B plus a null-homotopic perturbation
    ChainMap f{A, B, {}};
    ChainMap h = random_chain_map(rng, A, B);
    for (int i = A.lo; i <= A.hi; ++i) {
      WMat m(B.rank(i), A.rank(i), W);
      for (int r = 0; r < B.rank(i); ++r) m(r, r) = 1;
      f.f.push_back(RMat::from_wmat(m + h.at(i).augmented(), A.S));
    }
    ASSERT_TRUE(validate(f).ok);
    auto rep = check_hofib_les(f);
    EXPECT_TRUE(rep.ok) << rep.where;
    EXPECT_GT(rep.spots, 0);
  }
}

TEST(ChainComplex, LesDetectsBrokenSign) {
  // a matrix that is not a chain map must break exactness somewhere
  Wn W(3, 1);
  ChainComplex A = two_term(W, 1);
  ChainComplex B = two_term(W, 1);
  ChainMap f = identity_map(A);
  f.tgt = B;
  f.f[0] = RMat::from_wmat(WMat::identity(1, W).scaled(2), A.S);
  EXPECT_FALSE(validate(f).ok);
}

TEST(ChainComplex, ShiftRoundTrip) {
  std::mt19937_64 rng(6);
  ChainComplex C = random_complex(rng, Wn(2, 2), 0, 3);
  ChainComplex D = shift(shift(C, 3), -3);
  GradedModule a = homology(C), b = homology(D);
  for (int i = C.lo; i <= C.hi; ++i) EXPECT_EQ(a.at(i), b.at(i));
  GradedModule s = homology(shift(C, 2));
  for (int i = C.lo; i <= C.hi; ++i) EXPECT_EQ(s.at(i + 2), a.at(i));
}

TEST(ChainComplex, TruncateBelowOfNegativeComplexIsZero) {
  std::mt19937_64 rng(7);
  ChainComplex C = random_complex(rng, Wn(3, 1), -4, -1);
  ChainComplex T = truncate_below(C, 0);
  GradedModule H = homology(T);
  for (int i = T.lo; i <= T.hi; ++i) EXPECT_TRUE(H.at(i).empty());
}

TEST(ChainComplex, TruncateAboveKoszulOverField) {
  Ring S = Ring::truncated(Wn(3, 1), 3, 3);
  // x, y, x*y is not regular, so H_1 is nonzero
  ChainComplex K = koszul_complex(restrict_to_Wn(unit_complex(S)).S.trivial() ? S : S,
                                  {S.var(0), S.var(1), S.mul(S.var(0), S.var(1))});
  ChainComplex KW = restrict_to_Wn(K);
  GradedModule H = homology(KW);
  ChainComplex T = truncate_above(KW, 1);
  ASSERT_TRUE(validate(T).ok);
  GradedModule HT = homology(T);
  EXPECT_EQ(HT.at(0), H.at(0));
  EXPECT_EQ(HT.at(1), H.at(1));
  for (int i = 2; i <= T.hi; ++i) EXPECT_TRUE(HT.at(i).empty());
  EXPECT_TRUE(T.window_exact);
}

TEST(ChainComplex, TruncationsOverWnKeepHomology) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    Wn W(2, 2);
    ChainComplex C = random_complex(rng, W, 0, 4);
    GradedModule H = homology(C);
    int n = 1 + rng() % 3;
    ChainComplex A = truncate_above(C, n), B = truncate_below(C, n);
    ASSERT_TRUE(validate(A).ok);
    ASSERT_TRUE(validate(B).ok);
    GradedModule HA = homology(A), HB = homology(B);
    for (int i = C.lo; i <= C.hi; ++i) {
      if (i <= n) EXPECT_EQ(HA.at(i), H.at(i)) << "above " << t << " " << i;
      if (i > n && (A.window_exact || i <= C.hi - 1)) EXPECT_TRUE(HA.at(i).empty()) << "above " << t << " " << i;
      if (i >= n && (B.window_exact || i < C.hi)) EXPECT_EQ(HB.at(i), H.at(i)) << "below " << t << " " << i;
      if (i < n) EXPECT_TRUE(HB.at(i).empty()) << "below " << t << " " << i;
    }
  }
}

TEST(ChainComplex, KoszulIsTensorOfKoszul) {
  Ring S = Ring::truncated(Wn(2, 1), 2, 3);
  ChainComplex Kx = koszul_complex(S, {S.var(0)}), Ky = koszul_complex(S, {S.var(1)});
  ChainComplex Kxy = koszul_complex(S, {S.var(0), S.var(1)});
  ChainComplex T = tensor(Kx, Ky);
  ASSERT_EQ(T.ranks, Kxy.ranks);
  // the tensor lists degree 1 as (1 (x) e_y, e_x (x) 1); Koszul lists (e_x, e_y)
  EXPECT_EQ(T.diff(1).get(0, 0), Kxy.diff(1).get(0, 1));
  EXPECT_EQ(T.diff(1).get(0, 1), Kxy.diff(1).get(0, 0));
  EXPECT_EQ(T.diff(2).get(0, 0), Kxy.diff(2).get(1, 0));
  EXPECT_EQ(T.diff(2).get(1, 0), Kxy.diff(2).get(0, 0));
}

TEST(ChainComplex, KunnethOverField) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    Wn W(5, 1);
    ChainComplex C = random_complex(rng, W, 0, 2), D = random_complex(rng, W, -1, 1);
    ChainComplex T = tensor(C, D);
    ASSERT_TRUE(validate(T).ok);
    GradedModule HC = homology(C), HD = homology(D), HT = homology(T);
    for (int n = T.lo; n <= T.hi; ++n) {
      int want = 0;
      for (int i = C.lo; i <= C.hi; ++i) want += HC.rank(i) * HD.rank(n - i);
      EXPECT_EQ(HT.rank(n), want);
    }
  }
}

TEST(ChainComplex, TensorWithUnitIsIdentity) {
  std::mt19937_64 rng(10);
  ChainComplex C = random_complex(rng, Wn(3, 2), 0, 3);
  ChainComplex T = tensor(C, unit_complex(C.S));
  EXPECT_EQ(T.ranks, C.ranks);
  for (int i = C.lo + 1; i <= C.hi; ++i) EXPECT_EQ(T.diff(i), C.diff(i));
}

TEST(ChainComplex, EulerCharacteristicOverField) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    ChainComplex C = random_complex(rng, Wn(2, 1), 0, 4);
    GradedModule H = homology(C);
    int a = 0, b = 0;
    for (int i = C.lo; i <= C.hi; ++i) {
      a += (i % 2 ? -1 : 1) * C.rank(i);
      b += (i % 2 ? -1 : 1) * H.rank(i);
    }
    EXPECT_EQ(a, b);
  }
}

TEST(ChainComplex, HomologyInvariantUnderBasisChange) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    Wn W(3, 2);
    ChainComplex C = random_complex(rng, W, 0, 3);
    ChainComplex D = C;
    std::vector<std::pair<WMat, WMat>> g;
    for (int i = C.lo; i <= C.hi; ++i) g.push_back(random_invertible(rng, C.rank(i), W));
    for (int i = C.lo + 1; i <= C.hi; ++i)
      D.set_diff(i, RMat::from_wmat(g[i - 1].first * C.diff(i).augmented() * g[i].second, C.S));
    GradedModule a = homology(C), b = homology(D);
    for (int i = C.lo; i <= C.hi; ++i) EXPECT_EQ(a.at(i), b.at(i));
  }
}

TEST(ChainComplex, QuotientComplexHomology) {
  // W_4 / 2 in degree 0 only: homology Z/2
  Wn W(2, 2);
  QuotientComplex Q;
  Q.R = W;
  Q.lo = 0;
  Q.hi = 0;
  Q.ranks = {1};
  WMat rel(1, 1, W);
  rel(0, 0) = 2;
  Q.rel = {rel};
  EXPECT_EQ(homology_at(Q, 0).divisors(), std::vector<int>({1}));
}
