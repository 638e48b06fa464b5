#include <gtest/gtest.h>

#include "dtw/deformation.hpp"
#include "dtw/tor.hpp"

using namespace dtw;

namespace {

Poly mono(int s, std::vector<int> e, i64 c = 1) { return Poly{{{std::move(e), c}}}; }

// dim_k m / (m^2 + p + I) straight from ideal spans in the truncated ring
int cotangent_brute(const Presentation& P) {
  Ring S = Ring::truncated(P.W, P.s, P.T);
  std::vector<Vec> J{S.scalar(P.W.p)}, M{S.scalar(P.W.p)};
  for (int i = 0; i < P.s; ++i) {
    M.push_back(S.var(i));
    for (int j = i; j < P.s; ++j) J.push_back(S.mul(S.var(i), S.var(j)));
  }
  for (const auto& f : P.rel) J.push_back(to_ring(f, S));
  std::vector<Vec> MJ = M;
  MJ.insert(MJ.end(), J.begin(), J.end());
  return image_log_order(ideal_span(S, MJ)) - image_log_order(ideal_span(S, J));
}

}  // namespace

TEST(Deformation, NoRelations) {
  Presentation P{Wn(3, 2), 1, 4, {}};
  EXPECT_EQ(ci_tangent_dims(P, 2), (TangentDims{1, 0}));
  EXPECT_TRUE(expected_size_ci_check(P, 1, 0).ok);
}

TEST(Deformation, LinearPartRemovesGenerator) {
  Presentation P{Wn(2, 2), 2, 4, {mono(2, {1, 0}) + mono(2, {0, 2})}};
  TangentDims d = ci_tangent_dims(P);
  EXPECT_EQ(d[0], 1);
  EXPECT_EQ(d[1], 0);
  EXPECT_EQ(cotangent_brute(P), 1);
  // p x is linear over W but vanishes mod p
  Presentation Q{Wn(2, 2), 2, 4, {mono(2, {1, 0}, 2) + mono(2, {0, 2})}};
  EXPECT_EQ(ci_tangent_dims(Q)[0], 2);
}

TEST(Deformation, QuadraticRelations) {
  Presentation P{Wn(3, 2), 2, 4, {mono(2, {2, 0}), mono(2, {1, 1}) + mono(2, {0, 2})}};
  EXPECT_EQ(ci_tangent_dims(P), (TangentDims{2, 2, 0, 0}));
}

TEST(Deformation, ExpectedSizeExamples) {
  Presentation P{Wn(2, 3), 1, 6, {mono(1, {2})}};
  ExpectedSize e = expected_size_ci_check(P, 1, 1);
  EXPECT_TRUE(e.ok) << e.witness;
  Presentation Q{Wn(2, 3), 1, 6, {mono(1, {1}, 2), mono(1, {2})}};
  ExpectedSize f = expected_size_ci_check(Q, 1, 2);
  EXPECT_FALSE(f.ok);
  EXPECT_FALSE(f.reg.regular);
  EXPECT_TRUE(f.reg.witness.has_value());
  EXPECT_THROW(ci_tangent_dims(Q), NotRegular);
  EXPECT_FALSE(expected_size_ci_check(P, 2, 1).ok);
  EXPECT_FALSE(expected_size_ci_check(P, 1, 0).ok);
}

TEST(Deformation, RejectsUnitConstant) {
  Presentation P{Wn(3, 1), 1, 3, {Poly::constant(1, 1) + mono(1, {2})}};
  EXPECT_THROW(validate(P), Error);
  Presentation Q{Wn(3, 1), 1, 3, {mono(2, {2, 0})}};
  EXPECT_THROW(validate(Q), Error);
}

TEST(Deformation, RandomCompleteIntersections) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const i64 p = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 3 : 5);
    const int s = 1 + trial % 3, t = trial % (s + 1);
    Presentation P = random_ci(rng, Wn(p, 2), s, t, 4);
    TangentDims d = ci_tangent_dims(P);
    EXPECT_EQ(d, (TangentDims{s, t, 0, 0})) << trial;
    EXPECT_EQ(cotangent_brute(P), s) << trial;
    EXPECT_TRUE(expected_size_ci_check(P, d[0], d[1]).ok) << trial;
  }
}

TEST(Deformation, InvariantUnderChangeOfVariables) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 15; ++trial) {
    Wn W(3, 2);
    const int s = 2 + trial % 2, t = 1 + trial % 2;
    Presentation P = random_ci(rng, W, s - 1, t, 4);
    // one more variable killed by a linear relation, so the linear parts matter
    P.s = s;
    for (auto& f : P.rel)
      for (auto& term : f.terms) term.first.push_back(0);
    P.rel.push_back(Poly::var(s, s - 1) + Poly::var(s, 0) * Poly::var(s, 0));
    TangentDims d = ci_tangent_dims(P);
    std::vector<Poly> im;
    for (int i = 0; i < s; ++i) {
      Poly g = Poly::var(s, i);
      if (i + 1 < s) g = g + Poly::var(s, i + 1).scaled(std::uniform_int_distribution<i64>(0, 8)(rng));
      g = g + Poly::var(s, 0) * Poly::var(s, i);
      im.push_back(g);
    }
    Presentation Q = substitute(P, im);
    EXPECT_EQ(ci_tangent_dims(Q), d) << trial;
    EXPECT_EQ(cotangent_brute(Q), d[0]) << trial;
  }
}

TEST(Deformation, ComparisonExamples) {
  EXPECT_TRUE(pi0_comparison_check({2, 1, 0}, {2, 1, 0}, 0).ok);
  EXPECT_FALSE(pi0_comparison_check({2, 1}, {2, 2}, 0).ok);
  EXPECT_FALSE(pi0_comparison_check({2, 1}, {1, 1}, 0).ok);
  EXPECT_FALSE(pi0_comparison_check({1, 2}, {1, 0}, 1).ok);
  EXPECT_FALSE(pi0_comparison_check({1, 2, 0}, {1, 1, 0}, 2).ok);
}

TEST(Deformation, ComparisonFromKoszulModels) {
  // derived quotient of W[[x]] by (x, x): pi_0 = W, pi_1 = W
  Presentation A{Wn(3, 2), 1, 4, {mono(1, {1}), mono(1, {1})}};
  KoszulComparison a = koszul_comparison(A);
  EXPECT_TRUE(a.stable);
  EXPECT_EQ(a.tR, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(a.tpi0, (std::vector<int>{0, 0}));
  EXPECT_EQ(a.hom_pi1, 1);
  EXPECT_TRUE(pi0_comparison_check(a.tR, a.tpi0, a.hom_pi1).ok);
  // (x^2, x^2): pi_1 = W[x]/x^2, one generator
  Presentation B{Wn(2, 2), 1, 5, {mono(1, {2}), mono(1, {2})}};
  KoszulComparison b = koszul_comparison(B);
  EXPECT_EQ(b.tR, (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(b.tpi0, (std::vector<int>{1, 1}));
  EXPECT_EQ(b.hom_pi1, 1);
  EXPECT_TRUE(pi0_comparison_check(b.tR, b.tpi0, b.hom_pi1).ok);
  // regular: nothing in pi_1 and equal tangent spaces
  std::mt19937_64 rng(9);
  Presentation C = random_ci(rng, Wn(2, 2), 2, 2, 4);
  KoszulComparison c = koszul_comparison(C);
  EXPECT_EQ(c.hom_pi1, 0);
  EXPECT_EQ(c.tpi0[1], c.tR[1]);
  EXPECT_TRUE(pi0_comparison_check(c.tR, c.tpi0, c.hom_pi1).ok);
}

TEST(Deformation, Numerology) {
  // dim B = dim G - dim U, h1 - h2 = dim B - delta
  Numerology n = wiles_numerology(7, 2, 9, 4, 2, 3, 1);
  EXPECT_FALSE(n.relations);
  Numerology m = wiles_numerology(5 - 1 + 2, 2, 9, 4, 2, 3, 1);
  EXPECT_TRUE(m.relations);
  EXPECT_EQ(m.value, 5);
  EXPECT_EQ(m.value, m.expected);
  Numerology z = wiles_numerology(3, 0, 5, 2, 4, 2, 0);
  EXPECT_TRUE(z.relations);
  EXPECT_EQ(z.value, 8);
  Numerology neg = wiles_numerology(0, 5, 3, 0, 0, 0, 0);
  EXPECT_TRUE(neg.negative);
  EXPECT_THROW(wiles_numerology(-1, 0, 0, 0, 0, 0, 0), Error);
  // linear in each argument with signs + - - + and r #Q
  const i64 base = wiles_numerology(4, 1, 6, 2, 1, 1, 0).value;
  EXPECT_EQ(wiles_numerology(5, 1, 6, 2, 1, 1, 0).value - base, 1);
  EXPECT_EQ(wiles_numerology(4, 2, 6, 2, 1, 1, 0).value - base, -1);
  EXPECT_EQ(wiles_numerology(4, 1, 7, 2, 1, 1, 0).value - base, -1);
  EXPECT_EQ(wiles_numerology(4, 1, 6, 3, 1, 1, 0).value - base, 1);
  EXPECT_EQ(wiles_numerology(4, 1, 6, 2, 1, 2, 0).value - base, 1);
}

TEST(Deformation, CommonFactorIsNotRegular) {
  // (xy, xz): the Koszul cycle (z, -y) is not a boundary
  Presentation P{Wn(5, 1), 3, 4, {mono(3, {1, 1, 0}), mono(3, {1, 0, 1})}};
  Regularity r = check_regular(P);
  EXPECT_FALSE(r.regular);
  EXPECT_EQ(r.method, "koszul");
  EXPECT_TRUE(r.witness.has_value());
  Presentation Q{Wn(5, 1), 3, 4, {mono(3, {1, 1, 0}), mono(3, {0, 0, 2})}};
  Regularity q = check_regular(Q);
  EXPECT_TRUE(q.regular);
  EXPECT_EQ(q.T, -1);
}
