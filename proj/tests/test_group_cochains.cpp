#include <gtest/gtest.h>

#include <map>

#include "dtw/group_cochains.hpp"
#include "support.hpp"

using namespace dtw;
using namespace dtw::testing;

namespace {

// rank over F_p by plain Gaussian elimination, independent of the Smith code
int rank_fp(const WMat& A) {
  const i64 p = A.R.p;
  std::vector<std::vector<i64>> m(A.rows, std::vector<i64>(A.cols));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) m[i][j] = A(i, j) % p;
  int r = 0;
  for (int c = 0; c < A.cols && r < A.rows; ++c) {
    int piv = -1;
    for (int i = r; i < A.rows; ++i)
      if (m[i][c]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    i64 inv = 1;
    for (i64 t = 1; t < p; ++t)
      if (t * m[r][c] % p == 1) inv = t;
    for (int i = 0; i < A.rows; ++i) {
      if (i == r || !m[i][c]) continue;
      i64 f = m[i][c] * inv % p;
      for (int j = c; j < A.cols; ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
    }
    ++r;
  }
  return r;
}

// every cochain of C^k(G, M) as a vector of residues
std::vector<Vec> all_cochains(const Cochains& C, int k) {
  std::vector<Vec> out{Vec()};
  for (int t = 0; t < C.tuples(k); ++t)
    for (int c = 0; c < C.M.rank(); ++c) {
      std::vector<Vec> next;
      for (const auto& v : out)
        for (i64 x = 0; x < C.M.modulus(c); ++x) {
          Vec w = v;
          w.push_back(x);
          next.push_back(w);
        }
      out = std::move(next);
    }
  return out;
}

i64 brute_cohomology_order(const Cochains& C, int k) {
  i64 z = 0;
  for (const auto& v : all_cochains(C, k))
    if (C.is_cocycle(k, v)) ++z;
  if (k == 0) return z;
  std::set<Vec> B;
  for (const auto& v : all_cochains(C, k - 1)) B.insert(C.M.reduce(C.d[k - 1].apply(v)));
  return z / i64(B.size());
}

i64 order(const Subquotient& H) { return order_of(H.divisors(), H.W().p); }

Vec random_cochain(std::mt19937_64& rng, const Cochains& C, int k) {
  Vec v(C.dims[k]);
  for (int i = 0; i < C.dims[k]; ++i) v[i] = i64(rng() % u_int64_t(C.M.modulus(i % C.M.rank())));
  return v;
}

// a random cocycle: random combination of cycle generators
Vec random_cocycle(std::mt19937_64& rng, const Cochains& C, int k) {
  Subquotient H(kernel_gens(WMat::hcat(C.d[k], C.rel[k + 1])).rows_range(0, C.dims[k]), WMat(C.dims[k], 0, C.M.W));
  Vec v(C.dims[k], 0);
  for (int g = 0; g < H.ngens(); ++g) {
    i64 c = i64(rng() % u_int64_t(C.M.W.q));
    Vec x = H.gen(g);
    for (int i = 0; i < C.dims[k]; ++i) v[i] = C.M.W.add(v[i], C.M.W.mul(c, x[i]));
  }
  return C.M.reduce(v);
}

GModule sign_module(const FiniteGroup& G, i64 p, int n, const std::vector<int>& sign) {
  GModule M = GModule::trivial(G, p, {n});
  for (int g = 0; g < G.order; ++g) M.act[g](0, 0) = sign[g] ? M.W.neg(1) : 1;
  M.validate(G);
  return M;
}

// sign character of the dihedral group: reflections act by -1
std::vector<int> dihedral_sign(int m) {
  std::vector<int> s(2 * m);
  for (int x = 0; x < 2 * m; ++x) s[x] = x / m;
  return s;
}

}  // namespace

TEST(Groups, Constructions) {
  EXPECT_EQ(FiniteGroup::cyclic(5).order, 5);
  EXPECT_TRUE(FiniteGroup::abelian_group({2, 2}).abelian());
  EXPECT_FALSE(FiniteGroup::dihedral(3).abelian());
  EXPECT_FALSE(FiniteGroup::quaternion().abelian());
  EXPECT_EQ(FiniteGroup::quaternion().order, 8);
  // Q8 has a unique element of order 2
  FiniteGroup Q = FiniteGroup::quaternion();
  int inv2 = 0;
  for (int g = 0; g < 8; ++g)
    if (g != Q.identity && Q.mul(g, g) == Q.identity) ++inv2;
  EXPECT_EQ(inv2, 1);
}

TEST(Groups, RejectsBadTables) {
  EXPECT_THROW(FiniteGroup::from_table({{0, 1}, {1, 1}}), Error);
  EXPECT_THROW(FiniteGroup::from_table({{0, 1, 2}, {1, 0, 0}, {2, 0, 1}}), Error);
}

TEST(Cochains, DimensionsCount) {
  Cochains C = cochain_complex(FiniteGroup::cyclic(3), GModule::trivial(FiniteGroup::cyclic(3), 3, {1}), 4);
  for (int i = 0; i <= 4; ++i) EXPECT_EQ(C.dims[i], ipow(3, i));
}

TEST(Cochains, DifferentialSquaresToZero) {
  std::vector<std::pair<FiniteGroup, GModule>> cases;
  FiniteGroup S3 = FiniteGroup::dihedral(3), D4 = FiniteGroup::dihedral(4), Q8 = FiniteGroup::quaternion();
  FiniteGroup Z4 = FiniteGroup::cyclic(4);
  cases.push_back({S3, sign_module(S3, 3, 1, dihedral_sign(3))});
  cases.push_back({D4, sign_module(D4, 2, 2, dihedral_sign(4))});
  cases.push_back({Q8, GModule::trivial(Q8, 2, {1, 1})});
  cases.push_back({Z4, GModule::trivial(Z4, 2, {2, 1})});
  for (const auto& [G, M] : cases) {
    Cochains C = cochain_complex(G, M, 3);
    for (int k = 0; k + 1 < C.top; ++k) {
      WMat dd = C.d[k + 1] * C.d[k];
      for (int j = 0; j < dd.cols; ++j) {
        Vec v = M.reduce(dd.col(j));
        EXPECT_TRUE(std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; }));
      }
    }
  }
}

TEST(Cochains, CyclicThreeMatchesIndependentRanks) {
  FiniteGroup G = FiniteGroup::cyclic(3);
  Cochains C = cochain_complex(G, GModule::trivial(G, 3, {1}), 5);
  for (int i = 0; i <= 4; ++i) {
    int rin = i ? rank_fp(C.d[i - 1]) : 0;
    int rout = rank_fp(C.d[i]);
    EXPECT_EQ(C.dims[i] - rin - rout, 1) << i;
    EXPECT_EQ(C.cohomology(i).divisors(), std::vector<int>{1}) << i;
  }
}

TEST(Cochains, BruteForceOrders) {
  struct Case {
    FiniteGroup G;
    GModule M;
    int kmax;
  };
  FiniteGroup Z2 = FiniteGroup::cyclic(2), Z3 = FiniteGroup::cyclic(3), V4 = FiniteGroup::abelian_group({2, 2});
  std::vector<Case> cases{
      {Z2, GModule::trivial(Z2, 2, {1}), 3},
      {Z3, GModule::trivial(Z3, 3, {1}), 2},
      {Z2, GModule::trivial(Z2, 2, {2, 1}), 2},
      {Z2, sign_module(Z2, 2, 2, {0, 1}), 2},
      {Z3, sign_module(Z3, 2, 1, {0, 0, 0}), 2},
      {V4, GModule::trivial(V4, 2, {1}), 2},
  };
  for (const auto& c : cases) {
    Cochains C = cochain_complex(c.G, c.M, c.kmax + 1);
    for (int k = 0; k <= c.kmax; ++k) EXPECT_EQ(order(C.cohomology(k)), brute_cohomology_order(C, k)) << k;
  }
}

TEST(Cochains, H0IsFixedPoints) {
  FiniteGroup D4 = FiniteGroup::dihedral(4);
  GModule M = sign_module(D4, 2, 2, dihedral_sign(4));
  Cochains C = cochain_complex(D4, M, 1);
  i64 fixed = 0;
  for (i64 m = 0; m < 4; ++m) {
    bool ok = true;
    for (int g = 0; g < D4.order; ++g) ok = ok && M.reduce(M.act[g].apply({m}))[0] == m;
    fixed += ok;
  }
  EXPECT_EQ(order(C.cohomology(0)), fixed);
}

TEST(Cochains, H1TrivialIsHom) {
  for (auto [G, p, n] : std::vector<std::tuple<FiniteGroup, i64, int>>{
           {FiniteGroup::cyclic(4), 2, 1}, {FiniteGroup::cyclic(4), 2, 3}, {FiniteGroup::abelian_group({2, 2}), 2, 2},
           {FiniteGroup::dihedral(3), 3, 1}, {FiniteGroup::dihedral(3), 2, 1}, {FiniteGroup::quaternion(), 2, 2}}) {
    Wn W(p, n);
    // enumerate maps G -> Z/p^n that are homomorphisms
    i64 homs = 0;
    std::vector<i64> f(G.order, 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == G.order) {
        bool ok = true;
        for (int a = 0; a < G.order && ok; ++a)
          for (int b = 0; b < G.order && ok; ++b) ok = f[G.mul(a, b)] == W.add(f[a], f[b]);
        homs += ok;
        return;
      }
      for (i64 x = 0; x < W.q; ++x) {
        f[i] = x;
        rec(i + 1);
      }
    };
    rec(0);
    Cochains C = cochain_complex(G, GModule::trivial(G, p, {n}), 2);
    EXPECT_EQ(order(C.cohomology(1)), homs);
  }
}

TEST(Cochains, CyclicPeriodicity) {
  for (auto [m, p, n] : std::vector<std::tuple<int, i64, int>>{{4, 2, 1}, {4, 2, 2}, {2, 2, 2}, {6, 3, 1}}) {
    FiniteGroup G = FiniteGroup::cyclic(m);
    int top = m >= 6 ? 4 : 5;
    Cochains C = cochain_complex(G, GModule::trivial(G, p, {n}), top);
    EXPECT_EQ(C.cohomology(1).divisors(), C.cohomology(3).divisors()) << m;
    if (top == 5) EXPECT_EQ(C.cohomology(2).divisors(), C.cohomology(4).divisors()) << m;
  }
}

TEST(Cup, WithZeroCochainIsScalar) {
  FiniteGroup G = FiniteGroup::cyclic(4);
  GModule M = GModule::trivial(G, 2, {3});
  std::mt19937_64 rng(3);
  Cochains C = cochain_complex(G, M, 2);
  Vec b = random_cochain(rng, C, 2);
  Vec a{5};
  Vec ab = cup(G, M, M, M, ring_pairing(M), 0, a, 2, b);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(ab[i], M.W.mul(5, b[i]));
}

TEST(Cup, SquareOfNonzeroClassZ2) {
  FiniteGroup G = FiniteGroup::cyclic(2);
  GModule M = GModule::trivial(G, 2, {1});
  Cochains C = cochain_complex(G, M, 3);
  Vec t{0, 1};
  ASSERT_TRUE(C.is_cocycle(1, t));
  Vec tt = cup(G, M, M, M, ring_pairing(M), 1, t, 1, t);
  EXPECT_TRUE(C.is_cocycle(2, tt));
  // not d of any 1-cochain, by enumeration
  for (const auto& c : all_cochains(C, 1)) EXPECT_NE(M.reduce(C.d[1].apply(c)), tt);
  EXPECT_FALSE(C.is_coboundary(2, tt));
}

TEST(Cup, LeibnizOnRandomPairs) {
  FiniteGroup S3 = FiniteGroup::dihedral(3);
  GModule Ms = sign_module(S3, 3, 1, dihedral_sign(3));
  GModule Mt = GModule::trivial(S3, 3, {1});
  Cochains Cs = cochain_complex(S3, Ms, 3), Ct = cochain_complex(S3, Mt, 3);
  CupPairing P{1, 1, 1, {1}};
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int pa = int(rng() % 3), pb = int(rng() % (3 - pa));
    Vec a = random_cochain(rng, Cs, pa), b = random_cochain(rng, Cs, pb);
    Vec lhs = Mt.reduce(Ct.d[pa + pb].apply(cup(S3, Ms, Ms, Mt, P, pa, a, pb, b)));
    Vec r1 = cup(S3, Ms, Ms, Mt, P, pa + 1, Ms.reduce(Cs.d[pa].apply(a)), pb, b);
    Vec r2 = cup(S3, Ms, Ms, Mt, P, pa, a, pb + 1, Ms.reduce(Cs.d[pb].apply(b)));
    for (std::size_t i = 0; i < lhs.size(); ++i)
      ASSERT_EQ(lhs[i], pa % 2 ? Mt.W.sub(r1[i], r2[i]) : Mt.W.add(r1[i], r2[i])) << trial;
  }
}

TEST(Cup, Associative) {
  FiniteGroup G = FiniteGroup::dihedral(4);
  GModule M = sign_module(G, 2, 2, std::vector<int>(8, 0));
  Cochains C = cochain_complex(G, M, 3);
  CupPairing P = ring_pairing(M);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Vec a = random_cochain(rng, C, 1), b = random_cochain(rng, C, 1), c = random_cochain(rng, C, 1);
    Vec l = cup(G, M, M, M, P, 2, cup(G, M, M, M, P, 1, a, 1, b), 1, c);
    Vec r = cup(G, M, M, M, P, 1, a, 2, cup(G, M, M, M, P, 1, b, 1, c));
    EXPECT_EQ(l, r);
  }
}

TEST(Restrict, IdentityAndTrivialSubgroup) {
  FiniteGroup G = FiniteGroup::dihedral(3);
  GModule M = sign_module(G, 3, 1, dihedral_sign(3));
  Cochains C = cochain_complex(G, M, 3);
  std::vector<int> id(6);
  for (int i = 0; i < 6; ++i) id[i] = i;
  std::mt19937_64 rng(2);
  Vec c = random_cochain(rng, C, 2);
  EXPECT_EQ(restrict_cochain(G, G, id, M, 2, c), c);
  FiniteGroup T = FiniteGroup::trivial();
  std::vector<int> e{G.identity};
  GModule MT = restrict_module(M, T, e);
  Cochains CT = cochain_complex(T, MT, 3);
  for (int k = 1; k <= 2; ++k) {
    Vec z = random_cocycle(rng, C, k);
    Vec rz = restrict_cochain(G, T, e, M, k, z);
    EXPECT_TRUE(CT.is_cocycle(k, rz));
    EXPECT_TRUE(CT.is_coboundary(k, rz));
  }
}

TEST(Restrict, CyclicTwoInsideFour) {
  FiniteGroup Z4 = FiniteGroup::cyclic(4), Z2 = FiniteGroup::cyclic(2);
  std::vector<int> phi{0, 2};
  GModule M = GModule::trivial(Z4, 2, {1});
  GModule MR = restrict_module(M, Z2, phi);
  Cochains C4 = cochain_complex(Z4, M, 3), C2 = cochain_complex(Z2, MR, 3);
  // degree one: t(g) = g mod 2 restricts to zero since t(2) = 2 t(1)
  Vec t{0, 1, 0, 1};
  ASSERT_TRUE(C4.is_cocycle(1, t));
  EXPECT_TRUE(C2.is_coboundary(1, restrict_cochain(Z4, Z2, phi, M, 1, t)));
  // degree two: the generator of H^2 restricts to the generator, checked by enumeration
  Subquotient H2 = C4.cohomology(2);
  ASSERT_EQ(H2.ngens(), 1);
  Vec r = restrict_cochain(Z4, Z2, phi, M, 2, H2.gen(0));
  for (const auto& c : all_cochains(C2, 1)) EXPECT_NE(MR.reduce(C2.d[1].apply(c)), r);
  // Z/2 inside Z/2 x Z/2 as the first factor: restriction of the first projection is nonzero on H^1
  FiniteGroup V = FiniteGroup::abelian_group({2, 2});
  std::vector<int> incl{0, 2};
  GModule MV = GModule::trivial(V, 2, {1});
  Cochains CV = cochain_complex(V, MV, 2);
  Vec pr{0, 0, 1, 1};
  ASSERT_TRUE(CV.is_cocycle(1, pr));
  EXPECT_FALSE(C2.is_coboundary(1, restrict_cochain(V, Z2, incl, MV, 1, pr)));
}

TEST(Restrict, CommutesWithDAndComposes) {
  FiniteGroup Z8 = FiniteGroup::cyclic(8), Z4 = FiniteGroup::cyclic(4), Z2 = FiniteGroup::cyclic(2);
  std::vector<int> a{0, 2, 4, 6}, b{0, 2}, ab{0, 4};
  GModule M = GModule::trivial(Z8, 2, {2});
  GModule M4 = restrict_module(M, Z4, a);
  Cochains C8 = cochain_complex(Z8, M, 3), C4 = cochain_complex(Z4, M4, 3);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 2; ++k) {
    Vec c = random_cochain(rng, C8, k);
    EXPECT_EQ(M4.reduce(C4.d[k].apply(restrict_cochain(Z8, Z4, a, M, k, c))),
              restrict_cochain(Z8, Z4, a, M, k + 1, M.reduce(C8.d[k].apply(c))));
    EXPECT_EQ(restrict_cochain(Z4, Z2, b, M4, k, restrict_cochain(Z8, Z4, a, M, k, c)),
              restrict_cochain(Z8, Z2, ab, M, k, c));
  }
  EXPECT_THROW(restrict_cochain(Z8, Z4, {0, 1, 2, 3}, M, 1, Vec(8, 0)), Error);
}

TEST(Conjugate, IdentityAndClassFixed) {
  std::mt19937_64 rng(4);
  FiniteGroup S3 = FiniteGroup::dihedral(3);
  GModule M = sign_module(S3, 3, 1, dihedral_sign(3));
  Cochains C = cochain_complex(S3, M, 3);
  Vec c = random_cochain(rng, C, 2);
  EXPECT_EQ(conjugate(S3, M, S3.identity, 2, c), c);
  for (int trial = 0; trial < 5; ++trial)
    for (int k = 1; k <= 2; ++k) {
      Vec z = random_cocycle(rng, C, k);
      for (int g = 0; g < S3.order; ++g) {
        Vec w = conjugate(S3, M, g, k, z);
        EXPECT_TRUE(C.is_cocycle(k, w));
        Vec diff(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) diff[i] = M.W.sub(w[i], z[i]);
        EXPECT_TRUE(C.is_coboundary(k, diff));
      }
    }
  // abelian group with a nontrivial module
  FiniteGroup Z4 = FiniteGroup::cyclic(4);
  GModule N = sign_module(Z4, 2, 2, {0, 1, 0, 1});
  Cochains D = cochain_complex(Z4, N, 3);
  Vec z = random_cocycle(rng, D, 2);
  for (int g = 0; g < 4; ++g) {
    Vec w = conjugate(Z4, N, g, 2, z);
    Vec diff(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) diff[i] = N.W.sub(w[i], z[i]);
    EXPECT_TRUE(D.is_coboundary(2, diff));
  }
}

TEST(Conjugate, CommutesWithD) {
  std::mt19937_64 rng(8);
  FiniteGroup Q = FiniteGroup::quaternion();
  Cochains C = cochain_complex(Q, GModule::trivial(Q, 2, {1}), 3);
  Vec c = random_cochain(rng, C, 1);
  for (int g = 0; g < 8; ++g)
    EXPECT_EQ(C.M.reduce(C.d[1].apply(conjugate(Q, C.M, g, 1, c))),
              conjugate(Q, C.M, g, 2, C.M.reduce(C.d[1].apply(c))));
}

TEST(Dual, EvaluationIsEquivariant) {
  FiniteGroup D4 = FiniteGroup::dihedral(4);
  // Z/4 + Z/2 with reflections swapping signs on the first coordinate and adding it to the second
  WMat r = WMat::identity(2, Wn(2, 2));
  WMat s(2, 2, Wn(2, 2));
  s(0, 0) = 3;
  s(1, 0) = 1;
  s(1, 1) = 1;
  GModule M = GModule::from_generators(D4, 2, {2, 1}, {{1, r}, {4, s}});
  std::vector<i64> chi(8);
  for (int g = 0; g < 8; ++g) chi[g] = g / 4 ? 3 : 1;
  DualData D = dualize(D4, M, chi);
  for (int g = 0; g < 8; ++g)
    for (i64 m0 = 0; m0 < 4; ++m0)
      for (i64 m1 = 0; m1 < 2; ++m1)
        for (i64 y0 = 0; y0 < 4; ++y0)
          for (i64 y1 = 0; y1 < 2; ++y1) {
            auto ev = [&](const Vec& m, const Vec& y) {
              return cup(FiniteGroup::trivial(), restrict_module(M, FiniteGroup::trivial(), {0}),
                         restrict_module(D.dual, FiniteGroup::trivial(), {0}),
                         restrict_module(D.mu, FiniteGroup::trivial(), {0}), D.eval, 0, m, 0, y)[0];
            };
            Vec m{m0, m1}, y{y0, y1};
            i64 lhs = ev(M.reduce(M.act[g].apply(m)), D.dual.reduce(D.dual.act[g].apply(y)));
            EXPECT_EQ(lhs, D.mu.W.mul(chi[g], ev(m, y)));
          }
}

TEST(Cochains, BudgetGuard) {
  FiniteGroup G = FiniteGroup::cyclic(8);
  EXPECT_THROW(cochain_complex(G, GModule::trivial(G, 2, {1}), 6, 100000), BudgetError);
}
