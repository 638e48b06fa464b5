#include <gtest/gtest.h>

#include "dtw/dold_kan.hpp"
#include "support.hpp"

using namespace dtw;

namespace {

// Gamma of a random complex moved by random levelwise automorphisms, so N has no preferred basis
SimplicialModule random_simplicial(std::mt19937_64& rng, Wn W, int D) {
  ChainComplex C = dtw::testing::random_complex(rng, W, 0, D, 1);
  SimplicialModule X = dk_inverse(C, D);
  std::vector<WMat> phi, inv;
  for (int m = 0; m <= D; ++m) {
    auto [a, b] = dtw::testing::random_invertible(rng, X.rank[m], W);
    phi.push_back(a);
    inv.push_back(b);
  }
  return transport(X, phi, inv);
}

ChainComplex point_complex(Wn W, int n) {
  ChainComplex C(Ring::scalars(W), n, {1});
  return C;
}

bool injective(const WMat& A) { return A.cols == 0 || image_log_order(A) == A.R.n * A.cols; }

}  // namespace

TEST(DoldKan, ConstantModuleHasNInDegreeZero) {
  Wn W(3, 2);
  SimplicialModule X = constant_module(W, 2, 4);
  ASSERT_TRUE(validate(X).ok);
  Normalized N = normalized_chains(X);
  EXPECT_EQ(N.N.rank(0), 2);
  for (int m = 1; m <= 4; ++m) EXPECT_EQ(N.N.rank(m), 0) << m;
}

TEST(DoldKan, SphereModuleIsConcentrated) {
  Wn W(2, 1);
  for (int n = 0; n <= 3; ++n) {
    SimplicialModule X = sphere_module(W, n, 5);
    ASSERT_TRUE(validate(X).ok) << validate(X).what;
    Normalized N = normalized_chains(X);
    for (int m = 0; m <= 5; ++m) EXPECT_EQ(N.N.rank(m), m == n ? 1 : 0) << n << " " << m;
    // and Gamma of the point complex is the sphere module, matrix for matrix
    SimplicialModule G = dk_inverse(point_complex(W, n), 5);
    EXPECT_EQ(G.rank, X.rank);
    for (int m = 1; m <= 5; ++m)
      for (int i = 0; i <= m; ++i) EXPECT_EQ(G.face[m][i].a, X.face[m][i].a);
  }
}

TEST(DoldKan, GammaOfDegreeZeroIsConstant) {
  Wn W(5, 1);
  SimplicialModule G = dk_inverse(point_complex(W, 0), 3);
  SimplicialModule K = constant_module(W, 1, 3);
  for (int m = 1; m <= 3; ++m)
    for (int i = 0; i <= m; ++i) EXPECT_EQ(G.face[m][i].a, K.face[m][i].a);
}

TEST(DoldKan, MooreAndNormalizedHomologyAgree) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Wn W(trial % 2 ? 2 : 3, 1 + trial % 2);
    const int D = 2 + trial % 4;
    SimplicialModule X = random_simplicial(rng, W, D);
    GradedModule hn = homology(normalized_chains(X).N), hm = homology(moore_complex(X));
    // the top level is a window on both sides and differs by degenerate cycles
    for (int j = 0; j < D; ++j) EXPECT_EQ(hn.at(j), hm.at(j)) << trial << " " << j;
  }
}

TEST(DoldKan, NGammaIsIdentity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Wn W(trial % 3 == 0 ? 5 : 2, 1 + trial % 2);
    const int D = 1 + trial % 6;
    ChainComplex C = dtw::testing::random_complex(rng, W, 0, D, 1);
    SimplicialCheck c = check_n_gamma(C, D);
    EXPECT_TRUE(c.ok) << trial << " " << c.what;
  }
}

TEST(DoldKan, GammaNIsIsomorphicToIdentity) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Wn W(3, 1 + trial % 2);
    const int D = 1 + trial % 5;
    SimplicialModule X = random_simplicial(rng, W, D);
    GammaN g = gamma_n_iso(X);
    EXPECT_TRUE(g.simplicial) << trial;
    EXPECT_TRUE(g.invertible) << trial;
  }
  GammaN s = gamma_n_iso(sphere_module(Wn(2, 1), 2, 4));
  EXPECT_TRUE(s.simplicial && s.invertible);
}

TEST(DoldKan, ViolationsAndRangeErrors) {
  SimplicialModule X = sphere_module(Wn(3, 1), 1, 3);
  X.face[2][1](0, 0) = 2;
  EXPECT_FALSE(validate(X).ok);
  EXPECT_THROW(normalized_chains(X), Error);
  ChainComplex C(Ring::scalars(Wn(3, 1)), 0, {1, 1, 1, 1});
  EXPECT_THROW(dk_inverse(C, 2), Error);
  ChainComplex Cn(Ring::scalars(Wn(3, 1)), -1, {1, 1});
  EXPECT_THROW(dk_inverse(Cn, 3), Error);
}

TEST(DoldKan, NormalizationPreservesInjections) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    Wn W(2, 2);
    const int D = 2 + trial % 3;
    ChainComplex C = dtw::testing::random_complex(rng, W, 0, D - 1, 1);
    // inclusion of C into cone(id_C), b -> (0, b)
    ChainComplex K = cone(identity_map(C));
    ChainMap g{C, K, {}};
    for (int i = C.lo; i <= C.hi; ++i) {
      WMat f(K.rank(i), C.rank(i), W);
      for (int t = 0; t < C.rank(i); ++t) f(C.rank(i - 1) + t, t) = 1;
      g.f.push_back(RMat::from_wmat(f, C.S));
    }
    ASSERT_TRUE(validate(g).ok);
    SimplicialModule X = dk_inverse(C, D), Y = dk_inverse(K, D);
    SimplicialMap G = dk_inverse_map(g, D);
    ASSERT_TRUE(is_simplicial(G, X, Y));
    for (int m = 0; m <= D; ++m) EXPECT_TRUE(injective(G.f[m]));
    ChainMap n = normalized_map(G, normalized_chains(X), normalized_chains(Y));
    EXPECT_TRUE(validate(n).ok);
    for (int m = 0; m <= D; ++m) EXPECT_TRUE(injective(n.at(m).expand())) << trial << " " << m;
  }
}

TEST(DoldKan, SquareZeroRingLaws) {
  Wn W(3, 1);
  for (int n = 0; n <= 2; ++n) {
    SquareZeroRing R = square_zero(sphere_module(W, n, 3));
    SimplicialCheck c = check_ring_laws(R);
    EXPECT_TRUE(c.ok) << c.what;
  }
  std::mt19937_64 rng(3);
  SquareZeroRing R = square_zero(random_simplicial(rng, W, 3));
  EXPECT_TRUE(check_ring_laws(R).ok);
}

TEST(DoldKan, DualNumbersInDegreeZero) {
  for (i64 p : {2, 3, 5}) {
    Wn W(p, 1);
    GradedAlgebra A = homotopy_ring(square_zero(constant_module(W, 1, 3)), 1);
    ASSERT_EQ(A.rank(0), 2);
    EXPECT_EQ(A.rank(1), 0);
    // k[e]/e^2: exactly p elements square to zero, and the unit acts as one
    int nil = 0;
    for (const auto& x : dtw::testing::all_vectors(W, 2))
      if (A.mul(0, x, 0, x) == Vec(2, 0)) ++nil;
    EXPECT_EQ(nil, p);
    Vec one;
    for (const auto& x : dtw::testing::all_vectors(W, 2)) {
      bool unit = true;
      for (const auto& y : dtw::testing::all_vectors(W, 2)) unit = unit && A.mul(0, x, 0, y) == y;
      if (unit) one = x;
    }
    EXPECT_FALSE(one.empty());
  }
}

TEST(DoldKan, ShiftedSquareZeroHomotopy) {
  for (i64 p : {2, 3}) {
    Wn W(p, 1);
    for (int n = 1; n <= 2; ++n) {
      GradedAlgebra A = homotopy_ring(square_zero(sphere_module(W, n, 2 * n + 1)), 2 * n);
      EXPECT_EQ(A.rank(0), 1);
      for (int j = 1; j <= 2 * n; ++j) EXPECT_EQ(A.rank(j), j == n ? 1 : 0) << n << " " << j;
      EXPECT_EQ(A.H[n].divisors(), std::vector<int>{1});
      Vec x = A.unit_coords(n, 0), one = A.unit_coords(0, 0);
      // the unit class of degree 0 acts invertibly, positive classes multiply to zero
      EXPECT_NE(A.mul(0, one, n, x), Vec(1, 0));
      EXPECT_EQ(A.mul(n, x, n, x), Vec(A.rank(2 * n), 0));
    }
  }
}
