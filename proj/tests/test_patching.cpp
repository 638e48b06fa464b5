#include <gtest/gtest.h>

#include "dtw/patching.hpp"

using namespace dtw;

namespace {

int binom(int a, int b) {
  if (b < 0 || b > a) return 0;
  int r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// every thread, by walking down from each top element
std::vector<std::vector<int>> all_threads(const FiniteInverseSystem& sys) {
  std::vector<std::vector<int>> out;
  const int L = int(sys.size.size());
  for (int top = 0; top < sys.size[L - 1]; ++top) {
    std::vector<int> x(L);
    x[L - 1] = top;
    for (int k = L - 2; k >= 0; --k) x[k] = sys.map[k][x[k + 1]];
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_zero_hom(const WMat& M, const std::vector<int>& e) {
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j)
      if (M(i, j) % (e[i] >= M.R.n ? M.R.q : M.R.pp(e[i])) != 0) return false;
  return true;
}

}  // namespace

TEST(Patching, LevelComplexes) {
  PatchScenario a{3, 2, 0, {1, 2}, 3, {}};
  LevelDatum d = build_level_complex(a, 2);
  EXPECT_EQ(d.pi.at(0), std::vector<int>{2});
  for (int i = 1; i <= 3; ++i) EXPECT_TRUE(d.pi.at(i).empty()) << i;
  // one killed cyclic factor: W_n in every degree
  PatchScenario b{2, 1, 1, {1, 2, 3}, 4, {}};
  for (int n : {1, 2, 3}) {
    LevelDatum e = build_level_complex(b, n);
    for (int i = 0; i <= 4; ++i) EXPECT_EQ(e.pi.at(i), std::vector<int>{n}) << n << " " << i;
  }
  PatchScenario c{2, 3, 2, {1}, 3, {}};
  LevelDatum f = build_level_complex(c, 1);
  for (int i = 0; i <= 3; ++i) EXPECT_EQ(f.pi.rank(i), i + 1);
  EXPECT_THROW(build_level_complex(c, 2), Error);
}

TEST(Patching, ScenarioValidation) {
  EXPECT_THROW(validate(PatchScenario{4, 1, 0, {1}, 2, {}}), Error);
  EXPECT_THROW(validate(PatchScenario{2, 1, 2, {1}, 2, {}}), Error);
  EXPECT_THROW(validate(PatchScenario{2, 1, 1, {2, 1}, 2, {}}), Error);
  EXPECT_THROW(validate(PatchScenario{2, 1, 1, {1, 2}, 2, {{Perturbation::Kind::Zero, 1, 0}}}), Error);
  EXPECT_NO_THROW(validate(PatchScenario{2, 1, 1, {1, 2}, 2, {{Perturbation::Kind::Zero, 0, 2}}}));
}

TEST(Patching, TransitionsCompose) {
  PatchScenario sc{2, 1, 1, {1, 2, 3}, 3, {}};
  Transition id = transition(sc, 2, 2);
  for (int i = 0; i <= 3; ++i) EXPECT_TRUE(id.on_homology[i] == WMat::identity(id.on_homology[i].rows, Wn(2, 2)));
  Transition e31 = transition(sc, 3, 1), e32 = transition(sc, 3, 2), e21 = transition(sc, 2, 1);
  LevelDatum bottom = build_level_complex(sc, 1);
  for (int i = 0; i <= 3; ++i) {
    WMat comp = compose_on_homology(e21, e32, i);
    WMat diff = comp - e31.on_homology[i];
    EXPECT_TRUE(is_zero_hom(diff, bottom.pi.at(i))) << i;
    // onto in degrees 0 and 1, zero from degree 2 on
    Smith S = smith(e31.on_homology[i]);
    EXPECT_EQ(S.rank, i < 2 ? 1 : 0) << i;
  }
  EXPECT_THROW(compose_on_homology(e32, e21, 0), Error);
  EXPECT_THROW(transition(sc, 1, 2), Error);
}

TEST(Patching, LimitIsExterior) {
  PatchScenario sc{3, 2, 1, {1, 2, 3}, 3, {}};
  LimitReport r = limit_pi(sc);
  ASSERT_TRUE(r.conclusive()) << r.note;
  EXPECT_EQ(r.limit.ranks, (std::vector<int>{1, 1, 0, 0}));
  EXPECT_EQ(r.koszul_ranks, r.limit.ranks);
  EXPECT_TRUE(r.ok()) << r.limit_exterior.reason << " " << r.koszul_exterior.reason;
  EXPECT_EQ(r.euler, 0);
  for (auto [p, s, delta] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {2, 3, 3}, {5, 1, 0}, {3, 3, 2}}) {
    LimitReport q = limit_pi(PatchScenario{p, s, delta, {1, 2, 3}, delta + 1, {}});
    EXPECT_TRUE(q.ok()) << p << s << delta << " " << q.limit_exterior.reason;
    for (int i = 0; i <= delta + 1; ++i) EXPECT_EQ(q.limit.ranks[i], binom(delta, i));
    EXPECT_EQ(q.euler, delta == 0 ? 1 : 0);
  }
}

TEST(Patching, TooFewLevelsIsInconclusive) {
  LimitReport r = limit_pi(PatchScenario{2, 1, 1, {1, 2}, 2, {}});
  EXPECT_FALSE(r.conclusive());
  EXPECT_FALSE(r.ok());
}

TEST(Patching, PerturbationsAreSeen) {
  PatchScenario z{2, 1, 1, {1, 2, 3}, 3, {{Perturbation::Kind::Zero, 0, 1}}};
  LimitReport a = limit_pi(z);
  EXPECT_EQ(a.limit.ranks[1], 0);
  EXPECT_FALSE(a.ok());
  PatchScenario t{3, 2, 1, {1, 2, 3}, 3, {{Perturbation::Kind::TimesP, 1, 0}}};
  LimitReport b = limit_pi(t);
  EXPECT_EQ(b.limit.ranks[0], 0);
  EXPECT_FALSE(b.pi0_ok && b.ranks_match);
}

TEST(Patching, GroupAlgebraIdentification) {
  for (i64 p : {2, 3, 5})
    for (int n : {1, 2})
      for (int s : {1, 2}) {
        if (p == 5 && n == 2 && s == 2) continue;
        GroupAlgebraIso g = group_algebra_identification(p, n, s);
        EXPECT_TRUE(g.ok) << p << n << s << g.failure;
        EXPECT_EQ(g.dim, int(std::pow(p, n * s)));
      }
  GroupAlgebraIso big = group_algebra_identification(3, 2, 2, 40, 3);
  EXPECT_TRUE(big.ok) << big.failure;
  EXPECT_FALSE(big.exhaustive);
  EXPECT_EQ(big.samples, 40);
}

TEST(Patching, CompactSelectExamples) {
  FiniteInverseSystem constant{{1, 1, 1}, {{0}, {0}}};
  EXPECT_EQ(*compact_select(constant), (std::vector<int>{0, 0, 0}));
  FiniteInverseSystem swap{{2, 2, 2}, {{1, 0}, {1, 0}}};
  auto x = compact_select(swap);
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, (std::vector<int>{0, 1, 0}));
  // images shrink: only 2 survives from the top
  FiniteInverseSystem shrink{{3, 2, 1}, {{2, 2}, {1}}};
  EXPECT_EQ(eventual_images(shrink)[0], std::vector<int>{2});
  EXPECT_EQ(*compact_select(shrink), (std::vector<int>{2, 1, 0}));
  FiniteInverseSystem empty{{2, 0, 0}, {{}, {}}};
  EXPECT_FALSE(compact_select(empty));
  EXPECT_THROW(validate(FiniteInverseSystem{{2, 2}, {{0, 2}}}), Error);
  EXPECT_THROW(validate(FiniteInverseSystem{{2, 2}, {{0}}}), Error);
  EXPECT_FALSE(is_thread(swap, {0, 0, 0}));
}

TEST(Patching, CompactSelectAgainstEnumeration) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int len = 1 + trial % 8;
    FiniteInverseSystem sys = random_system(rng, len, 5, trial % 5 == 0);
    auto threads = all_threads(sys);
    auto x = compact_select(sys);
    ASSERT_EQ(bool(x), !threads.empty()) << trial;
    if (x) {
      EXPECT_TRUE(is_thread(sys, *x));
      EXPECT_EQ(*x, threads.front()) << trial;
    }
  }
}

TEST(Patching, CgExamples) {
  Ring R = Ring::make({3, 1, {1}});
  ChainComplex D(R, 1, {2});
  CgReport a = cg_check({D, 1, 1, R, natural_action(D, 1)});
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.generators, 2);
  // k = R / m over R: one generator, relations m
  Ring k = Ring::scalars(Wn(3, 1));
  ChainComplex E(k, 0, {1});
  CgReport b = cg_check({E, 0, 0, R, {WMat::identity(1, Wn(3, 1))}});
  EXPECT_FALSE(b.pass);
  EXPECT_EQ(b.diagnosis, "freeness");
  EXPECT_EQ(b.generators, 1);
  EXPECT_EQ(b.tor1, 1);
  // class in degree q + 1
  ChainComplex F(R, 0, {1, 1});
  CgReport c = cg_check({F, 0, 1, R, natural_action(F, 0)});
  EXPECT_EQ(c.diagnosis, "concentration");
  EXPECT_EQ(c.nonzero_degrees, (std::vector<int>{0, 1}));
  EXPECT_THROW(cg_check({F, 1, 1, R, natural_action(F, 1)}), Error);
  // sigma acting by 2 does not give a ring action of F_3[Z/3]
  EXPECT_THROW(cg_check({E, 0, 0, R, {WMat::identity(1, Wn(3, 1)).scaled(2)}}), Error);
}

TEST(Patching, CgRandomInstances) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    CgKind kind = CgKind(trial % 3);
    CgInput in = random_cg_instance(rng, kind);
    CgReport r = cg_check(in);
    const char* want = kind == CgKind::Pass ? "" : (kind == CgKind::Concentration ? "concentration" : "freeness");
    EXPECT_EQ(r.diagnosis, want) << trial << " " << r.detail;
    if (kind == CgKind::Freeness) {
      // |H| < |R|^mu exactly when a relation survives
      Subquotient H = homology_at(in.D, in.q);
      int logH = 0;
      for (int e : H.divisors()) logH += e;
      EXPECT_LT(logH, r.generators * in.R.log_count()) << trial;
      EXPECT_GT(r.tor1, 0) << trial;
    }
  }
}

TEST(Patching, FreeVariablesLeaveTorUnchanged) {
  for (i64 p : {2, 3})
    for (int n : {1, 2})
      for (int r : {1, 2}) {
        FreeVariables fv = free_variables_check(p, 1, 1, r, n, 3);
        EXPECT_TRUE(fv.equal) << p << n << r;
        for (int i = 0; i <= 3; ++i) EXPECT_EQ(fv.before.at(i), std::vector<int>{n});
      }
  FreeVariables two = free_variables_check(2, 2, 2, 1, 1, 2);
  EXPECT_TRUE(two.equal);
  EXPECT_EQ(two.after.rank(2), 3);
}
