#include "suites.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>

#include "dtw/deformation.hpp"
#include "dtw/dold_kan.hpp"
#include "dtw/generators.hpp"
#include "dtw/group_cochains.hpp"
#include "dtw/local_conditions.hpp"
#include "dtw/patching.hpp"

namespace dtw::suites {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIPPED";
  }
  return "?";
}

namespace {

int binom(int a, int b) {
  if (b < 0 || b > a) return 0;
  int r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

Vec vadd(const Wn& W, const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = W.add(a[i], b[i]);
  return c;
}

Vec combo(const Wn& W, const WMat& A, const Vec& c) {
  Vec x(A.rows, 0);
  for (int j = 0; j < A.cols; ++j)
    for (int i = 0; i < A.rows; ++i) x[i] = W.add(x[i], W.mul(c[j], A(i, j)));
  return x;
}

// ---- limit scenarios, computed once and shared by the first two criteria ----

struct LimitCase {
  i64 p;
  int s, delta;
  LimitReport rep;
};

const std::vector<LimitCase>& limit_cases() {
  static std::once_flag once;
  static std::vector<LimitCase> cases;
  std::call_once(once, [] {
    for (i64 p : {2, 3, 5})
      for (int s = 1; s <= 4; ++s)
        for (int delta = 0; delta <= std::min(s, 3); ++delta)
          cases.push_back({p, s, delta, limit_pi(PatchScenario{p, s, delta, {1, 2, 3}, delta + 2, {}})});
  });
  return cases;
}

Outcome limit_exterior(std::uint64_t) {
  int n = 0;
  for (const auto& c : limit_cases()) {
    const auto& r = c.rep;
    auto tag = fmt::format("p={} s={} delta={}", c.p, c.s, c.delta);
    if (!r.conclusive()) return {false, tag + ": not certified: " + r.note};
    for (int i = 0; i <= c.delta; ++i)
      if (r.limit.ranks[i] != binom(c.delta, i))
        return {false, fmt::format("{}: rank {} in degree {}, expected {}", tag, r.limit.ranks[i], i, binom(c.delta, i))};
    if (!r.ranks_match) return {false, tag + ": limit ranks differ from the Koszul Tor ranks"};
    if (!r.limit_exterior.ok) return {false, tag + ": limit ring: " + r.limit_exterior.reason};
    if (!r.koszul_exterior.ok) return {false, tag + ": Koszul Tor ring: " + r.koszul_exterior.reason};
    if (!r.pi0_ok) return {false, tag + ": pi_0 is not W_n"};
    ++n;
  }
  return {true, fmt::format("{} scenarios, levels 1..3, exterior rings on both sides", n)};
}

Outcome vanishing_band(std::uint64_t) {
  int n = 0;
  for (const auto& c : limit_cases()) {
    for (int i = c.delta + 1; i < int(c.rep.limit.ranks.size()); ++i)
      if (c.rep.limit.ranks[i] != 0)
        return {false, fmt::format("p={} s={} delta={}: degree {} has rank {}", c.p, c.s, c.delta, i, c.rep.limit.ranks[i])};
    if (!c.rep.band_ok) return {false, "band flag disagrees"};
    ++n;
  }
  return {true, fmt::format("{} scenarios, zero in degrees delta+1..delta+2", n)};
}

Outcome group_algebra(std::uint64_t seed) {
  int n = 0;
  for (i64 p : {2, 3, 5})
    for (int lv = 1; lv <= 2; ++lv)
      for (int s = 1; s <= 3; ++s) {
        GroupAlgebraIso g = group_algebra_identification(p, lv, s, 64, seed);
        if (!g.ok) return {false, fmt::format("p={} n={} s={}: {}", p, lv, s, g.failure)};
        ++n;
      }
  return {true, fmt::format("{} rings, p in (2,3,5), n <= 2, s <= 3", n)};
}

Outcome ci_dims(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int n = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const i64 p = std::array<i64, 3>{2, 3, 5}[trial % 3];
    const int s = 1 + trial % 4;
    const int t = std::min(s, (trial / 4) % 4);
    Presentation P = random_ci(rng, Wn(p, 2), s, t, 4);
    TangentDims d = ci_tangent_dims(P);
    if (d != TangentDims{s, t, 0, 0})
      return {false, fmt::format("trial {} (p={} s={} t={}): got ({}, {}, {}, {})", trial, p, s, t, d[0], d[1], d[2], d[3])};
    ++n;
  }
  return {true, fmt::format("{} presentations", n)};
}

Outcome pairing_suite(std::uint64_t seed) {
  int pairs = 0, nonzero = 0, missing = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    SelmerStats st = selmer_checks(seed + k);
    if (!st.ok()) return {false, fmt::format("seed {} ({}): {}", seed + k, st.description, st.failure)};
    pairs += st.pairs;
    nonzero += st.nonzero;
    missing += st.no_primitive;
  }
  if (pairs == 0) return {false, "no pairing could be evaluated"};
  return {true, fmt::format("50 instances, {} pairings ({} nonzero), {} pairs without a global primitive", pairs,
                            nonzero, missing)};
}

SimplicialModule random_simplicial(std::mt19937_64& rng, Wn W, int D) {
  SimplicialModule X = dk_inverse(random_complex(rng, W, 0, D, 1), D);
  std::vector<WMat> phi, inv;
  for (int m = 0; m <= D; ++m) {
    auto [a, b] = random_invertible(rng, X.rank[m], W);
    phi.push_back(a);
    inv.push_back(b);
  }
  return transport(X, phi, inv);
}

Outcome dold_kan_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 50; ++trial) {
    Wn W(std::array<i64, 3>{2, 3, 5}[trial % 3], 1 + trial % 2);
    const int D = 1 + trial % 5;
    ChainComplex C = random_complex(rng, W, 0, D, 1);
    SimplicialCheck c = check_n_gamma(C, D);
    if (!c.ok) return {false, fmt::format("trial {}: N Gamma: {}", trial, c.what)};
    GammaN g = gamma_n_iso(random_simplicial(rng, W, D));
    if (!g.simplicial || !g.invertible) return {false, fmt::format("trial {}: Gamma N -> id is not an isomorphism", trial)};
  }
  for (i64 p : {2, 3, 5})
    for (int n = 1; n <= 2; ++n) {
      Wn W(p, 1);
      GradedAlgebra A = homotopy_ring(square_zero(sphere_module(W, n, 2 * n + 1)), 2 * n);
      for (int j = 0; j <= 2 * n; ++j) {
        const bool want = j == 0 || j == n;
        if (want ? A.H[j].divisors() != std::vector<int>{1} : A.rank(j) != 0)
          return {false, fmt::format("pi_{}(k + k[{}]) over F_{} is wrong", j, n, p)};
      }
      Vec x = A.unit_coords(n, 0);
      if (A.mul(n, x, n, x) != Vec(A.rank(2 * n), 0)) return {false, "square-zero product is nonzero"};
    }
  return {true, "50 round trips, D <= 5; pi_n(k + k[n]) = k for n = 1, 2"};
}

Outcome free_variables(std::uint64_t) {
  int n = 0;
  for (i64 p : {2, 3})
    for (int lv = 1; lv <= 2; ++lv)
      for (int s = 1; s <= 2; ++s)
        for (int delta = 0; delta <= s; ++delta)
          for (int r = 1; r <= 2; ++r) {
            FreeVariables fv = free_variables_check(p, s, delta, r, lv, 2);
            if (!fv.equal) return {false, fmt::format("p={} n={} s={} delta={} r={}: Tor changed", p, lv, s, delta, r)};
            ++n;
          }
  return {true, fmt::format("{} comparisons through degree 2", n)};
}

Outcome compactness(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int threads = 0, none = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool empty = trial % 4 == 3;
    FiniteInverseSystem sys = random_system(rng, 1 + trial % 8, 5, empty);
    auto x = compact_select(sys);
    // depth-first search in level order: the first complete sequence is the smallest thread
    const int L = int(sys.size.size());
    std::vector<int> cur;
    std::optional<std::vector<int>> first;
    std::function<void()> dfs = [&] {
      if (first) return;
      const int k = int(cur.size());
      if (k == L) {
        first = cur;
        return;
      }
      for (int y = 0; y < sys.size[k]; ++y) {
        if (k > 0 && sys.map[k - 1][y] != cur.back()) continue;
        cur.push_back(y);
        dfs();
        cur.pop_back();
      }
    };
    dfs();
    if (bool(x) != bool(first) || (x && *x != *first))
      return {false, fmt::format("trial {}: selection disagrees with exhaustive search", trial)};
    if (x && !is_thread(sys, *x)) return {false, fmt::format("trial {}: returned sequence is not a thread", trial)};
    x ? ++threads : ++none;
  }
  if (none == 0 || threads == 0) return {false, "corpus lacks one of the two cases"};
  return {true, fmt::format("{} threads verified, {} empty eventual images", threads, none)};
}

Outcome cg_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int counts[3] = {0, 0, 0};
  for (int trial = 0; trial < 40; ++trial) {
    CgKind kind = trial < 20 ? CgKind::Pass : (trial < 30 ? CgKind::Concentration : CgKind::Freeness);
    CgInput in = random_cg_instance(rng, kind);
    CgReport r = cg_check(in);
    const std::string want = kind == CgKind::Pass ? "" : (kind == CgKind::Concentration ? "concentration" : "freeness");
    if (r.diagnosis != want)
      return {false, fmt::format("trial {}: diagnosis '{}', expected '{}'", trial, r.diagnosis, want)};
    ++counts[int(kind)];
  }
  return {true, fmt::format("{} pass, {} concentration failures, {} freeness failures", counts[0], counts[1], counts[2])};
}

Outcome exterior_compat(std::uint64_t) {
  int n = 0;
  for (i64 p : {2, 3, 5})
    for (int d = 1; d <= 4; ++d) {
      CompatReport r = exterior_compat_check(exterior_model(Wn(p, 1), d));
      if (!r.ok) return {false, fmt::format("p={} dim={}: {}", p, d, r.violation)};
      if (!r.uniqueness_checked || !r.unique_matches)
        return {false, fmt::format("p={} dim={}: reconstruction differs", p, d)};
      ++n;
    }
  return {true, fmt::format("{} models with reconstruction", n)};
}

// ---- plain module suites ----

Outcome smith_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 60; ++trial) {
    Wn W(std::array<i64, 3>{2, 3, 5}[trial % 3], 1 + trial % 3);
    const int r = 1 + int(rng() % 4), c = 1 + int(rng() % 4);
    WMat A(r, c, W);
    for (auto& x : A.a) x = W.mul(rng() % W.q, W.pp(int(rng() % W.n)));
    Smith S = smith(A, kTrackP | kTrackQ);
    WMat D = S.P * A * S.Q;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        i64 want = i == j && S.vals[i] < W.n ? W.pp(S.vals[i]) : 0;
        if (D(i, j) != want) return {false, fmt::format("trial {}: P A Q is not diagonal", trial)};
      }
    // |im A| by enumeration when small
    if (std::pow(double(W.q), c) <= 4096) {
      std::set<Vec> img;
      Vec v(c, 0);
      for (;;) {
        img.insert(A.apply(v));
        int k = 0;
        while (k < c && ++v[k] == W.q) v[k++] = 0;
        if (k == c) break;
      }
      if (double(img.size()) != std::pow(double(W.p), image_log_order(A)))
        return {false, fmt::format("trial {}: image order differs from enumeration", trial)};
    }
  }
  return {true, "60 matrices"};
}

Outcome ring_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Ring> rings{Ring::make({2, 2, {1, 1}}), Ring::make({3, 1, {2}}), Ring::truncated(Wn(5, 1), 2, 2),
                          Ring::poly_group_relations(Wn(2, 1), {2}), Ring::make({5, 2, {1}})};
  for (const Ring& R : rings) {
    auto rnd = [&] {
      Vec v(R.dim());
      for (auto& x : v) x = rng() % R.W().q;
      return v;
    };
    for (int t = 0; t < 30; ++t) {
      Vec a = rnd(), b = rnd(), c = rnd();
      if (R.mul(R.mul(a, b), c) != R.mul(a, R.mul(b, c))) return {false, "associativity"};
      if (R.mul(a, b) != R.mul(b, a)) return {false, "commutativity"};
      if (R.mul(a, R.add(b, c)) != R.add(R.mul(a, b), R.mul(a, c))) return {false, "distributivity"};
      if (R.mul(R.one(), a) != a) return {false, "unit"};
      if (R.is_unit(a) && R.mul(a, R.inverse(a)) != R.one()) return {false, "inverse"};
    }
  }
  return {true, "5 rings, 30 triples each"};
}

Outcome homology_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 30; ++trial) {
    Wn W(std::array<i64, 2>{2, 3}[trial % 2], 1 + trial % 2);
    ChainComplex C = random_complex(rng, W, 0, 3, 2);
    for (int i = 0; i <= 3; ++i) {
      if (std::pow(double(W.q), std::max(C.rank(i), C.rank(i + 1))) > 5000) continue;
      WMat dout = C.diff(i).augmented(), din = C.diff(i + 1).augmented();
      i64 ker = 0;
      std::set<Vec> img;
      Vec v(C.rank(i), 0);
      for (;;) {
        if (dout.rows == 0 || dout.apply(v) == Vec(dout.rows, 0)) ++ker;
        int k = 0;
        while (k < C.rank(i) && ++v[k] == W.q) v[k++] = 0;
        if (k == C.rank(i)) break;
      }
      Vec u(C.rank(i + 1), 0);
      for (;;) {
        img.insert(din.cols ? din.apply(u) : Vec(C.rank(i), 0));
        int k = 0;
        while (k < C.rank(i + 1) && ++u[k] == W.q) u[k++] = 0;
        if (k == C.rank(i + 1)) break;
      }
      i64 order = 1;
      const Subquotient H = homology_at(C, i);
      for (int e : H.divisors()) order *= ipow(W.p, e);
      if (order * i64(img.size()) != ker) return {false, fmt::format("trial {}: |H_{}| differs from enumeration", trial, i)};
    }
    LesReport les = check_hofib_les(identity_map(C));
    if (!les.ok) return {false, fmt::format("trial {}: cone sequence not exact at {}", trial, les.where)};
  }
  return {true, "30 complexes"};
}

Outcome koszul_tor(std::uint64_t) {
  for (i64 p : {2, 3})
    for (int s = 1; s <= 3; ++s) {
      PolyQuotientRing P{Wn(p, 1), s, false, 2, {}};
      TorModule T = tor(TorRing::from_poly(P), augmentation_ideal(s), augmentation_ideal(s), s + 1);
      for (int i = 0; i <= s + 1; ++i)
        if (T.H.rank(i) != binom(s, i)) return {false, fmt::format("Tor_{} over {} variables", i, s)};
    }
  return {true, "Tor(k, k) over truncated power series, s <= 3"};
}

Outcome groupcoh_suite(std::uint64_t) {
  struct Case {
    FiniteGroup G;
    i64 p;
    std::vector<int> dims;
  };
  std::vector<Case> cases{{FiniteGroup::cyclic(3), 3, {1, 1, 1, 1, 1}},
                          {FiniteGroup::cyclic(4), 2, {1, 1, 1, 1}},
                          {FiniteGroup::cyclic(3), 2, {1, 0, 0, 0}},
                          {FiniteGroup::abelian_group({2, 2}), 2, {1, 2, 3}},
                          {FiniteGroup::quaternion(), 2, {1, 2, 2}}};
  for (const auto& c : cases) {
    const int top = int(c.dims.size());
    Cochains C = cochain_complex(c.G, GModule::trivial(c.G, c.p, {1}), top);
    for (int k = 0; k < top; ++k)
      if (C.cohomology(k).ngens() != c.dims[k])
        return {false, fmt::format("|G| = {}, p = {}: H^{} has dimension {}, expected {}", c.G.order, c.p, k,
                                   C.cohomology(k).ngens(), c.dims[k])};
  }
  return {true, "cyclic, Klein four and quaternion groups"};
}

Outcome numerology_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 200; ++t) {
    auto u = [&](int hi) { return i64(rng() % (hi + 1)); };
    i64 h2 = u(4), delta = u(3), h1f = u(4), r = u(3), nQ = u(4), h1loc = h1f + u(6);
    i64 h1 = h1loc - h1f + h2 - delta;
    if (h1 < 0) continue;
    Numerology n = wiles_numerology(h1, h2, h1loc, h1f, r, nQ, delta);
    if (!n.relations || n.value != n.expected) return {false, fmt::format("case {}: value {} expected {}", t, n.value, n.expected)};
  }
  return {true, "200 consistent inputs"};
}

Outcome perturbation_suite(std::uint64_t) {
  LimitReport a = limit_pi(PatchScenario{2, 1, 1, {1, 2, 3}, 3, {{Perturbation::Kind::Zero, 0, 1}}});
  if (a.ok()) return {false, "zeroed transition not detected"};
  LimitReport b = limit_pi(PatchScenario{3, 2, 1, {1, 2, 3}, 3, {{Perturbation::Kind::TimesP, 1, 0}}});
  if (b.ok()) return {false, "p-multiplied transition not detected"};
  LimitReport c = limit_pi(PatchScenario{2, 1, 1, {1, 2}, 2, {}});
  if (c.conclusive()) return {false, "two levels certified a limit"};
  return {true, "perturbed and short towers are flagged"};
}

std::vector<Suite> build() {
  std::vector<Suite> v;
  auto add = [&](std::string name, std::string module, int crit, double limit, long long cost, std::uint64_t seed,
                 Outcome (*f)(std::uint64_t)) { v.push_back({std::move(name), std::move(module), crit, limit, cost, seed, f}); };
  add("smith-normal-form", "finite_local_ring", 0, 0, 200, 11, smith_suite);
  add("ring-laws", "finite_local_ring", 0, 0, 200, 12, ring_suite);
  add("homology-enumeration", "chain_complex", 0, 0, 500, 13, homology_suite);
  add("limit-exterior", "resolutions_tor", 1, 60, 20000, 1, limit_exterior);
  add("vanishing-band", "resolutions_tor", 2, 60, 20000, 1, vanishing_band);
  add("koszul-tor", "resolutions_tor", 0, 0, 500, 1, koszul_tor);
  add("free-variables", "resolutions_tor", 7, 20, 5000, 1, free_variables);
  add("exterior-compat", "resolutions_tor", 10, 10, 1000, 1, exterior_compat);
  add("groupcoh-known", "group_cochains", 0, 0, 500, 1, groupcoh_suite);
  add("pairing", "local_conditions", 5, 120, 30000, 1, pairing_suite);
  add("dold-kan", "dold_kan", 6, 30, 5000, 7, dold_kan_suite);
  add("ci-tangent", "deformation_calculus", 4, 30, 10000, 29, ci_dims);
  add("numerology", "deformation_calculus", 0, 0, 100, 31, numerology_suite);
  add("group-algebra", "patching", 3, 5, 2000, 1, group_algebra);
  add("compactness", "patching", 8, 5, 100, 41, compactness);
  add("cg-check", "patching", 9, 30, 2000, 43, cg_suite);
  add("perturbations", "patching", 0, 0, 500, 1, perturbation_suite);
  return v;
}

}  // namespace

SelmerStats selmer_checks(std::uint64_t seed, int trials) {
  SelmerStats st;
  SelmerInstance I = random_selmer(seed);
  const SelmerData& S = I.S;
  st.description = I.description;
  auto fail = [&](bool& flag, std::string why) {
    flag = false;
    if (st.failure.empty()) st.failure = std::move(why);
  };
  for (int v = 0; v < int(S.places.size()); ++v) {
    AxiomReport a = check_axioms(S, v);
    if (!a.ok()) fail(st.axioms, "axioms at place " + std::to_string(v) + (a.failures.empty() ? "" : ": " + a.failures[0]));
  }
  for (Side side : {Side::Primary, Side::Dual}) {
    SelmerLesReport les = selmer_les(S, side, 2);
    if (!les.exact) fail(st.les_exact, "long exact sequence: " + les.failure);
  }
  SelmerComplex X = cone_selmer_complex(S, Side::Primary, 3);
  SelmerComplex Y = cone_selmer_complex(S, Side::Dual, 3);
  Subquotient H1 = X.cohomology(1), H2 = Y.cohomology(2);
  std::mt19937_64 rng(seed * 7919 + 1);
  const Wn W = S.C.W;
  std::uniform_int_distribution<i64> U(0, W.q - 1);
  for (int trial = 0; trial < trials; ++trial) {
    Vec xi = random_cocycle(X, H1, 1, rng), xi2 = random_cocycle(X, H1, 1, rng);
    Vec eta = random_cocycle(Y, H2, 2, rng);
    PairingResult base, b2, sum;
    try {
      base = duality_pairing(S, X, Y, xi, eta);
      b2 = duality_pairing(S, X, Y, xi2, eta);
      sum = duality_pairing(S, X, Y, vadd(W, xi, xi2), eta);
    } catch (const Error&) {
      ++st.no_primitive;
      continue;
    }
    ++st.pairs;
    if (base.value) ++st.nonzero;
    if (!base.local_cocycles || !base.eps_cup_zero) fail(st.cocycles, "d P_v differs from eps u eps' or eps u eps' != 0");
    if (sum.value != W.add(base.value, b2.value)) fail(st.invariant, "not additive in the first argument");
    PairingOptions sym;
    sym.symmetric = true;
    if (duality_pairing(S, X, Y, xi, eta, sym).value != base.value) fail(st.invariant, "symmetric formula differs");
    PairingOptions sh;
    for (const auto& P : S.places) {
      Vec c(P.prim.lift.span[0].cols), cd(P.dual.lift.span[1].cols);
      for (auto& t : c) t = U(rng);
      for (auto& t : cd) t = U(rng);
      sh.shift_y.push_back(combo(W, P.prim.lift.span[0], c));
      sh.shift_y_dual.push_back(combo(W, P.dual.lift.span[1], cd));
    }
    sh.shift_z = random_cocycle(S.Cmu, S.Cmu.cohomology(2), 2, rng);
    if (duality_pairing(S, X, Y, xi, eta, sh).value != base.value) fail(st.invariant, "depends on the choice of y, y' or z");
    Vec a(X.dims[0]), b(Y.dims[1]);
    for (auto& t : a) t = U(rng);
    for (auto& t : b) t = U(rng);
    if (duality_pairing(S, X, Y, vadd(W, xi, X.d[0].apply(a)), vadd(W, eta, Y.d[1].apply(b))).value != base.value)
      fail(st.invariant, "depends on the cocycle representatives");
  }
  return st;
}

const std::vector<Suite>& all() {
  static const std::vector<Suite> v = build();
  return v;
}

std::vector<std::string> modules() {
  std::vector<std::string> m;
  for (const auto& s : all())
    if (std::find(m.begin(), m.end(), s.module) == m.end()) m.push_back(s.module);
  m.push_back("cli");
  return m;
}

Result run_one(const Suite& s) {
  Result r;
  r.name = s.name;
  r.module = s.module;
  r.criterion = s.criterion;
  r.limit_s = s.limit_s;
  r.seed = s.seed;
  r.repro = fmt::format("dtw selftest --filter {}", s.module);
  auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = s.run(s.seed);
    r.status = o.ok ? Status::Pass : Status::Fail;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.status = Status::Fail;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.status == Status::Pass && s.limit_s > 0 && r.seconds > s.limit_s) {
    r.status = Status::Fail;
    r.detail += fmt::format(" (took {:.1f} s, limit {:.0f} s)", r.seconds, s.limit_s);
  }
  return r;
}

std::vector<Result> run(const std::string& module_filter, long long budget_ms) {
  std::vector<Result> out;
  long long left = budget_ms;
  for (const auto& s : all()) {
    if (!module_filter.empty() && s.module != module_filter) continue;
    if (s.cost_ms > left) {
      Result r;
      r.name = s.name;
      r.module = s.module;
      r.criterion = s.criterion;
      r.limit_s = s.limit_s;
      r.seed = s.seed;
      r.status = Status::Skipped;
      r.detail = fmt::format("estimated cost {} ms exceeds the remaining budget {} ms", s.cost_ms, left);
      r.repro = fmt::format("dtw selftest --filter {} --budget {}", s.module, s.cost_ms);
      out.push_back(r);
      continue;
    }
    out.push_back(run_one(s));
    left -= std::max<long long>(s.cost_ms, (long long)(out.back().seconds * 1000));
  }
  return out;
}

}  // namespace dtw::suites
