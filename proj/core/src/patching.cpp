#include "dtw/patching.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <memory>

namespace dtw {

void validate(const PatchScenario& sc) {
  if (!is_prime(sc.p)) throw Error(fmt::format("p = {} is not prime", sc.p));
  if (sc.s < 0 || sc.delta < 0 || sc.delta > sc.s) throw Error("need 0 <= delta <= s");
  if (sc.levels.empty()) throw Error("no levels");
  for (std::size_t k = 0; k < sc.levels.size(); ++k) {
    if (sc.levels[k] < 1) throw Error("levels start at 1");
    if (k && sc.levels[k] <= sc.levels[k - 1]) throw Error("levels must increase strictly");
  }
  if (sc.maxdeg < 0) throw Error("maxdeg must be nonnegative");
  for (const auto& q : sc.perturb)
    if (q.level < 0 || q.level + 1 >= int(sc.levels.size()) || q.degree < 0 || q.degree > sc.maxdeg)
      throw Error("perturbation outside the level or degree range");
}

LevelDatum build_level_complex(const PatchScenario& sc, int n) {
  validate(sc);
  if (std::find(sc.levels.begin(), sc.levels.end(), n) == sc.levels.end())
    throw Error(fmt::format("level {} is not in the scenario", n));
  std::vector<int> coords;
  for (int c = sc.s - sc.delta; c < sc.s; ++c) coords.push_back(c);
  LevelDatum L;
  L.n = n;
  L.res = group_quotient_resolution(RingSpec{sc.p, n, std::vector<int>(sc.s, n)}, coords, sc.maxdeg + 1, false).res;
  L.C = L.res.augmented();
  L.pi.R = Wn(sc.p, n);
  for (int i = 0; i <= sc.maxdeg; ++i) L.pi.divisors.push_back(homology_at(L.C, i).divisors());
  return L;
}

namespace {

WMat plain(const RMat& M) { return M.S.trivial() ? M.augmented() : M.expand(); }

WMat homology_matrix(const WMat& f, const Subquotient& src, const Subquotient& tgt, Wn Wt) {
  std::vector<Vec> cols;
  for (int g = 0; g < src.ngens(); ++g) {
    Vec v = src.gen(g);
    for (auto& x : v) x %= Wt.q;
    cols.push_back(tgt.coords(f.apply(v)));
  }
  return WMat::from_cols(tgt.ngens(), cols, Wt);
}

}  // namespace

Transition transition(const LevelDatum& from, const LevelDatum& to, int maxdeg) {
  if (from.n < to.n) throw Error(fmt::format("transition needs n >= m, got {} < {}", from.n, to.n));
  Transition T;
  T.n = from.n;
  T.m = to.n;
  const Wn Wm = to.C.S.W();
  if (from.n == to.n) {
    for (int i = 0; i <= maxdeg + 1; ++i) T.f.push_back(WMat::identity(to.C.rank(i), Wm));
  } else {
    T.f = augmented_comparison(from.res, to.res);
  }
  for (int i = 0; i <= maxdeg; ++i)
    T.on_homology.push_back(homology_matrix(T.f.at(i), homology_at(from.C, i), homology_at(to.C, i), Wm));
  return T;
}

Transition transition(const PatchScenario& sc, int n, int m) {
  if (n < m) throw Error(fmt::format("transition needs n >= m, got {} < {}", n, m));
  PatchScenario full = sc;
  full.perturb.clear();
  if (std::find(full.levels.begin(), full.levels.end(), n) == full.levels.end()) full.levels.push_back(n);
  if (std::find(full.levels.begin(), full.levels.end(), m) == full.levels.end()) full.levels.push_back(m);
  std::sort(full.levels.begin(), full.levels.end());
  return transition(build_level_complex(full, n), build_level_complex(full, m), sc.maxdeg);
}

WMat compose_on_homology(const Transition& g, const Transition& f, int i) {
  if (g.n != f.m) throw Error("transitions do not compose");
  const WMat& G = g.on_homology.at(i);
  return G * reduce_to(f.on_homology.at(i), G.R);
}

LimitReport limit_pi(const PatchScenario& sc) {
  validate(sc);
  LimitReport rep;
  const int L = int(sc.levels.size());
  std::vector<LevelDatum> data;
  for (int n : sc.levels) data.push_back(build_level_complex(sc, n));
  Tower T;
  for (const auto& d : data) T.levels.push_back(d.C);
  for (int k = 0; k + 1 < L; ++k) T.maps.push_back(transition(data[k + 1], data[k], sc.maxdeg).f);
  for (const auto& q : sc.perturb) {
    WMat& M = T.maps[q.level][q.degree];
    M = q.kind == Perturbation::Kind::Zero ? WMat(M.rows, M.cols, M.R) : M.scaled(sc.p);
  }
  rep.limit = limit_tor(T, sc.maxdeg);
  if (!rep.limit.certified) rep.note = rep.limit.note;

  rep.pi0_ok = true;
  for (const auto& d : data) rep.pi0_ok = rep.pi0_ok && d.pi.at(0) == std::vector<int>{d.n};

  rep.band_ok = true;
  for (int i = 0; i <= sc.maxdeg; ++i) {
    if (i > sc.delta && rep.limit.ranks[i] != 0) rep.band_ok = false;
    rep.euler += (i % 2 ? -1 : 1) * rep.limit.ranks[i];
  }

  // Koszul side over the truncated power series ring, bottom coefficients
  const Wn W0(sc.p, sc.levels.front());
  PolyQuotientRing P{W0, sc.s, false, 2, {}};
  std::vector<Poly> I;
  for (int c = sc.s - sc.delta; c < sc.s; ++c) I.push_back(Poly::var(sc.s, c));
  TorAlgebra K = tor_algebra(TorRing::from_poly(P), I, augmentation_ideal(sc.s), sc.maxdeg);
  for (int i = 0; i <= sc.maxdeg; ++i) rep.koszul_ranks.push_back(K.A.rank(i));
  rep.ranks_match = rep.koszul_ranks == rep.limit.ranks;
  rep.koszul_exterior = exterior_compare(K.A, sc.delta);

  // the stable image at the bottom level, with the product of the bottom Tor algebra
  auto A0 = std::make_shared<TorAlgebra>(tor_algebra_augmented(data[0].res, sc.maxdeg));
  const ChainComplex& C0 = data[0].C;
  auto H = std::make_shared<std::vector<Subquotient>>();
  for (int i = 0; i <= sc.maxdeg; ++i) {
    WMat G = WMat::identity(C0.rank(i), W0);
    for (int k = 0; k + 1 < L; ++k) G = G * reduce_to(T.maps[k][i], W0);
    Subquotient top = homology_at(data[L - 1].C, i);
    std::vector<Vec> cols;
    for (int g = 0; g < top.ngens(); ++g) {
      Vec v = top.gen(g);
      for (auto& x : v) x %= W0.q;
      cols.push_back(G.apply(v));
    }
    WMat B = plain(C0.diff(i + 1));
    H->push_back(Subquotient(WMat::hcat(WMat::from_cols(C0.rank(i), cols, W0), B), B));
  }
  GradedAlgebra lim;
  lim.W = W0;
  lim.maxdeg = sc.maxdeg;
  lim.H = *H;
  lim.mul = [A0, H, W0](int a, const Vec& x, int b, const Vec& y) -> Vec {
    const auto& A = A0->A;
    if (a + b > A.maxdeg) return {};
    auto lift = [&](const Subquotient& S, const Vec& c) {
      Vec v(S.ambient(), 0);
      for (int g = 0; g < S.ngens(); ++g) {
        Vec col = S.gen(g);
        for (int k = 0; k < S.ambient(); ++k) v[k] = W0.add(v[k], W0.mul(c[g], col[k]));
      }
      return v;
    };
    Vec xa = A.H[a].coords(lift((*H)[a], x)), yb = A.H[b].coords(lift((*H)[b], y));
    Vec z = lift(A.H[a + b], A.mul(a, xa, b, yb));
    if (!(*H)[a + b].in_V(z)) throw Error("product leaves the stable image");
    return (*H)[a + b].coords(z);
  };
  rep.limit_exterior = exterior_compare(lim, sc.delta);
  rep.limit_algebra = std::move(lim);
  return rep;
}

GroupAlgebraIso group_algebra_identification(i64 p, int n, int s, int samples, std::uint64_t seed) {
  GroupAlgebraIso rep;
  const Wn W(p, n);
  auto fail = [&](std::string why) {
    rep.ok = false;
    rep.failure = std::move(why);
    return rep;
  };
  // one coordinate, exhaustively: phi(sigma^a) = (1 + X)^a, psi(X^b) = (sigma - 1)^b
  Ring G1 = Ring::make({p, n, {n}}), P1 = Ring::poly_group_relations(W, {n});
  const int d1 = G1.dim();
  if (P1.dim() != d1) return fail("one-variable sides have different ranks");
  Vec onePlusX = P1.add(P1.one(), P1.var(0)), sigmaMinus1 = G1.sub(G1.var(0), G1.one());
  std::vector<Vec> phi1(d1), psi1(d1);
  for (int a = 0; a < d1; ++a) {
    phi1[a] = P1.pow(onePlusX, G1.multi_index(a)[0]);
    psi1[a] = G1.pow(sigmaMinus1, P1.multi_index(a)[0]);
  }
  if (!P1.is_zero(P1.sub(P1.pow(onePlusX, d1), P1.one()))) return fail("(1 + X)^{p^n} != 1");
  WMat Phi = WMat::from_cols(d1, phi1, W), Psi = WMat::from_cols(d1, psi1, W);
  if (!(Phi * Psi == WMat::identity(d1, W)) || !(Psi * Phi == WMat::identity(d1, W)))
    return fail("one-variable maps are not mutually inverse");
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d1; ++b) {
      Vec ab = G1.mul(G1.basis(a), G1.basis(b));
      if (!(Phi.apply(ab) == P1.mul(phi1[a], phi1[b]))) return fail("one-variable map is not multiplicative");
      Vec xy = P1.mul(P1.basis(a), P1.basis(b));
      if (!(Psi.apply(xy) == G1.mul(psi1[a], psi1[b]))) return fail("one-variable inverse is not multiplicative");
    }
  // all coordinates: phi is the tensor power of phi1, so it suffices that both products are the
  // tensor powers of the one-variable products; small rings are also checked directly
  Ring G = Ring::make({p, n, std::vector<int>(s, n)}), P = Ring::poly_group_relations(W, std::vector<int>(s, n));
  rep.dim = G.dim();
  if (P.dim() != G.dim()) return fail("sides have different ranks");
  auto kron = [&](const std::vector<Vec>& parts) {
    Vec v(P.dim(), 0);
    for (int t = 0; t < P.dim(); ++t) {
      auto b = P.multi_index(t);
      i64 c = 1;
      for (int i = 0; i < s && c; ++i) c = W.mul(c, parts[i][b[i]]);
      v[t] = c;
    }
    return v;
  };
  auto phi = [&](int k) {
    auto a = G.multi_index(k);
    std::vector<Vec> parts;
    for (int i = 0; i < s; ++i) parts.push_back(phi1[a[i]]);
    return kron(parts);
  };
  rep.exhaustive = G.dim() <= 64;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, G.dim() - 1);
  std::vector<std::pair<int, int>> pairs;
  if (rep.exhaustive) {
    for (int a = 0; a < G.dim(); ++a)
      for (int b = 0; b < G.dim(); ++b) pairs.push_back({a, b});
  } else {
    for (int t = 0; t < samples; ++t) pairs.push_back({pick(rng), pick(rng)});
  }
  const bool direct = G.dim() <= 1024;
  for (auto [a, b] : pairs) {
    auto ia = G.multi_index(a), ib = G.multi_index(b);
    std::vector<Vec> gp, pp;
    for (int i = 0; i < s; ++i) {
      gp.push_back(G1.mul(G1.basis(ia[i]), G1.basis(ib[i])));
      pp.push_back(P1.mul(P1.basis(P.multi_index(a)[i]), P1.basis(P.multi_index(b)[i])));
    }
    Vec gab = G.mul(G.basis(a), G.basis(b));
    // G's basis and the one-variable bases are both indexed by exponent vectors
    Vec gk(G.dim(), 0);
    for (int t = 0; t < G.dim(); ++t) {
      auto c = G.multi_index(t);
      i64 x = 1;
      for (int i = 0; i < s && x; ++i) x = W.mul(x, gp[i][c[i]]);
      gk[t] = x;
    }
    if (!(gab == gk)) return fail("group side is not the tensor power of the one-variable ring");
    if (!(P.mul(P.basis(a), P.basis(b)) == kron(pp)))
      return fail("polynomial side is not the tensor power of the one-variable ring");
    if (direct) {
      int c = int(std::find_if(gab.begin(), gab.end(), [](i64 x) { return x != 0; }) - gab.begin());
      if (!(phi(c) == P.mul(phi(a), phi(b)))) return fail("map is not multiplicative");
    }
    ++rep.samples;
  }
  for (int i = 0; i < s; ++i)
    if (!(phi(G.index_of([&] {
            std::vector<int> e(s, 0);
            e[i] = 1;
            return e;
          }())) == P.add(P.one(), P.var(i))))
      return fail(fmt::format("sigma_{} does not go to 1 + X_{}", i + 1, i + 1));
  // bijective: a tensor power of an invertible matrix; small cases also by elimination
  if (G.dim() <= 729) {
    std::vector<Vec> cols;
    for (int k = 0; k < G.dim(); ++k) cols.push_back(phi(k));
    Smith S = smith(WMat::from_cols(P.dim(), cols, W));
    if (S.rank != G.dim() || std::any_of(S.vals.begin(), S.vals.end(), [](int v) { return v != 0; }))
      return fail("map is not bijective");
  }
  return rep;
}

FreeVariables free_variables_check(i64 p, int s, int delta, int r, int n, int maxdeg) {
  if (delta < 0 || delta > s || r < 0) throw Error("need 0 <= delta <= s and r >= 0");
  auto side = [&](int vars) {
    TorRing R = TorRing::finite(Ring::make({p, n, std::vector<int>(vars, n)}));
    std::vector<Poly> I;
    for (int c = s - delta; c < s; ++c) I.push_back(Poly::var(vars, c));
    return tor(R, I, augmentation_ideal(vars), maxdeg).H;
  };
  FreeVariables fv;
  fv.before = side(s);
  fv.after = side(s + r);
  fv.equal = fv.before.divisors == fv.after.divisors;
  return fv;
}

// ---- inverse systems ----

void validate(const FiniteInverseSystem& sys) {
  const int L = int(sys.size.size());
  if (L == 0) throw Error("empty inverse system");
  if (int(sys.map.size()) != L - 1) throw Error("inverse system needs one map per consecutive pair");
  for (int k = 0; k + 1 < L; ++k) {
    if (sys.size[k] < 0 || sys.size[k + 1] < 0) throw Error("negative set size");
    if (int(sys.map[k].size()) != sys.size[k + 1]) throw Error(fmt::format("map {} has the wrong domain", k));
    for (int x : sys.map[k])
      if (x < 0 || x >= sys.size[k]) throw Error(fmt::format("map {} leaves its target", k));
  }
}

std::vector<std::vector<int>> eventual_images(const FiniteInverseSystem& sys) {
  validate(sys);
  const int L = int(sys.size.size());
  std::vector<std::vector<int>> E(L);
  for (int x = 0; x < sys.size[L - 1]; ++x) E[L - 1].push_back(x);
  for (int k = L - 2; k >= 0; --k) {
    std::vector<char> hit(sys.size[k], 0);
    for (int y : E[k + 1]) hit[sys.map[k][y]] = 1;
    for (int x = 0; x < sys.size[k]; ++x)
      if (hit[x]) E[k].push_back(x);
  }
  return E;
}

std::optional<std::vector<int>> compact_select(const FiniteInverseSystem& sys) {
  auto E = eventual_images(sys);
  for (const auto& e : E)
    if (e.empty()) return std::nullopt;
  std::vector<int> x{E[0].front()};
  for (std::size_t k = 1; k < E.size(); ++k) {
    auto it = std::find_if(E[k].begin(), E[k].end(), [&](int y) { return sys.map[k - 1][y] == x.back(); });
    if (it == E[k].end()) throw Error("eventual images are not compatible");
    x.push_back(*it);
  }
  if (!is_thread(sys, x)) throw Error("selected sequence is not a thread");
  return x;
}

bool is_thread(const FiniteInverseSystem& sys, const std::vector<int>& x) {
  if (x.size() != sys.size.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] < 0 || x[k] >= sys.size[k]) return false;
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    if (sys.map[k][x[k + 1]] != x[k]) return false;
  return true;
}

FiniteInverseSystem random_system(std::mt19937_64& rng, int length, int max_size, bool with_empty_level) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  FiniteInverseSystem sys;
  for (int k = 0; k < length; ++k) sys.size.push_back(uni(1, max_size));
  if (with_empty_level) {
    // a map into the empty set forces every later level to be empty
    for (int k = uni(0, length - 1); k < length; ++k) sys.size[k] = 0;
  }
  for (int k = 0; k + 1 < length; ++k) {
    std::vector<int> f(sys.size[k + 1]);
    for (auto& y : f) y = uni(0, sys.size[k] - 1);
    sys.map.push_back(f);
  }
  return sys;
}

// ---- concentration and freeness ----

namespace {

bool zero_in(const Vec& v, const std::vector<int>& e, const Wn& W) {
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] % (e[k] >= W.n ? W.q : W.pp(e[k])) != 0) return false;
  return true;
}

// per-slot multiplication of a flattened R^m vector
Vec slot_mul(const Ring& R, const Vec& r, const Vec& z) {
  const int d = R.dim();
  Vec out(z.size(), 0);
  for (std::size_t j = 0; j * d < z.size(); ++j) {
    Vec blk(z.begin() + j * d, z.begin() + (j + 1) * d);
    blk = R.mul(r, blk);
    std::copy(blk.begin(), blk.end(), out.begin() + j * d);
  }
  return out;
}

// generators of the maximal ideal besides p
std::vector<Vec> max_ideal(const Ring& R) {
  std::vector<Vec> m;
  for (int j = 0; j < R.nvars(); ++j)
    m.push_back(R.kind() == RingKind::Group ? R.sub(R.var(j), R.one()) : R.var(j));
  return m;
}

}  // namespace

std::vector<WMat> natural_action(const ChainComplex& D, int q) {
  const Ring& R = D.S;
  ChainComplex K = R.trivial() ? D : restrict_to_Wn(D);
  Subquotient H = homology_at(K, q);
  std::vector<WMat> act;
  for (int j = 0; j < R.nvars(); ++j) {
    std::vector<Vec> cols;
    for (int g = 0; g < H.ngens(); ++g) cols.push_back(H.coords(slot_mul(R, R.var(j), H.gen(g))));
    act.push_back(WMat::from_cols(H.ngens(), cols, R.W()));
  }
  return act;
}

CgReport cg_check(const CgInput& in) {
  CgReport rep;
  const ChainComplex& D = in.D;
  if (in.delta < 0) throw Error("delta must be nonnegative");
  for (int i = D.lo; i <= D.hi; ++i)
    if (D.rank(i) && (i < in.q || i > in.q + in.delta))
      throw Error(fmt::format("unsupported degree range: term in degree {} outside [{}, {}]", i, in.q, in.q + in.delta));
  const Wn W = D.S.W();
  if (!in.R.valid() || in.R.W() != W) throw Error("R must be a ring over the same W_n as D");
  ChainComplex K = D.S.trivial() ? D : restrict_to_Wn(D);
  for (int i = in.q; i <= in.q + in.delta; ++i)
    if (!homology_at(K, i).is_zero()) rep.nonzero_degrees.push_back(i);
  rep.concentrated = std::all_of(rep.nonzero_degrees.begin(), rep.nonzero_degrees.end(), [&](int i) { return i == in.q; });

  const Subquotient H = homology_at(K, in.q);
  const std::vector<int>& e = H.divisors();
  const int r = H.ngens();
  const Ring& R = in.R;
  const int d = R.dim();
  if (int(in.action.size()) != R.nvars()) throw Error("one action matrix per variable of R is needed");
  for (const auto& A : in.action)
    if (A.rows != r || A.cols != r) throw Error("action matrices must be square on H_q");
  // the action must be well defined on H_q and a ring map R -> End(H_q)
  for (const auto& A : in.action)
    for (int i = 0; i < r; ++i) {
      Vec c = A.col(i);
      for (auto& x : c) x = W.mul(x, W.pp(e[i]));
      if (!zero_in(c, e, W)) throw Error("action does not preserve the relations of H_q");
    }
  std::vector<WMat> act(d);
  for (int b = 0; b < d; ++b) {
    auto a = R.multi_index(b);
    WMat M = WMat::identity(r, W);
    for (int j = 0; j < R.nvars(); ++j)
      for (int t = 0; t < a[j]; ++t) M = in.action[j] * M;
    act[b] = M;
  }
  auto act_of = [&](const Vec& x) {
    WMat M(r, r, W);
    for (int b = 0; b < d; ++b)
      if (x[b]) M = M + act[b].scaled(x[b]);
    return M;
  };
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      WMat lhs = act[a] * act[b], rhs = act_of(R.mul(R.basis(a), R.basis(b)));
      for (int i = 0; i < r; ++i) {
        Vec diff = (lhs - rhs).col(i);
        if (!zero_in(diff, e, W)) throw Error("action is not compatible with the multiplication of R");
      }
    }

  const AbGroup HG{W, e};
  // minimal generators: a basis of H / mH chosen among the coordinate vectors
  std::vector<Vec> mgens;
  for (int i = 0; i < r; ++i) {
    mgens.push_back(WMat::identity(r, W).col(i));
    for (auto& x : mgens.back()) x = W.mul(x, W.p);
    for (int j = 0; j < R.nvars(); ++j) {
      Vec c = in.action[j].col(i);
      if (R.kind() == RingKind::Group) c[i] = W.sub(c[i], 1);
      mgens.push_back(c);
    }
  }
  auto span_log = [&](const std::vector<Vec>& cols) {
    return cols.empty() ? 0 : hom_image_log_order(WMat::from_cols(r, cols, W), HG);
  };
  std::vector<Vec> chosen, acc = mgens;
  int cur = span_log(acc);
  for (int i = 0; i < r; ++i) {
    Vec u(r, 0);
    u[i] = 1;
    acc.push_back(u);
    int now = span_log(acc);
    if (now > cur) {
      chosen.push_back(u);
      cur = now;
    } else {
      acc.pop_back();
    }
  }
  const int mu = int(chosen.size());
  rep.generators = mu;
  // R^mu -> H_q and its kernel inside W_n^{mu d}
  WMat Phi(r, mu * d + r, W);
  for (int j = 0; j < mu; ++j)
    for (int b = 0; b < d; ++b) Phi.set_col(j * d + b, act[b].apply(chosen[j]));
  for (int i = 0; i < r; ++i) Phi(i, mu * d + i) = W.pp(e[i]);
  WMat Kg = kernel_gens(Phi);
  std::vector<Vec> kern;
  for (int c = 0; c < Kg.cols; ++c) {
    Vec v = Kg.col(c);
    v.resize(std::size_t(mu) * d);
    if (std::any_of(v.begin(), v.end(), [](i64 x) { return x != 0; })) kern.push_back(v);
  }
  if (!kern.empty()) {
    std::vector<Vec> mk;
    for (const auto& v : kern) {
      Vec pv = v;
      for (auto& x : pv) x = W.mul(x, W.p);
      mk.push_back(pv);
      for (const auto& x : max_ideal(R)) mk.push_back(slot_mul(R, x, v));
    }
    const int rows = mu * d;
    rep.tor1 = image_log_order(WMat::from_cols(rows, kern, W)) - image_log_order(WMat::from_cols(rows, mk, W));
    // the relation matrix of a minimal presentation has no unit entries left to eliminate
    RMat rel(mu, int(kern.size()), R);
    for (int c = 0; c < int(kern.size()); ++c)
      for (int j = 0; j < mu; ++j)
        rel.set(j, c, Vec(kern[c].begin() + std::size_t(j) * d, kern[c].begin() + std::size_t(j + 1) * d));
    Elimination E = local_eliminate(rel);
    rep.detail = fmt::format("minimal relations {}, unit pivots {}", rep.tor1, E.unit_rank);
  }
  rep.free = rep.tor1 == 0 && kern.empty();
  if (!rep.concentrated && !rep.free)
    rep.diagnosis = "concentration+freeness";
  else if (!rep.concentrated)
    rep.diagnosis = "concentration";
  else if (!rep.free)
    rep.diagnosis = "freeness";
  rep.pass = rep.diagnosis.empty();
  return rep;
}

namespace {

Vec random_elem(std::mt19937_64& rng, const Ring& R) {
  Vec v(R.dim());
  for (auto& x : v) x = std::uniform_int_distribution<i64>(0, R.W().q - 1)(rng);
  return v;
}

// (A, A^-1) as a product of elementary matrices over R
std::pair<RMat, RMat> random_elementary(std::mt19937_64& rng, const Ring& R, int n, int steps) {
  RMat A = RMat::identity(n, R), B = RMat::identity(n, R);
  if (n < 2) return {A, B};
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int t = 0; t < steps; ++t) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    Vec c = random_elem(rng, R);
    RMat E = RMat::identity(n, R), F = RMat::identity(n, R);
    E.set(i, j, c);
    F.set(i, j, R.neg(c));
    A = E * A;
    B = B * F;
  }
  return {A, B};
}

Ring random_cg_ring(std::mt19937_64& rng, bool fields_only) {
  static const std::vector<RingSpec> specs{{2, 1, {1}}, {3, 1, {1}}, {2, 1, {1, 1}}, {5, 1, {1}},
                                           {2, 2, {1}}, {3, 2, {1}}, {2, 1, {2}}};
  for (;;) {
    const int k = std::uniform_int_distribution<int>(0, int(specs.size()))(rng);
    if (k == int(specs.size())) return Ring::truncated(Wn(3, 1), 1, 2);
    if (fields_only && specs[k].n != 1) continue;
    return Ring::make(specs[k]);
  }
}

// block diagonal differentials: free part in degree q, identity blocks d: R^a (i) -> R^a (i-1)
ChainComplex assemble(const Ring& R, int q, int delta, int r, const std::vector<std::pair<int, int>>& blocks,
                      int extra_top) {
  std::vector<int> ranks(delta + 1, 0);
  ranks[0] = r;
  for (auto [i, a] : blocks) {
    ranks[i - q] += a;
    ranks[i - 1 - q] += a;
  }
  if (extra_top) ranks[1] += extra_top;
  ChainComplex D(R, q, ranks);
  std::vector<int> fill(delta + 1, 0);
  fill[0] = r;
  for (int i = q + 1; i <= q + delta; ++i) {
    RMat d(D.rank(i - 1), D.rank(i), R);
    for (auto [j, a] : blocks) {
      if (j != i) continue;
      for (int t = 0; t < a; ++t) d.set(fill[i - 1 - q] + t, fill[i - q] + t, R.one());
      fill[i - 1 - q] += a;
      fill[i - q] += a;
    }
    D.set_diff(i, d);
  }
  return D;
}

ChainComplex conjugate(std::mt19937_64& rng, const ChainComplex& D) {
  const Ring& R = D.S;
  std::vector<std::pair<RMat, RMat>> g;
  for (int i = D.lo; i <= D.hi; ++i) g.push_back(random_elementary(rng, R, D.rank(i), 3 * D.rank(i)));
  ChainComplex E = D;
  for (int i = D.lo + 1; i <= D.hi; ++i) E.set_diff(i, g[i - 1 - D.lo].first * D.diff(i) * g[i - D.lo].second);
  return E;
}

}  // namespace

CgInput random_cg_instance(std::mt19937_64& rng, CgKind kind) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  CgInput in;
  in.q = uni(0, 2);
  in.delta = uni(1, 2);
  if (kind != CgKind::Freeness) {
    Ring R = random_cg_ring(rng, false);
    std::vector<std::pair<int, int>> blocks;
    for (int b = uni(0, 2); b > 0; --b) blocks.push_back({uni(in.q + 1, in.q + in.delta), uni(1, 2)});
    const int r = uni(1, 2);
    ChainComplex D = assemble(R, in.q, in.delta, r, blocks, kind == CgKind::Concentration ? 1 : 0);
    in.D = conjugate(rng, D);
    in.R = R;
    in.action = natural_action(in.D, in.q);
    return in;
  }
  // R/I over k with 0 != I inside the maximal ideal, presented by a basis of I
  Ring R = random_cg_ring(rng, true);
  const Wn W = R.W();
  for (;;) {
    std::vector<Vec> gens;
    for (int g = uni(1, 2); g > 0; --g)
      gens.push_back(R.mul(random_elem(rng, R), R.sub(R.var(uni(0, R.nvars() - 1)), R.kind() == RingKind::Group ? R.one() : R.zero())));
    WMat Ispan = ideal_span(R, gens);
    std::vector<Vec> basis;
    int cur = 0;
    for (int c = 0; c < Ispan.cols; ++c) {
      basis.push_back(Ispan.col(c));
      int now = image_log_order(WMat::from_cols(R.dim(), basis, W));
      if (now > cur) cur = now;
      else basis.pop_back();
    }
    if (basis.empty()) continue;
    Ring k = Ring::scalars(W);
    ChainComplex D(k, in.q, {R.dim(), int(basis.size())});
    D.set_diff(in.q + 1, RMat::from_wmat(WMat::from_cols(R.dim(), basis, W), k));
    in.D = D;
    in.delta = std::max(in.delta, 1);
    in.R = R;
    Subquotient H = homology_at(D, in.q);
    for (int j = 0; j < R.nvars(); ++j) {
      std::vector<Vec> cols;
      for (int g = 0; g < H.ngens(); ++g) cols.push_back(H.coords(R.mul(R.var(j), H.gen(g))));
      in.action.push_back(WMat::from_cols(H.ngens(), cols, W));
    }
    return in;
  }
}

}  // namespace dtw
