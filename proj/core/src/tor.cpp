#include "dtw/tor.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace dtw {

TorRing TorRing::from_poly(const PolyQuotientRing& P) {
  TorRing R;
  R.poly = P;
  R.S = P.group_relations ? Ring::make(P.group_spec()) : P.ring();
  return R;
}

TorRing TorRing::finite(const Ring& S) {
  TorRing R;
  R.S = S;
  return R;
}

Vec element_in(const Ring& S, const Poly& f) {
  if (S.kind() != RingKind::Group) return to_ring(f, S);
  std::vector<Vec> x;
  for (int i = 0; i < S.nvars(); ++i) x.push_back(S.sub(S.var(i), S.one()));
  Vec v = S.zero();
  for (const auto& [a, c] : f.terms) {
    if (int(a.size()) != S.nvars()) throw Error("polynomial has the wrong number of variables");
    Vec m = S.scalar(c);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i]) m = S.mul(m, S.pow(x[i], a[i]));
    v = S.add(v, m);
  }
  return v;
}

std::vector<Poly> augmentation_ideal(int s) {
  std::vector<Poly> out;
  for (int i = 0; i < s; ++i) out.push_back(Poly::var(s, i));
  return out;
}

WMat ideal_span(const Ring& S, const std::vector<Vec>& elems) {
  WMat M(S.dim(), 0, S.W());
  for (const auto& a : elems) M = WMat::hcat(M, S.regular_rep(a));
  return M;
}

int quotient_log_order(const Ring& S, const std::vector<Vec>& elems) {
  return S.W().n * S.dim() - image_log_order(ideal_span(S, elems));
}

QuotientComplex tensor_quotient(const ChainComplex& P, const std::vector<Vec>& J) {
  const Ring& S = P.S;
  const int dim = S.dim();
  WMat span = ideal_span(S, J);
  QuotientComplex Q;
  Q.R = S.W();
  Q.lo = P.lo;
  Q.hi = P.hi;
  for (int i = P.lo; i <= P.hi; ++i) {
    const int r = P.rank(i);
    Q.ranks.push_back(r * dim);
    WMat rel(r * dim, r * span.cols, S.W());
    for (int s = 0; s < r; ++s)
      for (int a = 0; a < dim; ++a)
        for (int c = 0; c < span.cols; ++c) rel(s * dim + a, s * span.cols + c) = span(a, c);
    Q.rel.push_back(rel);
    if (i > P.lo) Q.d.push_back(P.diff(i).expand());
  }
  return Q;
}

namespace {

// S-span of a list of S-vectors (length r each), flattened slot-major
WMat s_span(const Ring& S, const std::vector<Vec>& gens, int r) {
  const int dim = S.dim();
  std::vector<Vec> cols;
  for (const auto& g : gens)
    for (int k = 0; k < dim; ++k) {
      Vec b = S.basis(k), c(std::size_t(r) * dim);
      for (int s = 0; s < r; ++s) {
        Vec gs(g.begin() + std::size_t(s) * dim, g.begin() + std::size_t(s + 1) * dim);
        Vec x = S.mul(b, gs);
        std::copy(x.begin(), x.end(), c.begin() + std::size_t(s) * dim);
      }
      cols.push_back(std::move(c));
    }
  return WMat::from_cols(r * dim, cols, S.W());
}

RMat rmat_from_cols(const Ring& S, int rows, const std::vector<Vec>& cols) {
  const int dim = S.dim();
  RMat M(rows, int(cols.size()), S);
  for (int j = 0; j < int(cols.size()); ++j)
    for (int s = 0; s < rows; ++s)
      M.set(s, j, Vec(cols[j].begin() + std::size_t(s) * dim, cols[j].begin() + std::size_t(s + 1) * dim));
  return M;
}

}  // namespace

ChainComplex greedy_resolution(const Ring& S, const std::vector<Vec>& I, int maxdeg, i64 max_cols) {
  const int dim = S.dim();
  std::vector<Vec> gens;
  for (const auto& a : I)
    if (!S.is_zero(a)) gens.push_back(a);
  std::vector<int> ranks{1};
  std::vector<RMat> ds;
  if (maxdeg >= 1 && !gens.empty()) {
    ranks.push_back(int(gens.size()));
    ds.push_back(rmat_from_cols(S, 1, gens));
  }
  while (int(ranks.size()) <= maxdeg && ranks.back() > 0 && !ds.empty()) {
    const int a = ranks.back();
    if (i64(a) * dim > max_cols) throw BudgetError(fmt::format("greedy resolution exceeds {} columns", max_cols));
    WMat K = kernel_gens(ds.back().expand());
    const int target = image_log_order(K);
    if (target == 0) break;
    std::vector<Vec> chosen;
    int have = 0;
    for (int c = 0; c < K.cols && have < target; ++c) {
      Vec g = K.col(c);
      std::vector<Vec> trial = chosen;
      trial.push_back(g);
      int o = image_log_order(s_span(S, trial, a));
      if (o > have) {
        chosen = std::move(trial);
        have = o;
      }
    }
    ranks.push_back(int(chosen.size()));
    ds.push_back(rmat_from_cols(S, a, chosen));
  }
  ChainComplex C(S, 0, ranks);
  for (int i = 1; i < int(ranks.size()); ++i) C.set_diff(i, ds[i - 1]);
  return C;
}

namespace {

int single_var(const Poly& f) {
  int var = -1;
  std::vector<std::pair<std::vector<int>, i64>> nz;
  for (const auto& t : f.terms)
    if (t.second != 0) nz.push_back(t);
  if (nz.size() != 1 || nz[0].second != 1) return -1;
  for (int i = 0; i < int(nz[0].first.size()); ++i) {
    if (nz[0].first[i] == 0) continue;
    if (nz[0].first[i] != 1 || var >= 0) return -1;
    var = i;
  }
  return var;
}

// the coordinates when I is {X_c} for distinct c, else empty optional
std::optional<std::vector<int>> coordinate_set(const std::vector<Poly>& I) {
  std::vector<int> cs;
  for (const auto& f : I) {
    int v = single_var(f);
    if (v < 0 || std::find(cs.begin(), cs.end(), v) != cs.end()) return std::nullopt;
    cs.push_back(v);
  }
  return cs;
}

bool is_augmentation(const std::vector<Poly>& J, int s) {
  auto cs = coordinate_set(J);
  return cs && int(cs->size()) == s;
}

RingSpec spec_of(const Ring& S) { return RingSpec{S.W().p, S.W().n, S.exponents()}; }

struct Plan {
  std::string strategy;
  Ring ring;  // ring the resolution lives over
  std::optional<ProductResolution> product;
  ChainComplex complex;
  bool exact = true;
  int truncation = -1;
  std::string note;
};

std::vector<Vec> elems(const Ring& S, const std::vector<Poly>& fs) {
  std::vector<Vec> out;
  for (const auto& f : fs) out.push_back(element_in(S, f));
  return out;
}

// a resolution of S/I, or nullopt when no strategy applies
std::optional<Plan> resolve(const TorRing& R, const std::vector<Poly>& I, int maxdeg, bool need_product) {
  Plan pl;
  const bool truncated = R.poly && !R.poly->group_relations;
  if (I.empty()) {
    pl.strategy = "free";
    pl.ring = R.S;
    pl.product = ProductResolution(R.S, {}, maxdeg + 1);
    pl.complex = pl.product->complex();
    return pl;
  }
  if (R.S.kind() == RingKind::Group) {
    if (auto cs = coordinate_set(I)) {
      pl.strategy = "cyclic";
      pl.ring = R.S;
      Resolution r = group_quotient_resolution(spec_of(R.S), *cs, maxdeg + 1);
      pl.product = r.res;
      pl.complex = r.res.complex();
      return pl;
    }
  }
  // Koszul
  {
    KoszulDiagnosis D;
    bool regular;
    Ring K;
    if (R.poly) {
      D = koszul_h1(*R.poly, I);
      K = R.poly->ring();
      regular = D.regular;
    } else {
      K = R.S;
      Subquotient H1 = homology_at(restrict_to_Wn(koszul_complex(K, elems(K, I))), 1);
      regular = H1.is_zero();
    }
    if (regular) {
      std::vector<Factor> fs;
      for (const auto& f : I) {
        Factor F;
        F.ring = K;
        F.coef = {K.zero(), element_in(K, f)};
        fs.push_back(F);
      }
      pl.strategy = "koszul";
      pl.ring = K;
      pl.product = ProductResolution(K, fs, int(I.size()));
      pl.complex = pl.product->complex();
      pl.truncation = D.T;
      if (truncated) pl.note = fmt::format("regularity certified at truncation T={}", D.T);
      return pl;
    }
    if (truncated || need_product) return std::nullopt;
  }
  pl.strategy = "greedy";
  pl.ring = R.S;
  pl.complex = greedy_resolution(R.S, elems(R.S, I), maxdeg + 1);
  return pl;
}

// whether S_T/J already equals the quotient of the full power series ring
bool quotient_stable(const TorRing& R, const std::vector<Poly>& J) {
  if (!R.poly || R.poly->group_relations) return true;
  PolyQuotientRing P2 = *R.poly;
  P2.T += 1;
  Ring S1 = R.poly->ring(), S2 = P2.ring();
  return quotient_log_order(S1, elems(S1, J)) == quotient_log_order(S2, elems(S2, J));
}

}  // namespace

TorModule tor(const TorRing& R, const std::vector<Poly>& I, const std::vector<Poly>& J, int maxdeg) {
  struct Candidate {
    Plan plan;
    bool swapped;
    bool stable;
  };
  std::vector<Candidate> cands;
  for (int sw = 0; sw < 2; ++sw) {
    const auto& A = sw ? J : I;
    const auto& B = sw ? I : J;
    auto pl = resolve(R, A, maxdeg, false);
    if (!pl) continue;
    cands.push_back({*pl, sw == 1, quotient_stable(R, B)});
    if (cands.back().stable) break;
  }
  if (cands.empty()) throw Error("no resolution strategy applies to either module");
  auto best = std::find_if(cands.begin(), cands.end(), [](const Candidate& c) { return c.stable; });
  if (best == cands.end()) best = cands.begin();
  const Plan& pl = best->plan;
  const auto& B = best->swapped ? I : J;
  TorModule out;
  out.strategy = pl.strategy;
  out.swapped = best->swapped;
  out.truncation = pl.truncation;
  out.known_exact = best->stable;
  out.note = pl.note;
  if (!best->stable) out.note += (out.note.empty() ? "" : "; ") + std::string("second module is not finite at this truncation");
  out.H.R = pl.ring.W();
  out.H.lo = 0;
  const int s = pl.ring.nvars();
  if (pl.product && is_augmentation(B, s) && pl.strategy != "greedy") {
    ChainComplex A = pl.product->augmented();
    for (int i = 0; i <= maxdeg; ++i) out.H.divisors.push_back(i <= A.hi ? homology_at(A, i).divisors() : std::vector<int>{});
    return out;
  }
  QuotientComplex Q = tensor_quotient(pl.complex, elems(pl.ring, B));
  for (int i = 0; i <= maxdeg; ++i) out.H.divisors.push_back(i <= Q.hi ? homology_at(Q, i).divisors() : std::vector<int>{});
  return out;
}

Vec GradedAlgebra::unit_coords(int i, int g) const {
  Vec v(rank(i), 0);
  v[g] = 1;
  return v;
}

namespace {

// chain-level product on P tensor S/J; cycles are flattened slot-major over the coefficient ring C
Vec cycle_product(const ProductResolution& P, const Ring& C, int a, const Vec& x, int b, const Vec& y) {
  const int dim = C.dim();
  const auto& ba = P.basis(a);
  const auto& bb = P.basis(b);
  Vec z(P.basis(a + b).size() * dim, 0);
  for (int i = 0; i < int(ba.size()); ++i) {
    Vec xi(x.begin() + std::size_t(i) * dim, x.begin() + std::size_t(i + 1) * dim);
    if (C.is_zero(xi)) continue;
    for (int j = 0; j < int(bb.size()); ++j) {
      Vec yj(y.begin() + std::size_t(j) * dim, y.begin() + std::size_t(j + 1) * dim);
      if (C.is_zero(yj)) continue;
      i64 c;
      int idx;
      if (!P.product(ba[i], bb[j], c, idx)) continue;
      Vec m = C.scale(c, C.mul(xi, yj));
      for (int k = 0; k < dim; ++k) z[std::size_t(idx) * dim + k] = C.W().add(z[std::size_t(idx) * dim + k], m[k]);
    }
  }
  return z;
}

TorAlgebra build_algebra(std::shared_ptr<const ProductResolution> P, const Ring& C, std::vector<Subquotient> H,
                         int maxdeg) {
  TorAlgebra T;
  T.A.W = C.W();
  T.A.maxdeg = maxdeg;
  T.A.H = std::move(H);
  T.module.R = C.W();
  for (const auto& h : T.A.H) T.module.divisors.push_back(h.divisors());
  auto Hs = std::make_shared<std::vector<Subquotient>>(T.A.H);
  const Wn W = C.W();
  T.A.mul = [P, C, Hs, maxdeg, W](int a, const Vec& x, int b, const Vec& y) -> Vec {
    if (a + b > maxdeg) return {};
    if (a + b > P->maxdeg()) return Vec((*Hs)[a + b].ngens(), 0);
    const auto& Ha = (*Hs)[a];
    const auto& Hb = (*Hs)[b];
    Vec cx(Ha.ambient(), 0), cy(Hb.ambient(), 0);
    for (int g = 0; g < Ha.ngens(); ++g) {
      Vec v = Ha.gen(g);
      for (int k = 0; k < Ha.ambient(); ++k) cx[k] = W.add(cx[k], W.mul(x[g], v[k]));
    }
    for (int g = 0; g < Hb.ngens(); ++g) {
      Vec v = Hb.gen(g);
      for (int k = 0; k < Hb.ambient(); ++k) cy[k] = W.add(cy[k], W.mul(y[g], v[k]));
    }
    return (*Hs)[a + b].coords(cycle_product(*P, C, a, cx, b, cy));
  };
  for (int g = 0; g < (maxdeg >= 1 ? T.A.rank(1) : 0); ++g) T.labels.push_back(fmt::format("e_{}", g + 1));
  return T;
}

}  // namespace

TorAlgebra tor_algebra(const ProductResolution& P, const std::vector<Vec>& J, int maxdeg) {
  if (P.maxdeg() < std::min(maxdeg + 1, P.maxdeg())) throw Error("resolution too short");
  QuotientComplex Q = tensor_quotient(P.complex(), J);
  std::vector<Subquotient> H;
  for (int i = 0; i <= maxdeg; ++i) {
    if (i <= Q.hi)
      H.push_back(homology_at(Q, i));
    else
      H.push_back(Subquotient(WMat(1, 0, P.W()), WMat(1, 0, P.W())));
  }
  return build_algebra(std::make_shared<ProductResolution>(P), P.ring(), std::move(H), maxdeg);
}

TorAlgebra tor_algebra_augmented(const ProductResolution& P, int maxdeg) {
  ChainComplex A = P.augmented();
  std::vector<Subquotient> H;
  for (int i = 0; i <= maxdeg; ++i) {
    if (i <= A.hi)
      H.push_back(homology_at(A, i));
    else
      H.push_back(Subquotient(WMat(1, 0, P.W()), WMat(1, 0, P.W())));
  }
  return build_algebra(std::make_shared<ProductResolution>(P), Ring::scalars(P.W()), std::move(H), maxdeg);
}

TorAlgebra tor_algebra(const TorRing& R, const std::vector<Poly>& I, const std::vector<Poly>& J, int maxdeg) {
  auto pl = resolve(R, I, maxdeg, true);
  if (!pl || !pl->product) throw Error("no multiplicative resolution strategy applies");
  TorAlgebra T;
  if (is_augmentation(J, pl->ring.nvars()))
    T = tor_algebra_augmented(*pl->product, maxdeg);
  else
    T = tor_algebra(*pl->product, elems(pl->ring, J), maxdeg);
  T.strategy = pl->strategy;
  T.truncation = pl->truncation;
  T.known_exact = quotient_stable(R, J);
  return T;
}

namespace {

i64 binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  i64 r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool coords_zero(const GradedAlgebra& A, int deg, const Vec& c) {
  const auto& dv = A.H[deg].divisors();
  for (int i = 0; i < int(c.size()); ++i)
    if (c[i] % (dv[i] >= A.W.n ? A.W.q : A.W.pp(dv[i])) != 0) return false;
  return true;
}

Vec coords_add(const GradedAlgebra& A, const Vec& x, const Vec& y) {
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = A.W.add(x[i], y[i]);
  return z;
}

}  // namespace

ExteriorReport exterior_compare(const GradedAlgebra& A, int delta) {
  ExteriorReport rep;
  auto fail = [&](int d, std::string why) {
    rep.ok = false;
    rep.degree = d;
    rep.reason = std::move(why);
    return rep;
  };
  for (int i = 0; i <= A.maxdeg; ++i) {
    const i64 want = binomial(delta, i);
    if (A.rank(i) != want) return fail(i, fmt::format("rank {} in degree {}, expected {}", A.rank(i), i, want));
    for (int e : A.H[i].divisors())
      if (e != A.W.n) return fail(i, fmt::format("torsion summand W/p^{} in degree {}", e, i));
  }
  if (A.maxdeg < 1) return rep;
  const int g = A.rank(1);
  for (int j = 0; j < g; ++j) rep.generator_match.push_back(j);
  if (A.maxdeg >= 2) {
    for (int j = 0; j < g; ++j)
      for (int k = j; k < g; ++k) {
        Vec a = A.mul(1, A.unit_coords(1, j), 1, A.unit_coords(1, k));
        Vec b = A.mul(1, A.unit_coords(1, k), 1, A.unit_coords(1, j));
        if (j == k && !coords_zero(A, 2, a)) return fail(2, fmt::format("e_{} squared is nonzero", j + 1));
        if (!coords_zero(A, 2, coords_add(A, a, b)))
          return fail(2, fmt::format("e_{} and e_{} do not anticommute", j + 1, k + 1));
      }
  }
  // products of increasing subsets of degree-one generators span each degree
  for (int i = 2; i <= std::min(A.maxdeg, delta); ++i) {
    std::vector<Vec> cols;
    for (const auto& S : koszul_basis(g, i)) {
      Vec c = A.unit_coords(1, S[0]);
      for (int t = 1; t < i; ++t) c = A.mul(t, c, 1, A.unit_coords(1, S[t]));
      cols.push_back(c);
    }
    WMat F = WMat::from_cols(A.rank(i), cols, A.W);
    AbGroup G = A.group(i);
    if (hom_image_log_order(F, G) != G.log_order())
      return fail(i, fmt::format("degree {} is not generated by products of degree one", i));
  }
  return rep;
}

AlgebraLaws check_algebra_laws(const GradedAlgebra& A) {
  AlgebraLaws L;
  for (int a = 0; a <= A.maxdeg; ++a)
    for (int b = 0; a + b <= A.maxdeg; ++b)
      for (int x = 0; x < A.rank(a); ++x)
        for (int y = 0; y < A.rank(b); ++y) {
          Vec xy = A.mul(a, A.unit_coords(a, x), b, A.unit_coords(b, y));
          Vec yx = A.mul(b, A.unit_coords(b, y), a, A.unit_coords(a, x));
          if ((a * b) % 2 == 0) {
            for (auto& v : yx) v = A.W.neg(v);
          }
          if (L.commutative && !coords_zero(A, a + b, coords_add(A, xy, yx))) {
            L.commutative = false;
            L.where = fmt::format("graded commutativity fails for generators {} (deg {}) and {} (deg {})", x, a, y, b);
          }
          for (int c = 0; a + b + c <= A.maxdeg; ++c)
            for (int z = 0; z < A.rank(c); ++z) {
              Vec l = A.mul(a + b, xy, c, A.unit_coords(c, z));
              Vec r = A.mul(a, A.unit_coords(a, x), b + c, A.mul(b, A.unit_coords(b, y), c, A.unit_coords(c, z)));
              for (auto& v : r) v = A.W.neg(v);
              if (L.associative && !coords_zero(A, a + b + c, coords_add(A, l, r))) {
                L.associative = false;
                if (L.where.empty()) L.where = fmt::format("associativity fails in degrees {},{},{}", a, b, c);
              }
            }
        }
  return L;
}

namespace {

WMat as_wmat(const RMat& M) { return M.S.trivial() ? M.augmented() : M.expand(); }

}  // namespace

LimitTor limit_tor(const Tower& T, int maxdeg) {
  LimitTor out;
  const int L = int(T.levels.size());
  if (L == 0) throw Error("empty tower");
  if (int(T.maps.size()) != L - 1) throw Error("tower needs one map per consecutive pair of levels");
  std::vector<ChainComplex> lv;
  for (const auto& C : T.levels) lv.push_back(C.S.trivial() ? C : restrict_to_Wn(C));
  // transitions must be chain maps
  for (int k = 0; k + 1 < L; ++k) {
    const Wn Wk = lv[k].S.W();
    const auto& F = T.maps[k];
    for (int i = 1; i <= maxdeg + 1 && i < int(F.size()); ++i) {
      WMat lhs = as_wmat(lv[k].diff(i)) * F[i];
      WMat rhs = F[i - 1] * reduce_to(as_wmat(lv[k + 1].diff(i)), Wk);
      if (!(lhs.a == rhs.a))
        throw Error(fmt::format("non-commuting transitions between levels {} and {} in degree {}", k + 1, k, i));
    }
  }
  // homology per level and induced maps
  std::vector<std::vector<Subquotient>> H(L);
  for (int k = 0; k < L; ++k) {
    GradedModule g;
    g.R = lv[k].S.W();
    for (int i = 0; i <= maxdeg; ++i) {
      H[k].push_back(homology_at(lv[k], i));
      g.divisors.push_back(H[k].back().divisors());
    }
    out.level_tor.push_back(g);
  }
  // F[k][i]: H_i(level k+1) -> H_i(level k), in coordinates
  std::vector<std::vector<WMat>> F(L - 1);
  for (int k = 0; k + 1 < L; ++k) {
    const Wn Wk = lv[k].S.W();
    for (int i = 0; i <= maxdeg; ++i) {
      const auto& src = H[k + 1][i];
      const auto& tgt = H[k][i];
      std::vector<Vec> cols;
      for (int g = 0; g < src.ngens(); ++g) {
        Vec v = src.gen(g);
        for (auto& x : v) x %= Wk.q;
        Vec w = (i < int(T.maps[k].size()) ? T.maps[k][i] : WMat(tgt.ambient(), src.ambient(), Wk)).apply(v);
        cols.push_back(tgt.coords(w));
      }
      F[k].push_back(WMat::from_cols(tgt.ngens(), cols, Wk));
    }
  }
  // composite from level N down to level m
  auto composite = [&](int N, int m, int i) {
    const Wn Wm = lv[m].S.W();
    WMat G = WMat::identity(H[m][i].ngens(), Wm);
    for (int k = m; k < N; ++k) G = G * reduce_to(F[k][i], Wm);
    return G;
  };
  out.ranks.assign(maxdeg + 1, 0);
  out.stable_level.assign(maxdeg + 1, -1);
  if (L < 3) {
    out.note = "at least three levels are needed to certify stabilization";
    for (int i = 0; i <= maxdeg; ++i) out.ranks[i] = H[0][i].ngens();
    return out;
  }
  out.certified = true;
  for (int i = 0; i <= maxdeg; ++i) {
    AbGroup G0{lv[0].S.W(), H[0][i].divisors()};
    std::vector<int> orders;
    for (int N = 0; N < L; ++N) orders.push_back(hom_image_log_order(composite(N, 0, i), G0));
    int st = -1;
    for (int N = L - 2; N >= 1 && orders[N] == orders[N + 1]; --N) st = N;
    out.stable_level[i] = st;
    if (st < 0) out.certified = false;
    out.ranks[i] = int(subgroup_divisors(composite(L - 1, 0, i), G0).size());
  }
  if (!out.certified) out.note = "images did not stabilize within the given levels";
  for (int m = 0; m + 2 < L; ++m) {
    std::vector<std::vector<int>> per;
    for (int i = 0; i <= maxdeg; ++i) {
      AbGroup G{lv[m].S.W(), H[m][i].divisors()};
      per.push_back(subgroup_divisors(composite(L - 1, m, i), G));
    }
    out.stable_divisors.push_back(per);
  }
  return out;
}

Tower group_tower(i64 p, int s, int delta, int n_lo, int n_hi, int maxdeg) {
  if (delta < 0 || delta > s) throw Error("need 0 <= delta <= s");
  if (n_lo < 1 || n_hi < n_lo) throw Error("bad level range");
  std::vector<int> coords;
  for (int c = s - delta; c < s; ++c) coords.push_back(c);
  std::vector<ProductResolution> res;
  Tower T;
  for (int n = n_lo; n <= n_hi; ++n) {
    Resolution r = group_quotient_resolution(RingSpec{p, n, std::vector<int>(s, n)}, coords, maxdeg + 1, false);
    res.push_back(r.res);
    T.levels.push_back(r.res.augmented());
  }
  for (std::size_t k = 0; k + 1 < res.size(); ++k) T.maps.push_back(augmented_comparison(res[k + 1], res[k]));
  return T;
}

CompatReport exterior_compat_check(const CompatInput& in) {
  CompatReport rep;
  const Wn W = in.W;
  const int top = int(in.ranks.size()) - 1;
  const int nv = int(in.act_v.size()), nw = int(in.act_w.size());
  if (int(in.pairing.size()) != nv) throw Error("pairing rows must match the basis of V");
  for (const auto& row : in.pairing)
    if (int(row.size()) != nw) throw Error("pairing columns must match the basis of V*");
  auto rk = [&](int i) { return (i < 0 || i > top) ? 0 : in.ranks[i]; };
  // matrices with zero padding outside the graded range
  auto V = [&](int j, int i) {
    if (i >= top) return WMat(rk(i + 1), rk(i), W);
    const WMat& M = in.act_v[j].at(i);
    if (M.rows != rk(i + 1) || M.cols != rk(i)) throw Error(fmt::format("V-action shape mismatch in degree {}", i));
    return M;
  };
  auto Wd = [&](const std::vector<std::vector<WMat>>& act, int k, int i) {
    if (i <= 0 || i > top) return WMat(rk(i - 1), rk(i), W);
    const WMat& M = act[k].at(i);
    if (M.rows != rk(i - 1) || M.cols != rk(i)) throw Error(fmt::format("V*-action shape mismatch in degree {}", i));
    return M;
  };
  for (int i = 0; i <= top && rep.ok; ++i)
    for (int j = 0; j < nv && rep.ok; ++j)
      for (int k = 0; k < nw && rep.ok; ++k) {
        WMat lhs = Wd(in.act_w, k, i + 1) * V(j, i);
        if (i >= 1) lhs = lhs + V(j, i - 1) * Wd(in.act_w, k, i);
        WMat rhs = WMat::identity(rk(i), W).scaled(W.red(in.pairing[j][k]));
        for (int b = 0; b < rk(i); ++b)
          if (lhs.col(b) != rhs.col(b)) {
            rep.ok = false;
            rep.degree = i;
            rep.v = j;
            rep.w = k;
            rep.basis = b;
            rep.violation = fmt::format("w_{} v_{} + v_{} w_{} differs from the pairing on basis vector {} of degree {}",
                                        k, j, j, k, b, i);
            break;
          }
      }
  // uniqueness: generated from the lowest nonzero degree under V
  int i0 = 0;
  while (i0 <= top && rk(i0) == 0) ++i0;
  if (i0 > top) return rep;
  bool generated = true;
  for (int i = i0 + 1; i <= top && generated; ++i) {
    WMat Y(rk(i), 0, W);
    for (int j = 0; j < nv; ++j) Y = WMat::hcat(Y, V(j, i - 1));
    if (image_log_order(Y) != W.n * rk(i)) generated = false;
  }
  if (!generated) return rep;
  rep.uniqueness_checked = true;
  // the V*-action is zero on the generating degree (nothing below it) and forced above
  std::vector<std::vector<WMat>> rec(nw, std::vector<WMat>(top + 1));
  for (int k = 0; k < nw; ++k) {
    for (int i = 0; i <= i0 && i <= top; ++i) rec[k][i] = WMat(rk(i - 1) > 0 ? rk(i - 1) : 0, rk(i), W);
    for (int i = i0 + 1; i <= top; ++i) {
      // Y columns: v_j x for x a basis vector of degree i-1; Z columns: forced value of w_k on them
      WMat Y(rk(i), 0, W), Z(rk(i - 1), 0, W);
      for (int j = 0; j < nv; ++j) {
        Y = WMat::hcat(Y, V(j, i - 1));
        WMat forced = WMat::identity(rk(i - 1), W).scaled(W.red(in.pairing[j][k]));
        if (i - 1 >= 1) forced = forced - V(j, i - 2) * rec[k][i - 1];
        Z = WMat::hcat(Z, forced);
      }
      // A Y = Z, row by row through the transpose
      WMat A(rk(i - 1), rk(i), W);
      WMat Yt = Y.transpose();
      for (int r = 0; r < rk(i - 1); ++r) {
        Vec zr(Z.cols);
        for (int c = 0; c < Z.cols; ++c) zr[c] = Z(r, c);
        Vec x;
        if (!solve(Yt, zr, x)) {
          rep.unique_matches = false;
          return rep;
        }
        for (int c = 0; c < rk(i); ++c) A(r, c) = x[c];
      }
      rec[k][i] = A;
      if (!(A.a == Wd(in.act_w, k, i).a)) rep.unique_matches = false;
    }
  }
  return rep;
}

CompatInput exterior_model(Wn W, int delta) {
  CompatInput in;
  in.W = W;
  std::vector<std::vector<std::vector<int>>> B;
  for (int i = 0; i <= delta; ++i) {
    B.push_back(koszul_basis(delta, i));
    in.ranks.push_back(int(B.back().size()));
  }
  auto idx = [&](int i, const std::vector<int>& S) {
    return int(std::lower_bound(B[i].begin(), B[i].end(), S) - B[i].begin());
  };
  in.act_v.assign(delta, {});
  in.act_w.assign(delta, {});
  for (int j = 0; j < delta; ++j) {
    for (int i = 0; i < delta; ++i) {
      WMat M(in.ranks[i + 1], in.ranks[i], W);
      for (int c = 0; c < in.ranks[i]; ++c) {
        const auto& S = B[i][c];
        if (std::binary_search(S.begin(), S.end(), j)) continue;
        int below = int(std::lower_bound(S.begin(), S.end(), j) - S.begin());
        std::vector<int> T = S;
        T.insert(T.begin() + below, j);
        M(idx(i + 1, T), c) = below % 2 ? W.neg(1) : 1;
      }
      in.act_v[j].push_back(M);
    }
    in.act_w[j].push_back(WMat(0, in.ranks[0], W));
    for (int i = 1; i <= delta; ++i) {
      WMat M(in.ranks[i - 1], in.ranks[i], W);
      for (int c = 0; c < in.ranks[i]; ++c) {
        const auto& S = B[i][c];
        auto it = std::lower_bound(S.begin(), S.end(), j);
        if (it == S.end() || *it != j) continue;
        int below = int(it - S.begin());
        std::vector<int> T = S;
        T.erase(T.begin() + below);
        M(idx(i - 1, T), c) = below % 2 ? W.neg(1) : 1;
      }
      in.act_w[j].push_back(M);
    }
  }
  in.pairing.assign(delta, std::vector<i64>(delta, 0));
  for (int j = 0; j < delta; ++j) in.pairing[j][j] = 1;
  return in;
}

}  // namespace dtw
