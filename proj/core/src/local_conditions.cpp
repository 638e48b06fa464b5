#include "dtw/local_conditions.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace dtw {

namespace {

bool zero(const Vec& x) {
  return std::all_of(x.begin(), x.end(), [](i64 v) { return v == 0; });
}

Vec add(const Wn& W, const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = W.add(a[i], b[i]);
  return c;
}

Vec sub(const Wn& W, const Vec& a, const Vec& b) {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = W.sub(a[i], b[i]);
  return c;
}

int full_log(const Cochains& C, int k) { return C.tuples(k) * C.M.log_order(); }

// columns of `tests` all lie in span + module relations
bool contained(const Cochains& C, int k, const WMat& span, const WMat& tests) {
  bool all0 = true;
  for (int j = 0; j < tests.cols && all0; ++j) all0 = zero(C.reduce(k, tests.col(j)));
  if (all0) return true;
  if (span.cols == 0) return false;
  WMat base = WMat::hcat(span, C.rel[k]);
  int b = image_log_order(base);
  if (b == full_log(C, k)) return true;
  return image_log_order(WMat::hcat(base, tests)) == b;
}

bool span_is_zero(const Cochains& C, int k, const WMat& span) {
  for (int j = 0; j < span.cols; ++j)
    if (!zero(C.reduce(k, span.col(j)))) return false;
  return true;
}

bool span_is_full(const Cochains& C, int k, const WMat& span) {
  if (span.cols == 0) return C.dims[k] == 0 || full_log(C, k) == 0;
  return image_log_order(WMat::hcat(span, C.rel[k])) == full_log(C, k);
}

AbGroup group_of(const Subquotient& H) { return AbGroup{H.W(), H.divisors()}; }

int log_sum(const std::vector<int>& d) {
  int s = 0;
  for (int e : d) s += e;
  return s;
}

WMat coords_matrix(const Subquotient& H, const WMat& cols) {
  WMat F(H.ngens(), cols.cols, H.W());
  for (int j = 0; j < cols.cols; ++j) F.set_col(j, H.coords(cols.col(j)));
  return F;
}

WMat empty_span(const Cochains& C, int k) { return WMat(C.dims[k], 0, C.W); }

}  // namespace

i64 InvFunctional::eval(const Cochains& Cmu, const Vec& x) const {
  const Wn& W = Cmu.W;
  if (row) {
    if (row->size() != x.size()) throw Error("invariant functional has the wrong length");
    i64 s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s = W.add(s, W.mul(W.red((*row)[i]), W.red(x[i])));
    return s;
  }
  if (!H2.in_V(x)) throw Error("invariant evaluated on a cochain that is not a cocycle");
  Vec c = H2.coords(x);
  i64 s = 0;
  for (int i = 0; i < H2.ngens() && i < int(lambda.size()); ++i)
    s = W.add(s, W.mul(W.mul(W.red(lambda[i]), W.pp(W.n - H2.divisors()[i])), c[i]));
  return s;
}

InvFunctional invariant_from_h2(const Cochains& Cmu, i64 scale) {
  if (Cmu.top < 3) throw Error("invariant needs cochains up to degree 3");
  InvFunctional f;
  f.H2 = Cmu.cohomology(2);
  f.lambda.assign(f.H2.ngens(), 0);
  if (f.H2.ngens()) {
    const auto& dv = f.H2.divisors();
    int best = int(std::max_element(dv.begin(), dv.end()) - dv.begin());
    f.lambda[best] = Cmu.W.red(scale);
  }
  return f;
}

InvFunctional invariant_from_row(const Cochains& Cmu, const Vec& row) {
  if (int(row.size()) != Cmu.dims[2]) throw Error("invariant row must have one entry per 2-cochain coordinate");
  const Wn& W = Cmu.W;
  auto kills = [&](const WMat& A) {
    for (int j = 0; j < A.cols; ++j) {
      i64 s = 0;
      for (int i = 0; i < A.rows; ++i) s = W.add(s, W.mul(W.red(row[i]), A(i, j)));
      if (s) return false;
    }
    return true;
  };
  if (!kills(Cmu.d[1]) || !kills(Cmu.rel[2])) throw Error("invariant row does not vanish on coboundaries");
  InvFunctional f;
  f.row = row;
  return f;
}

ConditionLift zero_lift(const Cochains& C) {
  ConditionLift L;
  for (int k = 0; k <= C.top; ++k) {
    L.span.push_back(empty_span(C, k));
    L.declared.push_back(empty_span(C, k));
  }
  return L;
}

ConditionLift full_lift(const Cochains& C) {
  ConditionLift L;
  for (int k = 0; k <= C.top; ++k) {
    L.span.push_back(WMat::identity(C.dims[k], C.W));
    if (k < C.top)
      L.declared.push_back(C.cohomology(k).gens());
    else
      L.declared.push_back(WMat::identity(C.dims[k], C.W));
  }
  return L;
}

SelmerData make_selmer(const FiniteGroup& G, const GModule& M, const std::vector<PlaceSpec>& places,
                       const std::vector<i64>& chi, int top, i64 budget) {
  SelmerData S;
  S.G = G;
  S.M = M;
  S.top = top;
  S.D = dualize(G, M, chi);
  S.C = cochain_complex(G, M, top, budget);
  S.Cdual = cochain_complex(G, S.D.dual, top, budget);
  S.Cmu = cochain_complex(G, S.D.mu, top, budget);
  for (const auto& ps : places) {
    if (!is_homomorphism(ps.G, G, ps.iota)) throw Error(fmt::format("place {}: map is not a homomorphism", ps.label));
    PlaceData P;
    P.label = ps.label;
    P.G = ps.G;
    P.iota = ps.iota;
    auto side = [&](const GModule& N) {
      LocalSide s;
      s.M = restrict_module(N, ps.G, ps.iota);
      s.C = cochain_complex(ps.G, s.M, top, budget);
      for (int k = 0; k <= top; ++k) s.res.push_back(restriction_matrix(G, ps.G, ps.iota, N, k));
      return s;
    };
    P.prim = side(M);
    P.dual = side(S.D.dual);
    P.mu = side(S.D.mu);
    S.places.push_back(std::move(P));
  }
  return S;
}

void set_lift(SelmerData& S, int v, Side side, ConditionLift L) {
  LocalSide& s = side == Side::Primary ? S.places.at(v).prim : S.places.at(v).dual;
  if (int(L.span.size()) != s.C.top + 1 || int(L.declared.size()) != s.C.top + 1)
    throw Error("lift needs one spanning set and one declared set per degree");
  for (int k = 0; k <= s.C.top; ++k)
    if (L.span[k].rows != s.C.dims[k] || L.declared[k].rows != s.C.dims[k])
      throw Error(fmt::format("lift spanning set in degree {} has the wrong length", k));
  s.lift = std::move(L);
  s.has_lift = true;
}

AxiomReport check_lift(const FiniteGroup& Gv, const Cochains& C, const ConditionLift& L) {
  AxiomReport rep;
  const int top = C.top;
  if (int(L.span.size()) != top + 1 || int(L.declared.size()) != top + 1)
    throw Error("lift needs one spanning set and one declared set per degree");
  std::vector<bool> empty(top + 1), full(top + 1);
  for (int k = 0; k <= top; ++k) {
    empty[k] = span_is_zero(C, k, L.span[k]);
    full[k] = !empty[k] && span_is_full(C, k, L.span[k]);
  }

  for (int k = 0; k < top; ++k) {
    if (empty[k] || full[k + 1]) continue;
    if (!contained(C, k + 1, L.span[k + 1], C.d[k] * L.span[k])) {
      rep.closed = false;
      rep.failures.push_back(fmt::format("(i) d C^{}_L is not inside C^{}_L", k, k + 1));
    }
  }

  for (int k = 0; k <= top; ++k) {
    if (empty[k] || full[k]) continue;
    for (int g = 0; g < Gv.order; ++g) {
      if (g == Gv.identity) continue;
      std::vector<Vec> cols;
      for (int j = 0; j < L.span[k].cols; ++j) cols.push_back(conjugate(Gv, C.M, g, k, L.span[k].col(j)));
      if (!contained(C, k, L.span[k], WMat::from_cols(C.dims[k], cols, C.W))) {
        rep.conjugation = false;
        rep.failures.push_back(fmt::format("(ii) C^{}_L is not stable under conjugation by {}", k, g));
        break;
      }
    }
  }

  // injectivity at the window top is automatic when C^top_L is 0 or everything
  bool top_known = empty[top] || full[top];
  for (int k = 0; k < top; ++k) {
    Subquotient H = C.cohomology(k);
    AbGroup AH = group_of(H);
    WMat ZL(C.dims[k], 0, C.W);
    if (!empty[k]) {
      WMat K = kernel_gens(WMat::hcat(C.d[k] * L.span[k], C.rel[k + 1]));
      ZL = L.span[k] * K.rows_range(0, L.span[k].cols);
    }
    WMat BL = (k == 0 || empty[k - 1]) ? WMat(C.dims[k], 0, C.W) : C.d[k - 1] * L.span[k - 1];
    Subquotient HL(WMat::hcat(ZL, C.rel[k]), WMat::hcat(BL, C.rel[k]));
    rep.lifted.push_back(HL.divisors());
    WMat F = coords_matrix(H, ZL);
    int img = log_sum(subgroup_divisors(F, AH));

    const WMat& D = L.declared[k];
    bool decl_ok = true;
    for (int j = 0; j < D.cols && decl_ok; ++j) decl_ok = C.is_cocycle(k, D.col(j));
    if (decl_ok && !empty[k] && !full[k]) decl_ok = contained(C, k, L.span[k], D);
    if (decl_ok && empty[k]) decl_ok = span_is_zero(C, k, D);
    if (!decl_ok) {
      rep.realizes = false;
      rep.failures.push_back(fmt::format("(iii) declared L^{} is not represented by cocycles of C_L", k));
      continue;
    }
    WMat FD = coords_matrix(H, D);
    int decl = log_sum(subgroup_divisors(FD, AH));
    int both = log_sum(subgroup_divisors(WMat::hcat(F, FD), AH));
    if (HL.log_order() != img) {
      rep.realizes = false;
      rep.failures.push_back(fmt::format("(iii) H^{}(C_L) -> H^{} is not injective", k, k));
    }
    if (img != decl || both != img) {
      rep.realizes = false;
      rep.failures.push_back(fmt::format("(iii) image of H^{}(C_L) differs from the declared L^{}", k, k));
    }
  }

  CoComplex Q = C;
  for (int k = 0; k <= top; ++k) Q.rel[k] = WMat::hcat(C.rel[k], L.span[k]);
  for (int k = 0; k < top; ++k) {
    Subquotient HQ = Q.cohomology(k);
    rep.quotient.push_back(HQ.divisors());
    if (!rep.realizes || (k == top - 1 && !top_known)) continue;
    int expect = C.cohomology(k).log_order() - log_sum(rep.lifted[k]);
    if (HQ.log_order() != expect) {
      rep.realizes = false;
      rep.failures.push_back(fmt::format("(iii) H^{}(C/C_L) has order p^{}, expected p^{}", k, HQ.log_order(), expect));
    }
  }
  return rep;
}

AxiomReport check_axioms(const SelmerData& S, int v) {
  const PlaceData& P = S.places.at(v);
  AxiomReport rep;
  auto merge = [&](const AxiomReport& r, const char* tag) {
    rep.closed = rep.closed && r.closed;
    rep.conjugation = rep.conjugation && r.conjugation;
    rep.realizes = rep.realizes && r.realizes;
    for (const auto& f : r.failures) rep.failures.push_back(fmt::format("{} {}", tag, f));
  };
  if (P.prim.has_lift) {
    AxiomReport r = check_lift(P.G, P.prim.C, P.prim.lift);
    rep.lifted = r.lifted;
    rep.quotient = r.quotient;
    merge(r, "lift:");
  }
  if (P.dual.has_lift) merge(check_lift(P.G, P.dual.C, P.dual.lift), "dual lift:");
  if (P.prim.has_lift && P.dual.has_lift && S.top >= 3) {
    rep.vanishing_checked = true;
    for (int i = 0; i <= 3; ++i) {
      const WMat& A = P.prim.lift.span[i];
      const WMat& B = P.dual.lift.span[3 - i];
      if (span_is_zero(P.prim.C, i, A) || span_is_zero(P.dual.C, 3 - i, B)) continue;
      bool bad = false;
      for (int a = 0; a < A.cols && !bad; ++a)
        for (int b = 0; b < B.cols && !bad; ++b) {
          Vec c = cup(P.G, P.prim.M, P.dual.M, P.mu.M, S.D.eval, i, A.col(a), 3 - i, B.col(b));
          bad = !zero(c);
        }
      if (bad) {
        rep.vanishing = false;
        rep.failures.push_back(fmt::format("(iv) C^{}_L u C^{}_Lperp is not zero", i, 3 - i));
      }
    }
  }
  return rep;
}

std::pair<ConditionLift, ConditionLift> example_unramified_lift(const SelmerData& S, int v, const WMat& l,
                                                                const std::optional<WMat>& h1_pairing) {
  const PlaceData& P = S.places.at(v);
  const Cochains& C = P.prim.C;
  const Cochains& Cd = P.dual.C;
  if (C.top < 2) throw Error("unramified lift needs cochains up to degree 2");
  if (l.rows != C.dims[1]) throw Error("l must be given by 1-cochains of the local module");
  for (int j = 0; j < l.cols; ++j)
    if (!C.is_cocycle(1, l.col(j))) throw Error("spanning set of l contains a non-cocycle");

  Subquotient H1d = Cd.cohomology(1);
  const Wn& W = C.W;
  WMat Psi(l.cols, H1d.ngens(), W);
  if (P.inv) {
    for (int k = 0; k < l.cols; ++k)
      for (int j = 0; j < H1d.ngens(); ++j)
        Psi(k, j) = P.inv->eval(P.mu.C, cup(P.G, P.prim.M, P.dual.M, P.mu.M, S.D.eval, 1, l.col(k), 1, H1d.gen(j)));
  } else if (h1_pairing) {
    Subquotient H1 = C.cohomology(1);
    if (h1_pairing->rows != H1.ngens() || h1_pairing->cols != H1d.ngens())
      throw Error("H^1 pairing matrix does not match the H^1 generators");
    for (int k = 0; k < l.cols; ++k) {
      Vec c = H1.coords(l.col(k));
      for (int j = 0; j < H1d.ngens(); ++j) {
        i64 s = 0;
        for (int i = 0; i < H1.ngens(); ++i) s = W.add(s, W.mul(c[i], W.red((*h1_pairing)(i, j))));
        Psi(k, j) = s;
      }
    }
  } else {
    throw Error("no pairing available for the orthogonal complement of l");
  }
  // y with sum_j Psi_kj y_j = 0; y_j only matters mod p^{f_j}
  WMat K = H1d.ngens() ? kernel_gens(Psi) : WMat(0, 0, W);
  std::vector<Vec> perp;
  for (int c = 0; c < K.cols; ++c) {
    Vec x(Cd.dims[1], 0);
    for (int j = 0; j < H1d.ngens(); ++j) {
      Vec b = H1d.gen(j);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = W.add(x[i], W.mul(K(j, c), b[i]));
    }
    x = Cd.reduce(1, x);
    if (!zero(x)) perp.push_back(x);
  }
  WMat lperp = WMat::from_cols(Cd.dims[1], perp, W);

  auto build = [](const Cochains& X, const WMat& line) {
    ConditionLift L = zero_lift(X);
    L.span[0] = WMat::identity(X.dims[0], X.W);
    L.declared[0] = X.cohomology(0).gens();
    L.span[1] = WMat::hcat(line, X.d[0]);
    L.declared[1] = line;
    return L;
  };
  return {build(C, l), build(Cd, lperp)};
}

Vec SelmerComplex::global_part(int n, const Vec& xi) const {
  return Vec(xi.begin(), xi.begin() + global_dims[n]);
}

Vec SelmerComplex::local_part(int n, int v, int len, const Vec& xi) const {
  return Vec(xi.begin() + offsets[n][v], xi.begin() + offsets[n][v] + len);
}

SelmerComplex cone_selmer_complex(const SelmerData& S, Side side, int T) {
  if (T < 0) T = S.top;
  if (T > S.top) throw Error("cone window exceeds the cochain window");
  const Cochains& C = side == Side::Primary ? S.C : S.Cdual;
  std::vector<const LocalSide*> loc;
  for (const auto& P : S.places) {
    const LocalSide& s = side == Side::Primary ? P.prim : P.dual;
    if (!s.has_lift) throw Error(fmt::format("place {} has no lift on this side", P.label));
    loc.push_back(&s);
  }
  const Wn W = C.W;
  SelmerComplex X;
  X.W = W;
  X.top = T;
  for (int n = 0; n <= T; ++n) {
    X.global_dims.push_back(C.dims[n]);
    std::vector<int> off;
    int dim = C.dims[n];
    for (const auto* s : loc) {
      off.push_back(dim);
      if (n >= 1) dim += s->C.dims[n - 1];
    }
    X.offsets.push_back(off);
    X.dims.push_back(dim);
  }
  for (int n = 0; n <= T; ++n) {
    WMat R(X.dims[n], 0, W);
    WMat g(X.dims[n], C.rel[n].cols, W);
    for (int j = 0; j < C.rel[n].cols; ++j)
      for (int i = 0; i < C.dims[n]; ++i) g(i, j) = C.rel[n](i, j);
    R = WMat::hcat(R, g);
    if (n >= 1)
      for (std::size_t v = 0; v < loc.size(); ++v) {
        const LocalSide& s = *loc[v];
        WMat lr = WMat::hcat(s.C.rel[n - 1], s.lift.span[n - 1]);
        WMat b(X.dims[n], lr.cols, W);
        for (int j = 0; j < lr.cols; ++j)
          for (int i = 0; i < lr.rows; ++i) b(X.offsets[n][v] + i, j) = lr(i, j);
        R = WMat::hcat(R, b);
      }
    X.rel.push_back(R);
  }
  for (int n = 0; n < T; ++n) {
    WMat D(X.dims[n + 1], X.dims[n], W);
    for (int i = 0; i < C.dims[n + 1]; ++i)
      for (int j = 0; j < C.dims[n]; ++j) D(i, j) = W.neg(C.d[n](i, j));
    for (std::size_t v = 0; v < loc.size(); ++v) {
      const LocalSide& s = *loc[v];
      const int o1 = X.offsets[n + 1][v];
      const WMat& res = s.res[n];
      for (int i = 0; i < res.rows; ++i)
        for (int j = 0; j < res.cols; ++j)
          if (res(i, j)) D(o1 + i, j) = res(i, j);
      if (n >= 1) {
        const int o0 = X.offsets[n][v];
        const WMat& dl = s.C.d[n - 1];
        for (int i = 0; i < dl.rows; ++i)
          for (int j = 0; j < dl.cols; ++j) D(o1 + i, o0 + j) = dl(i, j);
      }
    }
    X.d.push_back(D);
  }
  return X;
}

namespace {

CoComplex truncate(const CoComplex& C, int T) {
  CoComplex X;
  X.W = C.W;
  X.top = T;
  X.dims.assign(C.dims.begin(), C.dims.begin() + T + 1);
  X.rel.assign(C.rel.begin(), C.rel.begin() + T + 1);
  X.d.assign(C.d.begin(), C.d.begin() + T);
  return X;
}

}  // namespace

SelmerLesReport selmer_les(const SelmerData& S, Side side, int T) {
  if (T < 1) throw Error("long exact sequence needs a window of at least one degree");
  SelmerComplex X = cone_selmer_complex(S, side, T);
  const Cochains& C = side == Side::Primary ? S.C : S.Cdual;
  CoComplex G = truncate(C, T);
  const Wn W = C.W;
  std::vector<const LocalSide*> loc;
  for (const auto& P : S.places) loc.push_back(side == Side::Primary ? &P.prim : &P.dual);

  // sum of local quotient complexes over degrees 0..T-1
  CoComplex Q;
  Q.W = W;
  Q.top = T - 1;
  std::vector<std::vector<int>> qoff(T);
  for (int k = 0; k < T; ++k) {
    int dim = 0;
    for (const auto* s : loc) {
      qoff[k].push_back(dim);
      dim += s->C.dims[k];
    }
    Q.dims.push_back(dim);
    WMat R(dim, 0, W);
    for (std::size_t v = 0; v < loc.size(); ++v) {
      WMat lr = WMat::hcat(loc[v]->C.rel[k], loc[v]->lift.span[k]);
      WMat b(dim, lr.cols, W);
      for (int j = 0; j < lr.cols; ++j)
        for (int i = 0; i < lr.rows; ++i) b(qoff[k][v] + i, j) = lr(i, j);
      R = WMat::hcat(R, b);
    }
    Q.rel.push_back(R);
  }
  for (int k = 0; k + 1 < T; ++k) {
    WMat D(Q.dims[k + 1], Q.dims[k], W);
    for (std::size_t v = 0; v < loc.size(); ++v) {
      const WMat& dl = loc[v]->C.d[k];
      for (int i = 0; i < dl.rows; ++i)
        for (int j = 0; j < dl.cols; ++j) D(qoff[k + 1][v] + i, qoff[k][v] + j) = dl(i, j);
    }
    Q.d.push_back(D);
  }

  SelmerLesReport rep;
  std::vector<Subquotient> groups;
  std::vector<WMat> maps;  // maps[i]: groups[i] -> groups[i+1]
  std::vector<std::string> names;
  WMat delta;
  for (int k = 0; k <= T; ++k) {
    Subquotient HL = X.cohomology(k), HG = G.cohomology(k);
    rep.selmer.push_back(HL.divisors());
    rep.global.push_back(HG.divisors());
    if (k > 0) maps.push_back(induced_on(delta, groups.back(), HL));
    WMat pi(G.dims[k], X.dims[k], W);
    for (int i = 0; i < G.dims[k]; ++i) pi(i, i) = 1;
    groups.push_back(HL);
    names.push_back(fmt::format("H^{}_L", k));
    maps.push_back(induced_on(pi, HL, HG));
    groups.push_back(HG);
    names.push_back(fmt::format("H^{}", k));
    if (k == T) break;
    Subquotient HQ = Q.cohomology(k);
    rep.local.push_back(HQ.divisors());
    WMat rho(Q.dims[k], G.dims[k], W);
    for (std::size_t v = 0; v < loc.size(); ++v) {
      const WMat& r = loc[v]->res[k];
      for (int i = 0; i < r.rows; ++i)
        for (int j = 0; j < r.cols; ++j) rho(qoff[k][v] + i, j) = r(i, j);
    }
    maps.push_back(induced_on(rho, HG, HQ));
    groups.push_back(HQ);
    names.push_back(fmt::format("H^{}(C_v/C_L)", k));
    // connecting map y -> (0, y)
    delta = WMat(X.dims[k + 1], Q.dims[k], W);
    for (std::size_t v = 0; v < loc.size(); ++v)
      for (int i = 0; i < loc[v]->C.dims[k]; ++i) delta(X.offsets[k + 1][v] + i, qoff[k][v] + i) = 1;
  }

  const AbGroup Z{W, {}};
  std::vector<AbGroup> A;
  for (const auto& g : groups) A.push_back(group_of(g));
  const std::size_t m = groups.size();
  for (std::size_t i = 0; i < m; ++i) {
    WMat f = i == 0 ? WMat(A[0].rank(), 0, W) : maps[i - 1];
    WMat g = i + 1 < m ? maps[i] : WMat(0, A[i].rank(), W);
    const AbGroup& prev = i == 0 ? Z : A[i - 1];
    const AbGroup& next = i + 1 < m ? A[i + 1] : Z;
    ++rep.spots;
    if (!exact_at(f, g, prev, A[i], next)) {
      rep.exact = false;
      if (rep.failure.empty()) rep.failure = fmt::format("not exact at {}", names[i]);
    }
  }
  return rep;
}

PairingResult duality_pairing(const SelmerData& S, const SelmerComplex& cone, const SelmerComplex& cone_dual,
                              const Vec& xi, const Vec& xi_dual, const PairingOptions& opt) {
  if (cone.top < 2 || cone_dual.top < 3) throw Error("pairing needs cones built through degrees 2 and 3");
  if (S.top < 3) throw Error("pairing needs cochains through degree 3");
  if (!cone.is_cocycle(1, xi)) throw Error("first argument is not a 1-cocycle of the Selmer complex");
  if (!cone_dual.is_cocycle(2, xi_dual)) throw Error("second argument is not a 2-cocycle of the dual Selmer complex");
  const Wn W = S.C.W;
  Vec x = cone.global_part(1, xi);
  Vec xd = cone_dual.global_part(2, xi_dual);
  Vec xx = cup(S.G, S.M, S.D.dual, S.D.mu, S.D.eval, 1, x, 2, xd);
  PairingResult out;
  if (!S.Cmu.is_coboundary(3, xx, &out.z))
    throw Error("no global z with dz = x u x'; the global model has a nonzero obstruction in degree 3");
  if (opt.shift_z) {
    if (!S.Cmu.is_cocycle(2, *opt.shift_z)) throw Error("z shift is not a cocycle");
    out.z = S.Cmu.reduce(2, add(W, out.z, *opt.shift_z));
  }
  for (std::size_t v = 0; v < S.places.size(); ++v) {
    const PlaceData& P = S.places[v];
    if (!P.inv) throw Error(fmt::format("place {} has no invariant functional", P.label));
    const Cochains &Cv = P.prim.C, &Cd = P.dual.C, &Cm = P.mu.C;
    Vec y = cone.local_part(1, int(v), Cv.dims[0], xi);
    Vec yd = cone_dual.local_part(2, int(v), Cd.dims[1], xi_dual);
    if (v < opt.shift_y.size() && !opt.shift_y[v].empty()) {
      if (!Cv.in_span(0, P.prim.lift.span[0], opt.shift_y[v])) throw Error("y shift leaves C^0_L");
      y = add(W, y, opt.shift_y[v]);
    }
    if (v < opt.shift_y_dual.size() && !opt.shift_y_dual[v].empty()) {
      if (!Cd.in_span(1, P.dual.lift.span[1], opt.shift_y_dual[v])) throw Error("y' shift leaves C^1_Lperp");
      yd = add(W, yd, opt.shift_y_dual[v]);
    }
    Vec xv = P.prim.res[1].apply(x), xdv = P.dual.res[2].apply(xd), zv = P.mu.res[2].apply(out.z);
    Vec eps = Cv.reduce(1, add(W, Cv.d[0].apply(y), xv));
    Vec epsd = Cd.reduce(2, add(W, Cd.d[1].apply(yd), xdv));
    if (!Cv.in_span(1, P.prim.lift.span[1], eps)) throw Error(fmt::format("epsilon leaves C^1_L at {}", P.label));
    if (!Cd.in_span(2, P.dual.lift.span[2], epsd))
      throw Error(fmt::format("epsilon' leaves C^2_Lperp at {}", P.label));
    auto c = [&](int i, const Vec& a, int j, const Vec& b) {
      return cup(P.G, P.prim.M, P.dual.M, P.mu.M, S.D.eval, i, a, j, b);
    };
    Vec Pv = opt.symmetric ? add(W, sub(W, c(0, y, 2, epsd), c(1, xv, 1, yd)), zv)
                           : add(W, sub(W, c(0, y, 2, xdv), c(1, eps, 1, yd)), zv);
    Pv = Cm.reduce(2, Pv);
    Vec ee = c(1, eps, 2, epsd);
    Vec dP = Cm.reduce(3, Cm.d[2].apply(Pv));
    out.local_cocycles = out.local_cocycles && zero(Cm.reduce(3, sub(W, dP, ee)));
    out.eps_cup_zero = out.eps_cup_zero && zero(ee);
    if (!zero(dP)) throw Error(fmt::format("local pairing cochain at {} is not a cocycle", P.label));
    i64 val = P.inv->eval(Cm, Pv);
    out.local_values.push_back(val);
    out.value = W.add(out.value, val);
  }
  return out;
}

i64 degree_zero_pairing(const SelmerData& S, const Vec& alpha, const std::vector<Vec>& beta) {
  if (beta.size() != S.places.size()) throw Error("need one local class per place");
  const Wn W = S.C.W;
  i64 val = 0;
  for (std::size_t v = 0; v < S.places.size(); ++v) {
    const PlaceData& P = S.places[v];
    if (!P.inv) throw Error(fmt::format("place {} has no invariant functional", P.label));
    if (!P.prim.has_lift) throw Error(fmt::format("place {} has no lift", P.label));
    Vec a = P.prim.res[0].apply(alpha);
    if (!P.prim.C.in_span(0, P.prim.lift.span[0], a))
      throw Error(fmt::format("alpha violates the local condition at {}", P.label));
    if (!P.dual.C.is_cocycle(2, beta[v])) throw Error(fmt::format("beta is not a cocycle at {}", P.label));
    Vec c = cup(P.G, P.prim.M, P.dual.M, P.mu.M, S.D.eval, 0, a, 2, beta[v]);
    val = W.add(val, P.inv->eval(P.mu.C, c));
  }
  return val;
}

WMat reciprocal_invariants(const SelmerData& S) {
  const Wn W = S.Cmu.W;
  Subquotient H = S.Cmu.cohomology(2);
  std::vector<Subquotient> loc;
  int cols = 0;
  for (const auto& P : S.places) {
    loc.push_back(P.mu.C.cohomology(2));
    cols += loc.back().ngens();
  }
  WMat A(H.ngens(), cols, W);
  for (int m = 0; m < H.ngens(); ++m) {
    int c0 = 0;
    for (std::size_t v = 0; v < S.places.size(); ++v) {
      Vec c = loc[v].coords(S.places[v].mu.res[2].apply(H.gen(m)));
      for (int i = 0; i < loc[v].ngens(); ++i) A(m, c0 + i) = W.mul(W.pp(W.n - loc[v].divisors()[i]), c[i]);
      c0 += loc[v].ngens();
    }
  }
  if (cols == 0) return WMat(0, 0, W);
  if (A.rows == 0) return WMat::identity(cols, W);
  return kernel_gens(A);
}

void set_invariants(SelmerData& S, const Vec& lambda) {
  std::size_t c0 = 0;
  for (auto& P : S.places) {
    InvFunctional f;
    f.H2 = P.mu.C.cohomology(2);
    if (c0 + f.H2.ngens() > lambda.size()) throw Error("lambda is too short for the local H^2 generators");
    f.lambda.assign(lambda.begin() + c0, lambda.begin() + c0 + f.H2.ngens());
    c0 += f.H2.ngens();
    P.inv = std::move(f);
  }
  if (c0 != lambda.size()) throw Error("lambda is longer than the local H^2 generators");
}

std::vector<i64> reciprocity_defect(const SelmerData& S) {
  const Wn W = S.Cmu.W;
  Subquotient H = S.Cmu.cohomology(2);
  std::vector<i64> out;
  for (int m = 0; m < H.ngens(); ++m) {
    i64 s = 0;
    for (const auto& P : S.places) {
      if (!P.inv) throw Error(fmt::format("place {} has no invariant functional", P.label));
      s = W.add(s, P.inv->eval(P.mu.C, P.mu.res[2].apply(H.gen(m))));
    }
    out.push_back(s);
  }
  return out;
}

PairingMatrix pairing_matrix(const SelmerData& S, const SelmerComplex& cone, const SelmerComplex& cone_dual) {
  Subquotient H1 = cone.cohomology(1), H2 = cone_dual.cohomology(2);
  PairingMatrix out;
  out.values = WMat(H1.ngens(), H2.ngens(), S.C.W);
  out.left_log = H1.log_order();
  out.right_log = H2.log_order();
  for (int i = 0; i < H1.ngens(); ++i)
    for (int j = 0; j < H2.ngens(); ++j) {
      try {
        out.values(i, j) = duality_pairing(S, cone, cone_dual, H1.gen(i), H2.gen(j)).value;
      } catch (const Error&) {
        ++out.skipped;
      }
    }
  out.image_log = out.values.rows && out.values.cols ? image_log_order(out.values) : 0;
  return out;
}

Vec random_cocycle(const CoComplex& C, const Subquotient& H, int k, std::mt19937_64& rng) {
  const Wn& W = C.W;
  std::uniform_int_distribution<i64> U(0, W.q - 1);
  Vec x(C.dims[k], 0);
  for (int i = 0; i < H.ngens(); ++i) {
    i64 c = U(rng);
    Vec g = H.gen(i);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = W.add(x[t], W.mul(c, g[t]));
  }
  if (k >= 1) {
    Vec y(C.dims[k - 1]);
    for (auto& v : y) v = U(rng);
    x = add(W, x, C.d[k - 1].apply(y));
  }
  return x;
}

namespace {

std::vector<int> generators(const FiniteGroup& G) {
  std::vector<int> gens;
  std::vector<bool> in(G.order, false);
  in[G.identity] = true;
  for (int g = 0; g < G.order; ++g) {
    if (in[g]) continue;
    gens.push_back(g);
    // closure under right multiplication by all generators
    std::vector<int> stack;
    for (int h = 0; h < G.order; ++h)
      if (in[h]) stack.push_back(h);
    while (!stack.empty()) {
      int h = stack.back();
      stack.pop_back();
      for (int s : gens) {
        int hs = G.mul(h, s);
        if (!in[hs]) {
          in[hs] = true;
          stack.push_back(hs);
        }
      }
    }
  }
  return gens;
}

struct NamedGroup {
  std::string name;
  FiniteGroup G;
};

std::vector<NamedGroup> small_groups(int max_order) {
  std::vector<NamedGroup> all = {
      {"Z/2", FiniteGroup::cyclic(2)},
      {"Z/3", FiniteGroup::cyclic(3)},
      {"Z/4", FiniteGroup::cyclic(4)},
      {"Z/2xZ/2", FiniteGroup::abelian_group({2, 2})},
      {"Z/6", FiniteGroup::cyclic(6)},
      {"S3", FiniteGroup::dihedral(3)},
      {"Z/8", FiniteGroup::cyclic(8)},
      {"Z/2xZ/4", FiniteGroup::abelian_group({2, 4})},
      {"D4", FiniteGroup::dihedral(4)},
      {"Q8", FiniteGroup::quaternion()},
  };
  std::vector<NamedGroup> out;
  for (auto& g : all)
    if (g.G.order <= max_order) out.push_back(g);
  return out;
}

GModule random_action(const FiniteGroup& G, const Wn& W, int r, std::mt19937_64& rng) {
  const std::vector<int> gens = generators(G);
  std::uniform_int_distribution<i64> U(0, W.q - 1);
  std::vector<int> div(r, W.n);
  for (int attempt = 0; attempt < 40; ++attempt) {
    std::vector<std::pair<int, WMat>> acts;
    for (int g : gens) {
      WMat A(r, r, W);
      if (attempt % 2) {
        // signed permutation; these satisfy small relations often
        std::vector<int> perm(r);
        for (int i = 0; i < r; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < r; ++i) A(perm[i], i) = (rng() & 1) ? 1 : W.neg(1);
      } else {
        for (auto& x : A.a) x = U(rng);
      }
      acts.push_back({g, A});
    }
    try {
      return GModule::from_generators(G, W.p, div, acts);
    } catch (const Error&) {
    }
  }
  return GModule::trivial(G, W.p, div);
}

}  // namespace

SelmerInstance random_selmer(std::uint64_t seed, int max_group, int max_module) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return int(std::uniform_int_distribution<int>(0, n - 1)(rng)); };
  auto groups = small_groups(max_group);
  if (groups.empty()) throw Error("no group fits the requested order bound");
  const NamedGroup NG = groups[pick(int(groups.size()))];
  const FiniteGroup& G = NG.G;

  // p divides |G| so that the cohomology is not killed by averaging
  std::vector<i64> primes;
  for (i64 q : {2, 3})
    if (G.order % q == 0) primes.push_back(q);
  const i64 p = primes[pick(int(primes.size()))];
  std::vector<std::pair<int, int>> shapes;  // (n, r) with p^{nr} <= max_module
  for (int n = 1; n <= 2; ++n)
    for (int r = 1; r <= 4; ++r) {
      i64 size = 1;
      for (int i = 0; i < n * r; ++i) size *= p;
      if (size <= max_module && !(G.order == 8 && r > 2)) shapes.push_back({n, r});
    }
  auto [n, r] = shapes[pick(int(shapes.size()))];
  const Wn W(p, n);
  GModule M = random_action(G, W, r, rng);

  std::vector<PlaceSpec> specs;
  // a single place forces the reciprocal invariants to vanish on its image, so use two or three,
  // often two copies of the whole group
  const int nplaces = 2 + pick(2);
  const bool twin = pick(2) == 0;
  std::string where;
  for (int v = 0; v < nplaces; ++v) {
    PlaceSpec ps;
    ps.label = fmt::format("v{}", v);
    if ((twin && v < 2) || pick(3) == 0) {
      ps.G = G;
      for (int g = 0; g < G.order; ++g) ps.iota.push_back(g);
      where += " G";
    } else {
      int g = pick(G.order);
      ps.iota = cyclic_subgroup(G, g, &ps.G);
      where += fmt::format(" <{}>", g);
    }
    specs.push_back(std::move(ps));
  }

  SelmerInstance I;
  I.S = make_selmer(G, M, specs, {}, 3);
  SelmerData& S = I.S;
  WMat K = reciprocal_invariants(S);
  std::uniform_int_distribution<i64> U(0, W.q - 1);
  Vec lambda(K.rows, 0);
  for (int c = 0; c < K.cols; ++c) {
    i64 a = U(rng);
    for (int i = 0; i < K.rows; ++i) lambda[i] = W.add(lambda[i], W.mul(a, K(i, c)));
  }
  set_invariants(S, lambda);

  std::string kinds;
  for (int v = 0; v < nplaces; ++v) {
    PlaceData& P = S.places[v];
    int kind = pick(4);
    if (kind <= 1) {
      Subquotient H1 = P.prim.C.cohomology(1);
      std::vector<Vec> ls;
      const int m = H1.ngens() ? pick(H1.ngens() + 1) : 0;
      for (int j = 0; j < m; ++j) ls.push_back(P.prim.C.reduce(1, random_cocycle(P.prim.C, H1, 1, rng)));
      auto [L, Ld] = example_unramified_lift(S, v, WMat::from_cols(P.prim.C.dims[1], ls, W));
      set_lift(S, v, Side::Primary, L);
      set_lift(S, v, Side::Dual, Ld);
      kinds += " unr";
    } else if (kind == 2) {
      set_lift(S, v, Side::Primary, zero_lift(P.prim.C));
      set_lift(S, v, Side::Dual, full_lift(P.dual.C));
      kinds += " zero";
    } else {
      set_lift(S, v, Side::Primary, full_lift(P.prim.C));
      set_lift(S, v, Side::Dual, zero_lift(P.dual.C));
      kinds += " full";
    }
  }
  I.description = fmt::format("G={} p={} n={} r={} places:{} lifts:{}", NG.name, p, n, r, where, kinds);
  return I;
}

}  // namespace dtw
