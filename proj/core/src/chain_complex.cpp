#include "dtw/chain_complex.hpp"

#include <fmt/format.h>

namespace dtw {

ChainComplex::ChainComplex(Ring ring, int lo_, std::vector<int> ranks_)
    : S(ring), lo(lo_), hi(lo_ + int(ranks_.size()) - 1), ranks(std::move(ranks_)) {
  for (int i = lo + 1; i <= hi; ++i) d.emplace_back(rank(i - 1), rank(i), S);
}

RMat ChainComplex::diff(int i) const {
  if (i <= lo || i > hi) return RMat(rank(i - 1), rank(i), S);
  return d[i - lo - 1];
}

void ChainComplex::set_diff(int i, const RMat& m) {
  if (i <= lo || i > hi) throw Error(fmt::format("no differential out of degree {}", i));
  if (m.rows != rank(i - 1) || m.cols != rank(i)) throw Error(fmt::format("differential shape mismatch at degree {}", i));
  d[i - lo - 1] = m;
}

ValidationReport validate(const ChainComplex& C) {
  if (int(C.ranks.size()) != std::max(0, C.hi - C.lo + 1)) return {false, C.lo, "rank list does not match degree range"};
  for (int i = C.lo + 1; i <= C.hi; ++i) {
    const RMat& m = C.d[i - C.lo - 1];
    if (m.rows != C.rank(i - 1) || m.cols != C.rank(i)) return {false, i, "differential shape mismatch"};
    if (!(m.S == C.S)) return {false, i, "differential over a different ring"};
  }
  for (int i = C.lo + 2; i <= C.hi; ++i)
    if (!(C.diff(i - 1) * C.diff(i)).is_zero()) return {false, i, fmt::format("d_{} d_{} != 0", i - 1, i)};
  return {};
}

const std::vector<int>& GradedModule::at(int i) const {
  static const std::vector<int> none;
  if (i < lo || i >= lo + int(divisors.size())) return none;
  return divisors[i - lo];
}

int GradedModule::free_rank(int i) const {
  int c = 0;
  for (int e : at(i)) c += (e == R.n);
  return c;
}

WMat QuotientComplex::diff(int i) const {
  if (i <= lo || i > hi) return WMat(rank(i - 1), rank(i), R);
  return d[i - lo - 1];
}

WMat QuotientComplex::relations(int i) const {
  if (i < lo || i > hi) return WMat(0, 0, R);
  return rel[i - lo];
}

Subquotient homology_at(const QuotientComplex& C, int i) {
  const int r = C.rank(i);
  WMat dout = C.diff(i);
  WMat relo = C.relations(i - 1);
  WMat Z;
  if (relo.cols == 0 || relo.rows == 0) {
    Z = kernel_gens(dout);
  } else {
    Z = kernel_gens(WMat::hcat(dout, relo)).rows_range(0, r);
  }
  WMat din = C.diff(i + 1);
  WMat reli = C.relations(i);
  WMat U = (reli.cols && reli.rows) ? WMat::hcat(din, reli) : din;
  if (U.rows != r) U = WMat(r, 0, C.R);
  return Subquotient(Z, U);
}

QuotientComplex as_quotient_complex(const ChainComplex& C) {
  if (!C.S.trivial()) throw Error("homology needs W_n coefficients; base-change the group algebra first");
  QuotientComplex Q;
  Q.R = C.S.W();
  Q.lo = C.lo;
  Q.hi = C.hi;
  Q.ranks = C.ranks;
  for (const auto& m : C.d) Q.d.push_back(m.augmented());
  for (int i = C.lo; i <= C.hi; ++i) Q.rel.emplace_back(C.rank(i), 0, Q.R);
  return Q;
}

Subquotient homology_at(const ChainComplex& C, int i) { return homology_at(as_quotient_complex(C), i); }

GradedModule homology(const ChainComplex& C) {
  QuotientComplex Q = as_quotient_complex(C);
  GradedModule G;
  G.R = Q.R;
  G.lo = C.lo;
  for (int i = C.lo; i <= C.hi; ++i) G.divisors.push_back(homology_at(Q, i).divisors());
  return G;
}

RMat ChainMap::at(int i) const {
  if (i < src.lo || i > src.hi) return RMat(tgt.rank(i), src.rank(i), src.S);
  return f[i - src.lo];
}

ValidationReport validate(const ChainMap& m) {
  for (int i = m.src.lo; i <= m.src.hi; ++i) {
    RMat fi = m.at(i);
    if (fi.rows != m.tgt.rank(i) || fi.cols != m.src.rank(i)) return {false, i, "chain map shape mismatch"};
  }
  for (int i = std::min(m.src.lo, m.tgt.lo); i <= std::max(m.src.hi, m.tgt.hi) + 1; ++i) {
    RMat l = m.tgt.diff(i) * m.at(i);
    RMat r = m.at(i - 1) * m.src.diff(i);
    if (!(l == r)) return {false, i, fmt::format("d f != f d at degree {}", i)};
  }
  return {};
}

ChainMap identity_map(const ChainComplex& C) {
  ChainMap m{C, C, {}};
  for (int i = C.lo; i <= C.hi; ++i) m.f.push_back(RMat::identity(C.rank(i), C.S));
  return m;
}

ChainMap zero_map(const ChainComplex& A, const ChainComplex& B) {
  ChainMap m{A, B, {}};
  for (int i = A.lo; i <= A.hi; ++i) m.f.emplace_back(B.rank(i), A.rank(i), A.S);
  return m;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  ChainMap m{f.src, g.tgt, {}};
  for (int i = f.src.lo; i <= f.src.hi; ++i) m.f.push_back(g.at(i) * f.at(i));
  return m;
}

WMat induced_map(const ChainMap& f, int i, const Subquotient& Hs, const Subquotient& Ht) {
  WMat fi = f.at(i).augmented();
  WMat M(Ht.ngens(), Hs.ngens(), Ht.W());
  for (int j = 0; j < Hs.ngens(); ++j) M.set_col(j, Ht.coords(fi.apply(Hs.gen(j))));
  return M;
}

namespace {

// place block B at (r0, c0) of M
void put(RMat& M, int r0, int c0, const RMat& B, bool negate = false) {
  const Ring& S = M.S;
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) {
      Vec x = B.get(i, j);
      M.set(r0 + i, c0 + j, negate ? S.neg(x) : x);
    }
}

ChainComplex mapping_complex(const ChainMap& f, int offset) {
  // term n = A_{n-offset} + B_{n-offset+1}; offset 1 gives the cone, 0 the fibre
  const ChainComplex& A = f.src;
  const ChainComplex& B = f.tgt;
  if (!(A.S == B.S)) throw Error("chain map between complexes over different rings");
  int lo = std::min(A.lo + offset, B.lo + offset - 1);
  int hi = std::max(A.hi + offset, B.hi + offset - 1);
  std::vector<int> ranks;
  for (int n = lo; n <= hi; ++n) ranks.push_back(A.rank(n - offset) + B.rank(n - offset + 1));
  ChainComplex C(A.S, lo, ranks);
  for (int n = lo + 1; n <= hi; ++n) {
    int a = n - offset, b = n - offset + 1;
    RMat m(C.rank(n - 1), C.rank(n), A.S);
    put(m, 0, 0, A.diff(a), true);
    put(m, A.rank(a - 1), A.rank(a), B.diff(b));
    put(m, A.rank(a - 1), 0, f.at(a));
    C.set_diff(n, m);
  }
  C.cohomological = A.cohomological;
  return C;
}

}  // namespace

ChainComplex cone(const ChainMap& f) { return mapping_complex(f, 1); }
ChainComplex hofib(const ChainMap& f) { return mapping_complex(f, 0); }

ChainComplex shift(const ChainComplex& C, int k) {
  ChainComplex D(C.S, C.lo + k, C.ranks);
  for (int i = C.lo + 1; i <= C.hi; ++i) {
    RMat m = C.diff(i);
    if (k % 2) {
      for (auto& x : m.a) x = C.S.W().neg(x);
    }
    D.set_diff(i + k, m);
  }
  D.cohomological = C.cohomological;
  D.window_exact = C.window_exact;
  return D;
}

namespace {

// free W_n-complex pieces; truncations work after restriction of scalars when the ring is a group algebra
struct WPiece {
  std::vector<int> ranks;
  std::vector<WMat> d;
};

ChainComplex from_wpieces(Wn R, int lo, const std::vector<int>& ranks, const std::vector<WMat>& ds) {
  Ring S = Ring::scalars(R);
  ChainComplex C(S, lo, ranks);
  for (std::size_t k = 0; k < ds.size(); ++k) C.set_diff(lo + int(k) + 1, RMat::from_wmat(ds[k], S));
  return C;
}

// true when every nonzero elementary divisor of M is a unit, i.e. im M is a free direct summand
bool split_image(const Smith& S) {
  for (int k = 0; k < S.rank; ++k)
    if (S.vals[k] != 0) return false;
  return true;
}

}  // namespace

ChainComplex truncate_above(const ChainComplex& C0, int n) {
  ChainComplex C = C0.S.trivial() ? C0 : restrict_to_Wn(C0);
  const Wn R = C.S.W();
  if (n < C.lo) return ChainComplex(C.S, 0, {});
  if (n >= C.hi) return C;
  std::vector<int> ranks;
  std::vector<WMat> ds;
  for (int i = C.lo; i <= n; ++i) ranks.push_back(C.rank(i));
  for (int i = C.lo + 1; i <= n; ++i) ds.push_back(C.diff(i).augmented());
  WMat din = C.diff(n + 1).augmented();
  Smith S = smith(din, kTrackP | kTrackPinv);
  if (split_image(S)) {
    // C_n / B_n is free: rows of P beyond the rank
    const int r = C.rank(n);
    ranks.back() = r - S.rank;
    // the quotient C_n -> C_n/B_n realized by proj; the outgoing differential restricts through Pinv
    if (n > C.lo) {
      WMat dn = C.diff(n).augmented();
      ds.back() = dn * S.Pinv.cols_range(S.rank, r);
    }
    ChainComplex T = from_wpieces(R, C.lo, ranks, ds);
    return T;
  }
  // keep C_{n+1} and kill its cycles by resolving upward, up to the old window top
  ranks.push_back(C.rank(n + 1));
  ds.push_back(din);
  WMat prev = din;
  for (int j = n + 2; j <= C0.hi + 1; ++j) {
    WMat K = kernel_gens(prev);
    ranks.push_back(K.cols);
    ds.push_back(K);
    prev = K;
  }
  ChainComplex T = from_wpieces(R, C.lo, ranks, ds);
  T.window_exact = false;
  return T;
}

ChainComplex truncate_below(const ChainComplex& C0, int n) {
  ChainComplex C = C0.S.trivial() ? C0 : restrict_to_Wn(C0);
  const Wn R = C.S.W();
  if (n > C.hi) return ChainComplex(C.S, 0, {});
  if (n <= C.lo) return C;
  WMat dn = C.diff(n).augmented();
  Smith S = smith(dn, kTrackQ | kTrackQinv);
  std::vector<int> ranks;
  std::vector<WMat> ds;
  const int r = C.rank(n);
  if (split_image(S)) {
    // Z_n free with basis the columns of Q beyond the rank
    ranks.push_back(r - S.rank);
    for (int i = n + 1; i <= C.hi; ++i) ranks.push_back(C.rank(i));
    if (n + 1 <= C.hi) ds.push_back(S.Qinv.rows_range(S.rank, r) * C.diff(n + 1).augmented());
    for (int i = n + 2; i <= C.hi; ++i) ds.push_back(C.diff(i).augmented());
    return from_wpieces(R, n, ranks, ds);
  }
  // non-split: realize tau_{>=n} C as the fibre of C -> tau_{<=n-1} C
  ChainComplex Q = truncate_above(C, n - 1);
  ChainMap q{C, Q, {}};
  for (int i = C.lo; i <= C.hi; ++i) {
    if (i <= n) {
      q.f.push_back(RMat::identity(C.rank(i), C.S));
      continue;
    }
    // lift f_{i-1} d_i through the differential of Q
    WMat target = q.f[i - 1 - C.lo].augmented() * C.diff(i).augmented();
    WMat dq = Q.diff(i).augmented();
    WMat X(Q.rank(i), C.rank(i), R);
    for (int c = 0; c < target.cols; ++c) {
      Vec x;
      if (!solve(dq, target.col(c), x)) throw Error("truncation lift failed");
      X.set_col(c, x);
    }
    q.f.push_back(RMat::from_wmat(X, C.S));
  }
  ChainComplex T = hofib(q);
  T.window_exact = false;
  return T;
}

ChainComplex tensor(const ChainComplex& C, const ChainComplex& D) {
  if (!(C.S == D.S)) throw Error("tensor of complexes over different rings");
  const Ring& S = C.S;
  if (C.empty() || D.empty()) return ChainComplex(S, 0, {});
  int lo = C.lo + D.lo, hi = C.hi + D.hi;
  std::vector<int> ranks;
  for (int n = lo; n <= hi; ++n) {
    int r = 0;
    for (int i = C.lo; i <= C.hi; ++i) r += C.rank(i) * D.rank(n - i);
    ranks.push_back(r);
  }
  ChainComplex T(S, lo, ranks);
  auto offset = [&](int n, int i) {
    int o = 0;
    for (int k = C.lo; k < i; ++k) o += C.rank(k) * D.rank(n - k);
    return o;
  };
  for (int n = lo + 1; n <= hi; ++n) {
    RMat m(T.rank(n - 1), T.rank(n), S);
    for (int i = C.lo; i <= C.hi; ++i) {
      int j = n - i;
      int ci = C.rank(i), dj = D.rank(j);
      if (!ci || !dj) continue;
      int src = offset(n, i);
      // dx (x) y into C_{i-1} (x) D_j
      if (C.rank(i - 1)) {
        RMat dc = C.diff(i);
        int tgt = offset(n - 1, i - 1);
        for (int a = 0; a < ci; ++a)
          for (int a2 = 0; a2 < C.rank(i - 1); ++a2) {
            Vec x = dc.get(a2, a);
            if (S.is_zero(x)) continue;
            for (int b = 0; b < dj; ++b) m.set(tgt + a2 * dj + b, src + a * dj + b, x);
          }
      }
      // (-1)^i x (x) dy into C_i (x) D_{j-1}
      if (D.rank(j - 1)) {
        RMat dd = D.diff(j);
        int tgt = offset(n - 1, i);
        int dj1 = D.rank(j - 1);
        for (int a = 0; a < ci; ++a)
          for (int b = 0; b < dj; ++b)
            for (int b2 = 0; b2 < dj1; ++b2) {
              Vec y = dd.get(b2, b);
              if (S.is_zero(y)) continue;
              m.set(tgt + a * dj1 + b2, src + a * dj + b, (i % 2) ? S.neg(y) : y);
            }
      }
    }
    T.set_diff(n, m);
  }
  return T;
}

ChainMap tensor(const ChainMap& f, const ChainMap& g) {
  ChainComplex A = tensor(f.src, g.src), B = tensor(f.tgt, g.tgt);
  const Ring& S = A.S;
  ChainMap m{A, B, {}};
  for (int n = A.lo; n <= A.hi; ++n) {
    RMat M(B.rank(n), A.rank(n), S);
    int src = 0;
    for (int i = f.src.lo; i <= f.src.hi; ++i) {
      int j = n - i;
      int ci = f.src.rank(i), dj = g.src.rank(j);
      int ti = f.tgt.rank(i), tj = g.tgt.rank(j);
      int tgt = 0;
      for (int k = f.tgt.lo; k < i; ++k) tgt += f.tgt.rank(k) * g.tgt.rank(n - k);
      if (ci && dj && ti && tj) {
        RMat fi = f.at(i), gj = g.at(j);
        for (int a = 0; a < ci; ++a)
          for (int b = 0; b < dj; ++b)
            for (int a2 = 0; a2 < ti; ++a2) {
              Vec x = fi.get(a2, a);
              if (S.is_zero(x)) continue;
              for (int b2 = 0; b2 < tj; ++b2) {
                Vec y = gj.get(b2, b);
                if (S.is_zero(y)) continue;
                M.set(tgt + a2 * tj + b2, src + a * dj + b, S.mul(x, y));
              }
            }
      }
      src += ci * dj;
    }
    m.f.push_back(M);
  }
  return m;
}

ChainComplex unit_complex(Ring S) {
  ChainComplex C(S, 0, {1});
  return C;
}

ChainComplex restrict_to_Wn(const ChainComplex& C) {
  const int dim = C.S.dim();
  Ring W = Ring::scalars(C.S.W());
  std::vector<int> ranks;
  for (int r : C.ranks) ranks.push_back(r * dim);
  ChainComplex D(W, C.lo, ranks);
  for (int i = C.lo + 1; i <= C.hi; ++i) D.set_diff(i, RMat::from_wmat(C.diff(i).expand(), W));
  D.cohomological = C.cohomological;
  D.window_exact = C.window_exact;
  return D;
}

ChainComplex augment_to_Wn(const ChainComplex& C) {
  Ring W = Ring::scalars(C.S.W());
  ChainComplex D(W, C.lo, C.ranks);
  for (int i = C.lo + 1; i <= C.hi; ++i) D.set_diff(i, RMat::from_wmat(C.diff(i).augmented(), W));
  D.cohomological = C.cohomological;
  D.window_exact = C.window_exact;
  return D;
}

ChainMap augment_to_Wn(const ChainMap& f) {
  ChainMap m{augment_to_Wn(f.src), augment_to_Wn(f.tgt), {}};
  Ring W = m.src.S;
  for (int i = f.src.lo; i <= f.src.hi; ++i) m.f.push_back(RMat::from_wmat(f.at(i).augmented(), W));
  return m;
}

LesReport check_hofib_les(const ChainMap& f) {
  ChainComplex C = hofib(f);
  const ChainComplex& A = f.src;
  const ChainComplex& B = f.tgt;
  QuotientComplex QA = as_quotient_complex(A), QB = as_quotient_complex(B), QC = as_quotient_complex(C);
  const Wn R = QA.R;
  int lo = std::min({A.lo, B.lo, C.lo}) - 1, hi = std::max({A.hi, B.hi, C.hi}) + 1;
  auto ab = [&](const Subquotient& H) { return AbGroup{R, H.divisors()}; };
  LesReport rep;
  for (int n = hi; n >= lo; --n) {
    Subquotient HC = homology_at(QC, n), HA = homology_at(QA, n), HB = homology_at(QB, n);
    Subquotient HC1 = homology_at(QC, n - 1), HA1 = homology_at(QA, n - 1);
    // p: C_n -> A_n, (a, b) -> a
    auto proj = [&](const Subquotient& Hc, const Subquotient& Ha, int deg) {
      WMat M(Ha.ngens(), Hc.ngens(), R);
      for (int j = 0; j < Hc.ngens(); ++j) {
        Vec g = Hc.gen(j);
        Vec a(g.begin(), g.begin() + A.rank(deg));
        M.set_col(j, Ha.coords(a));
      }
      return M;
    };
    WMat pn = proj(HC, HA, n);
    WMat fn(HB.ngens(), HA.ngens(), R);
    {
      WMat fa = f.at(n).augmented();
      for (int j = 0; j < HA.ngens(); ++j) fn.set_col(j, HB.coords(fa.apply(HA.gen(j))));
    }
    // connecting map: b -> (0, b) in C_{n-1}
    WMat dn(HC1.ngens(), HB.ngens(), R);
    for (int j = 0; j < HB.ngens(); ++j) {
      Vec g = HB.gen(j);
      Vec c(C.rank(n - 1), 0);
      for (std::size_t k = 0; k < g.size(); ++k) c[A.rank(n - 1) + k] = g[k];
      dn.set_col(j, HC1.coords(c));
    }
    WMat pn1 = proj(HC1, HA1, n - 1);
    auto spot = [&](const WMat& u, const WMat& v, const Subquotient& X, const Subquotient& Y, const Subquotient& Z,
                    const char* name) {
      ++rep.spots;
      if (!exact_at(u, v, ab(X), ab(Y), ab(Z)) && rep.ok) {
        rep.ok = false;
        rep.where = fmt::format("{} at degree {}", name, n);
      }
    };
    spot(pn, fn, HC, HA, HB, "H(A)");
    spot(fn, dn, HA, HB, HC1, "H(B)");
    spot(dn, pn1, HB, HC1, HA1, "H(hofib)");
  }
  return rep;
}

std::vector<std::vector<int>> koszul_basis(int t, int i) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (int(cur.size()) == i) {
      out.push_back(cur);
      return;
    }
    for (int k = start; k < t; ++k) {
      cur.push_back(k);
      self(self, k + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

ChainComplex koszul_complex(Ring S, const std::vector<Vec>& elems) {
  const int t = int(elems.size());
  std::vector<int> ranks;
  std::vector<std::vector<std::vector<int>>> bases;
  for (int i = 0; i <= t; ++i) {
    bases.push_back(koszul_basis(t, i));
    ranks.push_back(int(bases.back().size()));
  }
  ChainComplex K(S, 0, ranks);
  for (int i = 1; i <= t; ++i) {
    RMat m(ranks[i - 1], ranks[i], S);
    for (int c = 0; c < ranks[i]; ++c) {
      const auto& I = bases[i][c];
      for (int pos = 0; pos < i; ++pos) {
        std::vector<int> J = I;
        J.erase(J.begin() + pos);
        int r = int(std::lower_bound(bases[i - 1].begin(), bases[i - 1].end(), J) - bases[i - 1].begin());
        Vec y = elems[I[pos]];
        m.set(r, c, pos % 2 ? S.neg(y) : y);
      }
    }
    K.set_diff(i, m);
  }
  return K;
}

}  // namespace dtw
