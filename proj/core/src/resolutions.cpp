#include "dtw/resolutions.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace dtw {

Poly Poly::var(int nvars, int i, i64 c) {
  std::vector<int> a(nvars, 0);
  a[i] = 1;
  return Poly{{{a, c}}};
}

Poly Poly::constant(int nvars, i64 c) { return Poly{{{std::vector<int>(nvars, 0), c}}}; }

int Poly::nvars() const { return terms.empty() ? 0 : int(terms.front().first.size()); }

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [a, c] : terms)
    for (const auto& [b, d] : o.terms) {
      std::vector<int> e(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
      r.terms.push_back({e, c * d});
    }
  return r;
}

Poly Poly::scaled(i64 c) const {
  Poly r = *this;
  for (auto& t : r.terms) t.second *= c;
  return r;
}

int Poly::order() const {
  std::map<std::vector<int>, i64> acc;
  for (const auto& [a, c] : terms) acc[a] += c;
  int best = -1;
  for (const auto& [a, c] : acc) {
    if (c == 0) continue;
    int d = 0;
    for (int x : a) d += x;
    if (best < 0 || d < best) best = d;
  }
  return best;
}

Vec to_ring(const Poly& f, const Ring& S) {
  const Wn& W = S.W();
  Vec v = S.zero();
  if (S.kind() == RingKind::Truncated) {
    for (const auto& [a, c] : f.terms) {
      int k = S.index_of(a);
      if (k >= 0) v[k] = W.add(v[k], W.red(c));
    }
    return v;
  }
  // quotients: multiply out powers of the variables inside the ring
  for (const auto& [a, c] : f.terms) {
    Vec m = S.scalar(c);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i]) m = S.mul(m, S.pow(S.var(int(i)), a[i]));
    v = S.add(v, m);
  }
  return v;
}

Ring PolyQuotientRing::ring() const {
  if (group_relations) return Ring::poly_group_relations(W, m);
  return Ring::truncated(W, s, T);
}

RingSpec PolyQuotientRing::group_spec() const {
  if (!group_relations) throw Error("truncated power series ring has no group-algebra form");
  return RingSpec{W.p, W.n, m};
}

Vec embed_coordinate(const Ring& fr, const Ring& S, int coordinate, const Vec& x) {
  Vec v = S.zero();
  std::vector<int> alpha(S.nvars(), 0);
  for (int k = 0; k < fr.dim(); ++k) {
    if (!x[k]) continue;
    alpha[coordinate] = fr.multi_index(k)[0];
    v[S.index_of(alpha)] = x[k];
  }
  return v;
}

ProductResolution::ProductResolution(Ring S, std::vector<Factor> factors, int maxdeg)
    : S_(std::move(S)), factors_(std::move(factors)), maxdeg_(maxdeg) {
  if (S_.valid())
    W_ = S_.W();
  else if (!factors_.empty())
    W_ = factors_.front().ring.W();
  else
    throw Error("product resolution without a ring");
  basis_.resize(maxdeg_ + 1);
  const int f = nfactors();
  std::vector<int> a(f, 0);
  auto rec = [&](auto&& self, int j, int left) -> void {
    if (j == f) {
      if (left == 0) basis_[maxdeg_ - left].size();
      return;
    }
    (void)self;
  };
  (void)rec;
  // enumerate all multi-indices with a_j <= len_j and total <= maxdeg
  std::vector<std::vector<int>> all;
  auto gen = [&](auto&& self, int j, int used) -> void {
    if (j == f) {
      all.push_back(a);
      return;
    }
    for (int v = 0; v <= factors_[j].len() && used + v <= maxdeg_; ++v) {
      a[j] = v;
      self(self, j + 1, used + v);
    }
    a[j] = 0;
  };
  gen(gen, 0, 0);
  for (const auto& x : all) {
    int d = 0;
    for (int v : x) d += v;
    basis_[d].push_back(x);
  }
  for (auto& b : basis_) std::sort(b.begin(), b.end(), std::greater<>());
}

int ProductResolution::index_of(const std::vector<int>& a) const {
  int d = 0;
  for (int v : a) d += v;
  if (d > maxdeg_) return -1;
  const auto& b = basis_[d];
  auto it = std::lower_bound(b.begin(), b.end(), a, std::greater<>());
  if (it == b.end() || *it != a) return -1;
  return int(it - b.begin());
}

ChainComplex ProductResolution::base_change(const Ring& T, const std::function<Vec(int, const Vec&)>& phi) const {
  std::vector<int> ranks;
  for (const auto& b : basis_) ranks.push_back(int(b.size()));
  ChainComplex C(T, 0, ranks);
  std::vector<std::vector<Vec>> img(nfactors());
  for (int j = 0; j < nfactors(); ++j) {
    img[j].resize(factors_[j].coef.size());
    for (int a = 1; a <= factors_[j].len(); ++a) img[j][a] = phi(j, factors_[j].coef[a]);
  }
  for (int deg = 1; deg <= maxdeg_; ++deg) {
    RMat m(ranks[deg - 1], ranks[deg], T);
    for (int c = 0; c < ranks[deg]; ++c) {
      std::vector<int> a = basis_[deg][c];
      int sign = 0;
      for (int j = 0; j < nfactors(); ++j) {
        if (a[j] > 0) {
          std::vector<int> b = a;
          --b[j];
          int r = index_of(b);
          Vec x = img[j][a[j]];
          m.set(r, c, (sign % 2) ? T.neg(x) : x);
        }
        sign += a[j];
      }
    }
    C.set_diff(deg, m);
  }
  return C;
}

ChainComplex ProductResolution::complex() const {
  if (!S_.valid()) throw Error("resolution built without its ring; use a base change");
  return base_change(S_, [&](int j, const Vec& x) {
    const Factor& F = factors_[j];
    if (F.coordinate < 0) return x;
    return embed_coordinate(F.ring, S_, F.coordinate, x);
  });
}

ChainComplex ProductResolution::augmented() const {
  Ring T = Ring::scalars(W_);
  return base_change(T, [&](int j, const Vec& x) { return T.scalar(factors_[j].ring.augment_wn(x)); });
}

namespace {

i64 binom_mod(int n, int k, const Wn& W) {
  if (k < 0 || k > n) return 0;
  std::vector<i64> row(n + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[j] = W.add(row[j], row[j - 1]);
  return row[k];
}

}  // namespace

bool ProductResolution::product(const std::vector<int>& a, const std::vector<int>& b, i64& c, int& idx) const {
  const int f = nfactors();
  std::vector<int> s(f);
  i64 coef = 1;
  int sign = 0;
  for (int j = 0; j < f; ++j) {
    s[j] = a[j] + b[j];
    if (s[j] > factors_[j].len()) return false;
    if (!factors_[j].tate) {
      if (a[j] && b[j]) return false;
    } else {
      if (a[j] % 2 && b[j] % 2) return false;
      coef = W_.mul(coef, binom_mod(a[j] / 2 + b[j] / 2, a[j] / 2, W_));
    }
  }
  // move b_j past a_k for k > j
  for (int j = 0; j < f; ++j)
    for (int k = j + 1; k < f; ++k) sign += b[j] * a[k];
  idx = index_of(s);
  if (idx < 0 || coef == 0) return false;
  c = (sign % 2) ? W_.neg(coef) : coef;
  return true;
}

Factor cyclic_factor(i64 p, int n, int e, int coordinate, int len) {
  Factor F;
  F.tate = true;
  F.ring = Ring::make({p, n, {e}});
  F.coordinate = coordinate;
  const Ring& R = F.ring;
  Vec s1 = R.sub(R.var(0), R.one());
  Vec N = R.zero();
  for (auto& x : N) x = 1;
  F.coef.resize(len + 1);
  for (int a = 1; a <= len; ++a) F.coef[a] = (a % 2) ? s1 : N;
  return F;
}

Resolution cyclic_resolution(const RingSpec& S, int coordinate, int maxdeg) {
  return group_quotient_resolution(S, {coordinate}, maxdeg);
}

Resolution group_quotient_resolution(const RingSpec& spec, const std::vector<int>& coords, int maxdeg,
                                     bool with_ring) {
  std::vector<Factor> fs;
  for (int c : coords) {
    if (c < 0 || c >= int(spec.exponents.size())) throw Error(fmt::format("coordinate {} out of range", c));
    fs.push_back(cyclic_factor(spec.p, spec.n, spec.exponents[c], c, maxdeg));
  }
  Ring S = with_ring ? Ring::make(spec) : Ring();
  if (!with_ring && fs.empty()) S = Ring::scalars(Wn(spec.p, spec.n));
  Resolution r;
  r.res = ProductResolution(S, fs, maxdeg);
  r.strategy = coords.empty() ? "free" : "cyclic";
  return r;
}

KoszulDiagnosis koszul_h1(const PolyQuotientRing& P, const std::vector<Poly>& elems, int margin) {
  KoszulDiagnosis D;
  Ring S = P.ring();
  std::vector<Vec> ys;
  for (const auto& f : elems) ys.push_back(to_ring(f, S));
  ChainComplex K = restrict_to_Wn(koszul_complex(S, ys));
  Subquotient H1 = homology_at(K, 1);
  if (P.group_relations) {
    D.T = -1;
    D.regular = H1.is_zero();
    if (!D.regular) D.witness = H1.gen(0);
    return D;
  }
  D.T = P.T;
  if (H1.is_zero()) return D;
  // only classes that lift from a deeper truncation count
  PolyQuotientRing Q = P;
  Q.T = P.T + margin;
  Ring S2 = Q.ring();
  std::vector<Vec> ys2;
  for (const auto& f : elems) ys2.push_back(to_ring(f, S2));
  ChainComplex K2 = restrict_to_Wn(koszul_complex(S2, ys2));
  Subquotient H1b = homology_at(K2, 1);
  const int t = int(elems.size());
  for (int g = 0; g < H1b.ngens(); ++g) {
    Vec z = H1b.gen(g);
    Vec w(std::size_t(t) * S.dim(), 0);
    for (int j = 0; j < t; ++j)
      for (int k = 0; k < S2.dim(); ++k) {
        int idx = S.index_of(S2.multi_index(k));
        if (idx >= 0) w[std::size_t(j) * S.dim() + idx] = z[std::size_t(j) * S2.dim() + k];
      }
    if (!H1.is_trivial_class(w)) {
      D.regular = false;
      D.witness = w;
      return D;
    }
  }
  return D;
}

Resolution koszul(const PolyQuotientRing& P, const std::vector<Poly>& elems, KoszulDiagnosis* diag, int margin) {
  KoszulDiagnosis D = koszul_h1(P, elems, margin);
  if (diag) *diag = D;
  Ring S = P.ring();
  std::vector<Factor> fs;
  for (const auto& f : elems) {
    Factor F;
    F.ring = S;
    F.coef = {S.zero(), to_ring(f, S)};
    fs.push_back(F);
  }
  Resolution r;
  r.res = ProductResolution(S, fs, int(elems.size()));
  r.strategy = "koszul";
  r.known_exact = D.regular;
  r.truncation = D.T;
  return r;
}

Vec group_reduce(const Ring& from, const Ring& to, const Vec& x) {
  if (from.kind() != RingKind::Group || to.kind() != RingKind::Group) throw Error("group_reduce needs group algebras");
  if (from.W().p != to.W().p || from.W().n < to.W().n || from.nvars() != to.nvars())
    throw Error("group_reduce needs a coarser target of the same shape");
  Vec y = to.zero();
  std::vector<int> alpha(to.nvars());
  for (int k = 0; k < from.dim(); ++k) {
    if (!x[k]) continue;
    auto a = from.multi_index(k);
    for (int v = 0; v < to.nvars(); ++v) alpha[v] = a[v] % to.radix()[v];
    int t = to.index_of(alpha);
    y[t] = to.W().add(y[t], x[k] % to.W().q);
  }
  return y;
}

std::vector<std::vector<Vec>> lift_comparison(const ProductResolution& from, const ProductResolution& to) {
  if (from.nfactors() != to.nfactors()) throw Error("comparison between resolutions of different shape");
  std::vector<std::vector<Vec>> out;
  for (int j = 0; j < from.nfactors(); ++j) {
    const Factor& A = from.factors()[j];
    const Factor& B = to.factors()[j];
    const Ring& R = B.ring;
    std::vector<Vec> c{R.one()};
    for (int a = 1; a <= std::min(A.len(), B.len()); ++a) {
      Vec rhs = R.mul(group_reduce(A.ring, R, A.coef[a]), c[a - 1]);
      Vec x;
      if (!solve(R.regular_rep(B.coef[a]), rhs, x))
        throw Error(fmt::format("comparison lift failed at factor {} degree {}", j, a));
      c.push_back(x);
    }
    out.push_back(c);
  }
  return out;
}

std::vector<WMat> augmented_comparison(const ProductResolution& from, const ProductResolution& to) {
  auto c = lift_comparison(from, to);
  std::vector<std::vector<i64>> e(c.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    for (const auto& x : c[j]) e[j].push_back(to.factors()[j].ring.augment_wn(x));
  const Wn W = to.W();
  std::vector<WMat> maps;
  for (int deg = 0; deg <= std::min(from.maxdeg(), to.maxdeg()); ++deg) {
    const auto& bf = from.basis(deg);
    WMat M(int(to.basis(deg).size()), int(bf.size()), W);
    for (int col = 0; col < int(bf.size()); ++col) {
      int row = to.index_of(bf[col]);
      if (row < 0) continue;
      i64 v = 1;
      for (std::size_t j = 0; j < e.size(); ++j) v = W.mul(v, e[j][bf[col][j]]);
      M(row, col) = v;
    }
    maps.push_back(M);
  }
  return maps;
}

}  // namespace dtw
