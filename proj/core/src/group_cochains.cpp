#include "dtw/group_cochains.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>

namespace dtw {

bool FiniteGroup::abelian() const {
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < a; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

FiniteGroup FiniteGroup::from_table(const std::vector<std::vector<int>>& t) {
  FiniteGroup G;
  G.order = int(t.size());
  if (G.order == 0) throw Error("empty group table");
  for (const auto& row : t) {
    if (int(row.size()) != G.order) throw Error("group table is not square");
    for (int x : row)
      if (x < 0 || x >= G.order) throw Error("group table entry out of range");
    G.table.insert(G.table.end(), row.begin(), row.end());
  }
  G.identity = -1;
  for (int e = 0; e < G.order && G.identity < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < G.order && ok; ++a) ok = G.mul(e, a) == a && G.mul(a, e) == a;
    if (ok) G.identity = e;
  }
  if (G.identity < 0) throw Error("group table has no identity");
  for (int a = 0; a < G.order; ++a)
    for (int b = 0; b < G.order; ++b)
      for (int c = 0; c < G.order; ++c)
        if (G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c)))
          throw Error(fmt::format("group table is not associative at ({}, {}, {})", a, b, c));
  G.inv.assign(G.order, -1);
  for (int a = 0; a < G.order; ++a)
    for (int b = 0; b < G.order; ++b)
      if (G.mul(a, b) == G.identity && G.mul(b, a) == G.identity) G.inv[a] = b;
  for (int a = 0; a < G.order; ++a)
    if (G.inv[a] < 0) throw Error(fmt::format("element {} has no inverse", a));
  return G;
}

FiniteGroup FiniteGroup::cyclic(int m) {
  if (m < 1) throw Error("cyclic group order must be positive");
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  return from_table(t);
}

FiniteGroup FiniteGroup::abelian_group(const std::vector<int>& invariants) {
  FiniteGroup G = cyclic(1);
  for (int m : invariants) G = product(G, cyclic(m));
  return G;
}

FiniteGroup FiniteGroup::product(const FiniteGroup& A, const FiniteGroup& B) {
  const int n = A.order * B.order;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      t[x][y] = A.mul(x / B.order, y / B.order) * B.order + B.mul(x % B.order, y % B.order);
  return from_table(t);
}

FiniteGroup FiniteGroup::dihedral(int m) {
  const int n = 2 * m;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int i = x % m, j = x / m, k = y % m, l = y / m;
      int r = ((j ? i - k : i + k) % m + m) % m;
      t[x][y] = r + m * ((j + l) % 2);
    }
  return from_table(t);
}

FiniteGroup FiniteGroup::quaternion() {
  // units 1,i,j,k with sign bit: index = unit + 4 * sign
  static const int u[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int s[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      int a = x % 4, b = y % 4;
      int sign = (x / 4 + y / 4 + s[a][b]) % 2;
      t[x][y] = u[a][b] + 4 * sign;
    }
  return from_table(t);
}

bool is_homomorphism(const FiniteGroup& H, const FiniteGroup& G, const std::vector<int>& phi) {
  if (int(phi.size()) != H.order) return false;
  for (int x : phi)
    if (x < 0 || x >= G.order) return false;
  for (int a = 0; a < H.order; ++a)
    for (int b = 0; b < H.order; ++b)
      if (phi[H.mul(a, b)] != G.mul(phi[a], phi[b])) return false;
  return true;
}

std::vector<int> cyclic_subgroup(const FiniteGroup& G, int g, FiniteGroup* H) {
  std::vector<int> pw{G.identity};
  for (int x = g; x != G.identity; x = G.mul(x, g)) pw.push_back(x);
  if (H) *H = FiniteGroup::cyclic(int(pw.size()));
  return pw;
}

int GModule::log_order() const {
  int s = 0;
  for (int e : div) s += e;
  return s;
}

bool GModule::uniform() const {
  return std::all_of(div.begin(), div.end(), [&](int e) { return e == W.n; });
}

Vec GModule::reduce(const Vec& x) const {
  Vec y(x.size());
  const int r = rank();
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = W.red(x[i]) % modulus(int(i % r));
  return y;
}

void GModule::validate(const FiniteGroup& G) const {
  const int r = rank();
  if (int(act.size()) != G.order) throw Error("module needs one action matrix per group element");
  for (int e : div)
    if (e < 1 || e > W.n) throw Error("module divisors must lie in [1, n]");
  for (int g = 0; g < G.order; ++g) {
    const WMat& A = act[g];
    if (A.rows != r || A.cols != r) throw Error("action matrix has the wrong shape");
    // column j must be killed by p^{e_j}
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if (div[j] < div[i] && (A(i, j) % modulus(i)) % W.pp(div[i] - div[j]) != 0)
          throw Error(fmt::format("action of element {} is not well defined on the module", g));
  }
  for (int i = 0; i < r; ++i) {
    Vec e(r, 0);
    e[i] = 1;
    if (reduce(act[G.identity].apply(e)) != reduce(e)) throw Error("identity does not act trivially");
  }
  for (int a = 0; a < G.order; ++a)
    for (int b = 0; b < G.order; ++b) {
      WMat L = act[a] * act[b];
      const WMat& R = act[G.mul(a, b)];
      for (int j = 0; j < r; ++j)
        if (reduce(L.col(j)) != reduce(R.col(j)))
          throw Error(fmt::format("action is not multiplicative at ({}, {})", a, b));
    }
}

GModule GModule::trivial(const FiniteGroup& G, i64 p, const std::vector<int>& div) {
  GModule M;
  int n = div.empty() ? 1 : *std::max_element(div.begin(), div.end());
  M.W = Wn(p, n);
  M.div = div;
  M.act.assign(G.order, WMat::identity(int(div.size()), M.W));
  return M;
}

GModule GModule::from_generators(const FiniteGroup& G, i64 p, const std::vector<int>& div,
                                 const std::vector<std::pair<int, WMat>>& gens) {
  GModule M = trivial(G, p, div);
  std::vector<bool> seen(G.order, false);
  seen[G.identity] = true;
  std::deque<int> q{G.identity};
  while (!q.empty()) {
    int h = q.front();
    q.pop_front();
    for (const auto& [s, A] : gens) {
      int hs = G.mul(h, s);
      if (seen[hs]) continue;
      seen[hs] = true;
      M.act[hs] = M.act[h] * A;
      q.push_back(hs);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw Error("generators do not generate the group");
  M.validate(G);
  return M;
}

GModule restrict_module(const GModule& M, const FiniteGroup& H, const std::vector<int>& phi) {
  GModule R = M;
  R.act.clear();
  for (int h = 0; h < H.order; ++h) R.act.push_back(M.act[phi[h]]);
  return R;
}

CupPairing ring_pairing(const GModule& M) {
  if (M.rank() != 1) throw Error("default cup pairing needs a rank-one module; supply a pairing");
  return CupPairing{1, 1, 1, {1}};
}

DualData dualize(const FiniteGroup& G, const GModule& M, const std::vector<i64>& chi) {
  const Wn W = M.W;
  const int r = M.rank(), n = W.n;
  DualData D;
  D.mu = GModule::trivial(G, W.p, {n});
  if (!chi.empty()) {
    if (int(chi.size()) != G.order) throw Error("character needs one value per element");
    for (int g = 0; g < G.order; ++g) D.mu.act[g](0, 0) = W.red(chi[g]);
    D.mu.validate(G);
  }
  D.dual = M;
  for (int g = 0; g < G.order; ++g) {
    const WMat& A = M.act[G.inverse(g)];
    WMat B(r, r, W);
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < r; ++i) {
        i64 a = A(i, j) % M.modulus(i);
        i64 v = M.div[j] >= M.div[i] ? W.mul(a, W.pp(M.div[j] - M.div[i])) : a / ipow(W.p, M.div[i] - M.div[j]);
        B(j, i) = W.mul(v, D.mu.act[g](0, 0));
      }
    D.dual.act[g] = B;
  }
  D.dual.validate(G);
  D.eval = CupPairing{r, r, 1, std::vector<i64>(std::size_t(r) * r, 0)};
  for (int i = 0; i < r; ++i) D.eval.B[std::size_t(i) * r + i] = W.pp(n - M.div[i]);
  return D;
}

namespace {

std::vector<int> decode(std::size_t t, int k, int order) {
  std::vector<int> g(k);
  for (int j = k - 1; j >= 0; --j) {
    g[j] = int(t % order);
    t /= order;
  }
  return g;
}

std::size_t encode(const std::vector<int>& g, int order) {
  std::size_t t = 0;
  for (int x : g) t = t * order + x;
  return t;
}

}  // namespace

std::size_t Cochains::index(const std::vector<int>& g, int c) const { return encode(g, G.order) * M.rank() + c; }

Cochains cochain_complex(const FiniteGroup& G, const GModule& M, int top, i64 budget) {
  if (top < 0) throw Error("top degree must be nonnegative");
  M.validate(G);
  Cochains C;
  C.G = G;
  C.M = M;
  C.top = top;
  C.W = M.W;
  const int r = M.rank();
  const Wn W = M.W;
  i64 t = 1;
  for (int k = 0; k <= top; ++k) {
    if (t * r > budget) throw BudgetError(fmt::format("C^{} has {} entries, over the budget {}", k, t * r, budget));
    C.dims.push_back(int(t * r));
    t *= G.order;
  }
  if (top >= 1 && i64(C.dims[top]) * C.dims[top - 1] > 8 * budget)
    throw BudgetError(fmt::format("differential into C^{} is too large", top));
  for (int k = 0; k < top; ++k) {
    WMat D(C.dims[k + 1], C.dims[k], W);
    const int nt = C.tuples(k + 1);
    for (int row = 0; row < nt; ++row) {
      std::vector<int> g = decode(row, k + 1, G.order);
      std::vector<int> tail(g.begin() + 1, g.end());
      std::size_t c0 = encode(tail, G.order) * r;
      const WMat& A = M.act[g[0]];
      for (int c = 0; c < r; ++c)
        for (int j = 0; j < r; ++j) D(row * r + c, int(c0) + j) = W.add(D(row * r + c, int(c0) + j), A(c, j));
      for (int i = 1; i <= k; ++i) {
        std::vector<int> h;
        for (int a = 0; a < k + 1; ++a) {
          if (a == i - 1) {
            h.push_back(G.mul(g[a], g[a + 1]));
            ++a;
          } else {
            h.push_back(g[a]);
          }
        }
        std::size_t ci = encode(h, G.order) * r;
        for (int c = 0; c < r; ++c) {
          i64& x = D(row * r + c, int(ci) + c);
          x = i % 2 ? W.sub(x, 1) : W.add(x, 1);
        }
      }
      std::vector<int> head(g.begin(), g.end() - 1);
      std::size_t cl = encode(head, G.order) * r;
      for (int c = 0; c < r; ++c) {
        i64& x = D(row * r + c, int(cl) + c);
        x = (k + 1) % 2 ? W.sub(x, 1) : W.add(x, 1);
      }
    }
    C.d.push_back(D);
  }
  for (int k = 0; k <= top; ++k) {
    std::vector<Vec> cols;
    for (int tt = 0; tt < C.tuples(k); ++tt)
      for (int c = 0; c < r; ++c)
        if (M.div[c] < W.n) {
          Vec v(C.dims[k], 0);
          v[std::size_t(tt) * r + c] = W.pp(M.div[c]);
          cols.push_back(std::move(v));
        }
    C.rel.push_back(WMat::from_cols(C.dims[k], cols, W));
  }
  return C;
}

QuotientComplex CoComplex::as_quotient() const {
  QuotientComplex Q;
  Q.R = W;
  Q.lo = -top;
  Q.hi = 0;
  for (int k = top; k >= 0; --k) {
    Q.ranks.push_back(dims[k]);
    Q.rel.push_back(rel[k]);
  }
  // term -k+1 -> term -k is C^{k-1} -> C^k
  for (int k = top; k >= 1; --k) Q.d.push_back(d[k - 1]);
  return Q;
}

Subquotient CoComplex::cohomology(int k) const {
  if (k < 0 || k > top) throw Error("cohomology degree outside the window");
  return homology_at(as_quotient(), -k);
}

bool CoComplex::in_span(int k, const WMat& cols, const Vec& x) const {
  if (std::all_of(x.begin(), x.end(), [](i64 v) { return v == 0; })) return true;
  WMat A = WMat::hcat(cols, rel[k]);
  if (A.cols == 0) return false;
  Vec s;
  return solve(A, x, s);
}

bool CoComplex::is_cocycle(int k, const Vec& x) const {
  if (k >= top) return true;
  return is_zero(k + 1, d[k].apply(x));
}

bool CoComplex::is_coboundary(int k, const Vec& x, Vec* y) const {
  WMat A = k == 0 ? rel[0] : WMat::hcat(d[k - 1], rel[k]);
  if (A.cols == 0) return std::all_of(x.begin(), x.end(), [](i64 v) { return v == 0; });
  Vec s;
  if (!solve(A, x, s)) return false;
  if (y) *y = k == 0 ? Vec{} : Vec(s.begin(), s.begin() + dims[k - 1]);
  return true;
}

Vec Cochains::reduce(int, const Vec& x) const { return M.reduce(x); }

bool Cochains::is_cocycle(int k, const Vec& x) const {
  if (k >= top) return true;
  Vec y = M.reduce(d[k].apply(x));
  return std::all_of(y.begin(), y.end(), [](i64 v) { return v == 0; });
}

Vec cup(const FiniteGroup& G, const GModule& M1, const GModule& M2, const GModule& M3, const CupPairing& P, int pa,
        const Vec& a, int pb, const Vec& b) {
  const int r1 = M1.rank(), r2 = M2.rank(), r3 = M3.rank();
  if (P.r1 != r1 || P.r2 != r2 || P.r3 != r3) throw Error("cup pairing does not match the modules");
  const Wn W = M3.W;
  std::size_t na = 1, nb = 1;
  for (int i = 0; i < pa; ++i) na *= G.order;
  for (int i = 0; i < pb; ++i) nb *= G.order;
  if (a.size() != na * r1 || b.size() != nb * r2) throw Error("cochain sizes do not match their degrees");
  Vec out(na * nb * r3, 0);
  std::vector<int> prod(na);
  for (std::size_t t = 0; t < na; ++t) {
    auto g = decode(t, pa, G.order);
    int x = G.identity;
    for (int h : g) x = G.mul(x, h);
    prod[t] = x;
  }
  for (std::size_t ta = 0; ta < na; ++ta) {
    const WMat& A = M2.act[prod[ta]];
    for (std::size_t tb = 0; tb < nb; ++tb) {
      Vec bv(b.begin() + tb * r2, b.begin() + (tb + 1) * r2);
      Vec gb = A.apply(bv);
      for (int k = 0; k < r3; ++k) {
        i64 s = 0;
        for (int i = 0; i < r1; ++i) {
          i64 ai = a[ta * r1 + i];
          if (!ai) continue;
          for (int j = 0; j < r2; ++j) {
            i64 c = P.at(k, i, j);
            if (c) s = W.add(s, W.mul(c, W.mul(ai, gb[j])));
          }
        }
        out[(ta * nb + tb) * r3 + k] = s;
      }
    }
  }
  return M3.reduce(out);
}

Vec restrict_cochain(const FiniteGroup& G, const FiniteGroup& H, const std::vector<int>& phi, const GModule& M, int k,
                     const Vec& c) {
  if (!is_homomorphism(H, G, phi)) throw Error("restriction map is not a homomorphism");
  const int r = M.rank();
  std::size_t nh = 1;
  for (int i = 0; i < k; ++i) nh *= H.order;
  Vec out(nh * r);
  for (std::size_t t = 0; t < nh; ++t) {
    auto h = decode(t, k, H.order);
    for (auto& x : h) x = phi[x];
    std::size_t s = encode(h, G.order) * r;
    for (int j = 0; j < r; ++j) out[t * r + j] = c[s + j];
  }
  return out;
}

WMat restriction_matrix(const FiniteGroup& G, const FiniteGroup& H, const std::vector<int>& phi, const GModule& M, int k) {
  const int r = M.rank();
  if (!is_homomorphism(H, G, phi)) throw Error("restriction map is not a homomorphism");
  std::size_t nh = 1, ng = 1;
  for (int i = 0; i < k; ++i) {
    nh *= H.order;
    ng *= G.order;
  }
  WMat R(int(nh * r), int(ng * r), M.W);
  for (std::size_t t = 0; t < nh; ++t) {
    auto h = decode(t, k, H.order);
    for (auto& x : h) x = phi[x];
    std::size_t s = encode(h, G.order) * r;
    for (int j = 0; j < r; ++j) R(int(t * r + j), int(s + j)) = 1;
  }
  return R;
}

Vec conjugate(const FiniteGroup& G, const GModule& M, int g, int k, const Vec& c) {
  const int r = M.rank();
  const int gi = G.inverse(g);
  std::size_t n = 1;
  for (int i = 0; i < k; ++i) n *= G.order;
  Vec out(n * r);
  for (std::size_t t = 0; t < n; ++t) {
    auto h = decode(t, k, G.order);
    for (auto& x : h) x = G.mul(G.mul(gi, x), g);
    std::size_t s = encode(h, G.order) * r;
    Vec v(c.begin() + s, c.begin() + s + r);
    Vec w = M.act[g].apply(v);
    std::copy(w.begin(), w.end(), out.begin() + t * r);
  }
  return M.reduce(out);
}

WMat induced_on(const WMat& f, const Subquotient& Hs, const Subquotient& Ht) {
  WMat M(Ht.ngens(), Hs.ngens(), Ht.W());
  for (int j = 0; j < Hs.ngens(); ++j) M.set_col(j, Ht.coords(f.apply(Hs.gen(j))));
  return M;
}

}  // namespace dtw
