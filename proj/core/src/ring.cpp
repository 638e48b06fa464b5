#include "dtw/ring.hpp"

#include <fmt/format.h>

namespace dtw {

namespace {

std::size_t grid_size(const std::vector<int>& ext) {
  std::size_t n = 1;
  for (int e : ext) n *= std::size_t(e);
  return n;
}

}  // namespace

void Ring::finish(Data& d) {
  const std::size_t g = grid_size(d.radix);
  if (g > (std::size_t(1) << 24)) throw BudgetError("ring basis too large");
  d.lookup.assign(g, -1);
  std::vector<int> alpha(d.radix.size(), 0);
  std::vector<std::vector<int>> all;
  for (std::size_t idx = 0; idx < g; ++idx) {
    std::size_t r = idx;
    for (int v = int(d.radix.size()) - 1; v >= 0; --v) {
      alpha[v] = int(r % d.radix[v]);
      r /= d.radix[v];
    }
    if (d.kind == RingKind::Truncated) {
      int deg = 0;
      for (int a : alpha) deg += a;
      if (deg > d.T) continue;
    }
    all.push_back(alpha);
  }
  if (d.kind == RingKind::Truncated)
    std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
      int dx = 0, dy = 0;
      for (int a : x) dx += a;
      for (int a : y) dy += a;
      return dx < dy;
    });
  d.mono = all;
  d.dim = int(all.size());
  for (int k = 0; k < d.dim; ++k) {
    std::size_t idx = 0;
    for (std::size_t v = 0; v < d.radix.size(); ++v) idx = idx * d.radix[v] + d.mono[k][v];
    d.lookup[idx] = k;
  }
}

Ring Ring::make(const RingSpec& spec) {
  auto d = std::make_shared<Data>();
  d->kind = RingKind::Group;
  d->W = Wn(spec.p, spec.n);
  for (int e : spec.exponents)
    if (e < 0) throw Error(fmt::format("group exponent {} < 0", e));
  d->exponents = spec.exponents;
  for (int e : spec.exponents) d->radix.push_back(int(ipow(spec.p, e)));
  finish(*d);
  Ring r;
  r.d_ = d;
  return r;
}

Ring Ring::poly_quotient(Wn W, const std::vector<Vec>& f) {
  auto d = std::make_shared<Data>();
  d->kind = RingKind::PolyQuotient;
  d->W = W;
  for (const auto& fi : f) {
    if (fi.size() < 2 || W.red(fi.back()) != 1) throw Error("poly_quotient needs monic moduli of degree >= 1");
    // local with X -> 0 augmentation: f = X^m mod p
    for (std::size_t k = 0; k + 1 < fi.size(); ++k)
      if (W.red(fi[k]) % W.p) throw Error("modulus is not X^m mod p; ring would not be local");
    Vec g(fi.size());
    for (std::size_t k = 0; k < fi.size(); ++k) g[k] = W.red(fi[k]);
    d->f.push_back(g);
    d->radix.push_back(int(fi.size()) - 1);
  }
  finish(*d);
  Ring r;
  r.d_ = d;
  return r;
}

Ring Ring::poly_group_relations(Wn W, const std::vector<int>& exponents) {
  std::vector<Vec> f;
  for (int e : exponents) {
    i64 m = ipow(W.p, e);
    // (1+X)^m - 1, binomials reduced mod p^n
    Vec c(m + 1, 0);
    c[0] = 1;
    for (i64 k = 0; k < m; ++k)
      for (i64 j = k + 1; j >= 1; --j) c[j] = W.add(c[j], c[j - 1]);
    c[0] = W.sub(c[0], 1);
    f.push_back(c);
  }
  return poly_quotient(W, f);
}

Ring Ring::truncated(Wn W, int nvars, int T) {
  if (T < 0) throw Error("truncation degree must be >= 0");
  auto d = std::make_shared<Data>();
  d->kind = RingKind::Truncated;
  d->W = W;
  d->T = T;
  d->radix.assign(nvars, T + 1);
  finish(*d);
  Ring r;
  r.d_ = d;
  return r;
}

Vec Ring::one() const { return scalar(1); }

Vec Ring::scalar(i64 c) const {
  Vec v = zero();
  v[0] = W().red(c);  // identity / constant monomial is basis element 0 in every kind
  return v;
}

Vec Ring::var(int i) const {
  std::vector<int> a(nvars(), 0);
  if (d_->radix[i] < 2) return kind() == RingKind::Group ? one() : zero();
  a[i] = 1;
  return basis(index_of(a));
}

Vec Ring::basis(int k) const {
  Vec v = zero();
  v[k] = 1;
  return v;
}

int Ring::index_of(const std::vector<int>& alpha) const {
  std::size_t idx = 0;
  for (std::size_t v = 0; v < alpha.size(); ++v) {
    if (alpha[v] < 0 || alpha[v] >= d_->radix[v]) return -1;
    idx = idx * d_->radix[v] + alpha[v];
  }
  return d_->lookup[idx];
}

int Ring::degree(int k) const {
  int s = 0;
  for (int a : d_->mono[k]) s += a;
  return s;
}

Vec Ring::add(const Vec& a, const Vec& b) const {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = W().add(a[i], b[i]);
  return c;
}

Vec Ring::sub(const Vec& a, const Vec& b) const {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = W().sub(a[i], b[i]);
  return c;
}

Vec Ring::neg(const Vec& a) const {
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = W().neg(a[i]);
  return c;
}

Vec Ring::scale(i64 s, const Vec& a) const {
  Vec c(a.size());
  s = W().red(s);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = W().mul(s, a[i]);
  return c;
}

bool Ring::is_zero(const Vec& a) const {
  for (auto x : a)
    if (x) return false;
  return true;
}

Vec Ring::mul(const Vec& a, const Vec& b) const {
  const Data& d = *d_;
  const Wn& W = d.W;
  const int nv = int(d.radix.size());
  std::vector<int> nzb;
  for (int j = 0; j < d.dim; ++j)
    if (b[j]) nzb.push_back(j);
  if (d.kind == RingKind::Group || d.kind == RingKind::Truncated) {
    Vec c(d.dim, 0);
    std::vector<int> g(nv);
    for (int i = 0; i < d.dim; ++i) {
      if (!a[i]) continue;
      const auto& ai = d.mono[i];
      for (int j : nzb) {
        const auto& bj = d.mono[j];
        int k;
        if (d.kind == RingKind::Group) {
          std::size_t idx = 0;
          for (int v = 0; v < nv; ++v) idx = idx * d.radix[v] + (ai[v] + bj[v]) % d.radix[v];
          k = d.lookup[idx];
        } else {
          for (int v = 0; v < nv; ++v) g[v] = ai[v] + bj[v];
          k = index_of(g);
        }
        if (k >= 0) c[k] = W.add(c[k], W.mul(a[i], b[j]));
      }
    }
    return c;
  }
  // poly quotient: full product on a grid, then reduce variable by variable
  std::vector<int> ext(nv);
  for (int v = 0; v < nv; ++v) ext[v] = 2 * d.radix[v] - 1;
  std::vector<std::size_t> stride(nv, 1);
  for (int v = nv - 2; v >= 0; --v) stride[v] = stride[v + 1] * ext[v + 1];
  Vec grid(grid_size(ext), 0);
  for (int i = 0; i < d.dim; ++i) {
    if (!a[i]) continue;
    for (int j : nzb) {
      std::size_t idx = 0;
      for (int v = 0; v < nv; ++v) idx += stride[v] * (d.mono[i][v] + d.mono[j][v]);
      grid[idx] = W.add(grid[idx], W.mul(a[i], b[j]));
    }
  }
  for (int v = 0; v < nv; ++v) {
    const int m = d.radix[v];
    const Vec& f = d.f[v];
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      // visit entries with the v-coordinate at its top value first
      std::size_t base = idx;
      int av = int((base / stride[v]) % ext[v]);
      if (av != 0) continue;
      for (int e = ext[v] - 1; e >= m; --e) {
        i64 c = grid[base + e * stride[v]];
        if (!c) continue;
        grid[base + e * stride[v]] = 0;
        for (int k = 0; k < m; ++k)
          if (f[k]) {
            std::size_t t = base + std::size_t(e - m + k) * stride[v];
            grid[t] = W.sub(grid[t], W.mul(c, f[k]));
          }
      }
    }
  }
  Vec c(d.dim, 0);
  for (int k = 0; k < d.dim; ++k) {
    std::size_t idx = 0;
    for (int v = 0; v < nv; ++v) idx += stride[v] * d.mono[k][v];
    c[k] = grid[idx];
  }
  return c;
}

Vec Ring::pow(const Vec& a, i64 e) const {
  Vec r = one(), b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

i64 Ring::augment_wn(const Vec& a) const {
  if (kind() == RingKind::Group) {
    i64 s = 0;
    for (auto x : a) s = W().add(s, x);
    return s;
  }
  return a[0];
}

Vec Ring::inverse(const Vec& x) const {
  i64 e = augment_wn(x);
  if (e % W().p == 0) throw Error("inverse of a non-unit ring element");
  i64 ei = W().inv(e);
  // x = e (1 + y), y in the maximal ideal and nilpotent
  Vec y = sub(scale(ei, x), one());
  Vec term = one(), acc = one();
  Vec my = neg(y);
  for (int k = 0; k <= dim() * W().n + 1; ++k) {
    term = mul(term, my);
    if (is_zero(term)) break;
    acc = add(acc, term);
  }
  return scale(ei, acc);
}

WMat Ring::regular_rep(const Vec& a) const {
  WMat M(dim(), dim(), W());
  for (int k = 0; k < dim(); ++k) M.set_col(k, mul(a, basis(k)));
  return M;
}

bool Ring::operator==(const Ring& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  return d_->kind == o.d_->kind && d_->W == o.d_->W && d_->radix == o.d_->radix && d_->f == o.d_->f &&
         d_->T == o.d_->T && d_->exponents == o.d_->exponents;
}

RMat RMat::identity(int n, Ring ring) {
  RMat I(n, n, ring);
  for (int i = 0; i < n; ++i) I.set(i, i, ring.one());
  return I;
}

Vec RMat::get(int i, int j) const {
  const int d = S.dim();
  auto it = a.begin() + (std::size_t(i) * cols + j) * d;
  return Vec(it, it + d);
}

void RMat::set(int i, int j, const Vec& x) {
  const int d = S.dim();
  std::copy(x.begin(), x.end(), a.begin() + (std::size_t(i) * cols + j) * d);
}

RMat RMat::operator*(const RMat& o) const {
  if (cols != o.rows) throw Error("RMat shape mismatch");
  RMat C(rows, o.cols, S);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < o.cols; ++j) {
      Vec s = S.zero();
      for (int k = 0; k < cols; ++k) {
        Vec x = get(i, k);
        if (S.is_zero(x)) continue;
        Vec y = o.get(k, j);
        if (S.is_zero(y)) continue;
        s = S.add(s, S.mul(x, y));
      }
      C.set(i, j, s);
    }
  return C;
}

RMat RMat::operator+(const RMat& o) const {
  if (rows != o.rows || cols != o.cols) throw Error("RMat shape mismatch");
  RMat C = *this;
  for (std::size_t i = 0; i < a.size(); ++i) C.a[i] = S.W().add(a[i], o.a[i]);
  return C;
}

bool RMat::is_zero() const {
  for (auto x : a)
    if (x) return false;
  return true;
}

WMat RMat::expand() const {
  const int d = S.dim();
  WMat M(rows * d, cols * d, S.W());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Vec x = get(i, j);
      if (S.is_zero(x)) continue;
      WMat B = S.regular_rep(x);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) M(i * d + r, j * d + c) = B(r, c);
    }
  return M;
}

WMat RMat::augmented() const {
  WMat M(rows, cols, S.W());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = S.augment_wn(get(i, j));
  return M;
}

RMat RMat::from_wmat(const WMat& M, Ring ring) {
  RMat R(M.rows, M.cols, ring);
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) R.set(i, j, ring.scalar(M(i, j)));
  return R;
}

}  // namespace dtw

#include "dtw/smith.hpp"

namespace dtw {

Elimination local_eliminate(const RMat& M0) {
  const Ring& S = M0.S;
  Elimination E;
  RMat M = M0;
  std::vector<int> rid(M.rows), cid(M.cols);
  for (int i = 0; i < M.rows; ++i) rid[i] = i;
  for (int j = 0; j < M.cols; ++j) cid[j] = j;
  for (;;) {
    int pi = -1, pj = -1;
    for (int i = 0; i < M.rows && pi < 0; ++i)
      for (int j = 0; j < M.cols; ++j)
        if (S.is_unit(M.get(i, j))) {
          pi = i, pj = j;
          break;
        }
    if (pi < 0) break;
    E.pivots.emplace_back(rid[pi], cid[pj]);
    ++E.unit_rank;
    Vec u = S.inverse(M.get(pi, pj));
    RMat N(M.rows - 1, M.cols - 1, S);
    for (int i = 0, ni = 0; i < M.rows; ++i) {
      if (i == pi) continue;
      Vec f = S.mul(M.get(i, pj), u);
      for (int j = 0, nj = 0; j < M.cols; ++j) {
        if (j == pj) continue;
        N.set(ni, nj++, S.sub(M.get(i, j), S.mul(f, M.get(pi, j))));
      }
      ++ni;
    }
    rid.erase(rid.begin() + pi);
    cid.erase(cid.begin() + pj);
    M = std::move(N);
  }
  E.residual = M;
  return E;
}

std::vector<int> diagonalize_Wn(const WMat& M) { return smith(M).vals; }

}  // namespace dtw
