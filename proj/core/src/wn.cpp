#include "dtw/wn.hpp"

#include <fmt/format.h>

namespace dtw {

bool is_prime(i64 p) {
  if (p < 2) return false;
  for (i64 d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

Wn::Wn(i64 p_, int n_) : p(p_), n(n_) {
  if (!is_prime(p)) throw Error(fmt::format("p = {} is not prime", p));
  if (n < 1) throw Error(fmt::format("level n = {} must be >= 1", n));
  q = 1;
  for (int i = 0; i < n; ++i) {
    q *= p;
    if (q >= (i64(1) << 31)) throw Error("p^n too large for 64-bit residue arithmetic");
  }
}

int Wn::val(i64 a) const {
  a = red(a);
  if (a == 0) return n;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

i64 Wn::inv(i64 a) const {
  i64 g = q, x = red(a), u0 = 0, u1 = 1;
  if (x % p == 0) throw Error("inverse of a non-unit");
  while (x) {
    i64 t = g / x;
    g -= t * x;
    std::swap(g, x);
    u0 -= t * u1;
    std::swap(u0, u1);
  }
  return red(u0);
}

WMat WMat::identity(int n, Wn ring) {
  WMat I(n, n, ring);
  for (int i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

WMat WMat::operator*(const WMat& o) const {
  if (cols != o.rows) throw Error(fmt::format("shape mismatch {}x{} * {}x{}", rows, cols, o.rows, o.cols));
  WMat C(rows, o.cols, R);
  const i64 q = R.q;
  // accumulate in i64; reduce every few steps to stay below overflow
  const int chunk = int(std::max<i64>(1, (i64(1) << 62) / (q * q)));
  std::vector<i64> acc(o.cols);
  for (int i = 0; i < rows; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    int cnt = 0;
    for (int k = 0; k < cols; ++k) {
      i64 x = (*this)(i, k);
      if (!x) continue;
      const i64* br = &o.a[std::size_t(k) * o.cols];
      for (int j = 0; j < o.cols; ++j) acc[j] += x * br[j];
      if (++cnt == chunk) {
        for (auto& v : acc) v %= q;
        cnt = 0;
      }
    }
    for (int j = 0; j < o.cols; ++j) C(i, j) = acc[j] % q;
  }
  return C;
}

WMat WMat::operator+(const WMat& o) const {
  if (rows != o.rows || cols != o.cols) throw Error("shape mismatch in +");
  WMat C = *this;
  for (std::size_t i = 0; i < a.size(); ++i) C.a[i] = R.add(a[i], o.a[i]);
  return C;
}

WMat WMat::operator-(const WMat& o) const {
  if (rows != o.rows || cols != o.cols) throw Error("shape mismatch in -");
  WMat C = *this;
  for (std::size_t i = 0; i < a.size(); ++i) C.a[i] = R.sub(a[i], o.a[i]);
  return C;
}

Vec WMat::apply(const Vec& x) const {
  if (int(x.size()) != cols) throw Error("shape mismatch in apply");
  Vec y(rows, 0);
  for (int i = 0; i < rows; ++i) {
    i64 s = 0;
    const i64* r = &a[std::size_t(i) * cols];
    for (int j = 0; j < cols; ++j) s = (s + r[j] * x[j]) % R.q;
    y[i] = s;
  }
  return y;
}

WMat WMat::transpose() const {
  WMat T(cols, rows, R);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) T(j, i) = (*this)(i, j);
  return T;
}

WMat WMat::scaled(i64 c) const {
  WMat C = *this;
  for (auto& v : C.a) v = R.mul(v, R.red(c));
  return C;
}

bool WMat::is_zero() const {
  for (auto v : a)
    if (v) return false;
  return true;
}

Vec WMat::col(int j) const {
  Vec v(rows);
  for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
  return v;
}

void WMat::set_col(int j, const Vec& v) {
  for (int i = 0; i < rows; ++i) (*this)(i, j) = R.red(v[i]);
}

WMat WMat::cols_range(int c0, int c1) const {
  WMat C(rows, c1 - c0, R);
  for (int i = 0; i < rows; ++i)
    for (int j = c0; j < c1; ++j) C(i, j - c0) = (*this)(i, j);
  return C;
}

WMat WMat::rows_range(int r0, int r1) const {
  WMat C(r1 - r0, cols, R);
  for (int i = r0; i < r1; ++i)
    for (int j = 0; j < cols; ++j) C(i - r0, j) = (*this)(i, j);
  return C;
}

WMat WMat::hcat(const WMat& l, const WMat& r) {
  if (l.rows != r.rows) throw Error("hcat row mismatch");
  WMat C(l.rows, l.cols + r.cols, l.R);
  for (int i = 0; i < l.rows; ++i) {
    for (int j = 0; j < l.cols; ++j) C(i, j) = l(i, j);
    for (int j = 0; j < r.cols; ++j) C(i, l.cols + j) = r(i, j);
  }
  return C;
}

WMat WMat::vcat(const WMat& t, const WMat& b) {
  if (t.cols != b.cols) throw Error("vcat col mismatch");
  WMat C(t.rows + b.rows, t.cols, t.R);
  std::copy(t.a.begin(), t.a.end(), C.a.begin());
  std::copy(b.a.begin(), b.a.end(), C.a.begin() + t.a.size());
  return C;
}

WMat WMat::block_diag(const WMat& x, const WMat& y) {
  WMat C(x.rows + y.rows, x.cols + y.cols, x.R);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) C(i, j) = x(i, j);
  for (int i = 0; i < y.rows; ++i)
    for (int j = 0; j < y.cols; ++j) C(x.rows + i, x.cols + j) = y(i, j);
  return C;
}

WMat WMat::from_cols(int rows, const std::vector<Vec>& cs, Wn ring) {
  WMat C(rows, int(cs.size()), ring);
  for (int j = 0; j < int(cs.size()); ++j) C.set_col(j, cs[j]);
  return C;
}

std::string WMat::str() const {
  std::string s;
  for (int i = 0; i < rows; ++i) {
    s += "[";
    for (int j = 0; j < cols; ++j) s += (j ? " " : "") + std::to_string((*this)(i, j));
    s += "]\n";
  }
  return s;
}

WMat reduce_to(const WMat& M, Wn target) {
  if (M.R.p != target.p || M.R.n < target.n) throw Error("reduce_to needs same p and a coarser level");
  WMat C(M.rows, M.cols, target);
  for (std::size_t i = 0; i < M.a.size(); ++i) C.a[i] = M.a[i] % target.q;
  return C;
}

}  // namespace dtw
