#include "dtw/smith.hpp"

#include <algorithm>

namespace dtw {

namespace {

void row_axpy(WMat& M, int dst, int src, i64 t) {  // row_dst -= t * row_src
  if (!t) return;
  const Wn& R = M.R;
  i64* d = &M.a[std::size_t(dst) * M.cols];
  const i64* s = &M.a[std::size_t(src) * M.cols];
  for (int j = 0; j < M.cols; ++j)
    if (s[j]) d[j] = R.sub(d[j], R.mul(t, s[j]));
}

void col_axpy(WMat& M, int dst, int src, i64 t) {  // col_dst -= t * col_src
  if (!t) return;
  const Wn& R = M.R;
  for (int i = 0; i < M.rows; ++i) {
    i64 s = M(i, src);
    if (s) M(i, dst) = R.sub(M(i, dst), R.mul(t, s));
  }
}

void swap_rows(WMat& M, int i, int k) {
  if (i == k) return;
  for (int j = 0; j < M.cols; ++j) std::swap(M(i, j), M(k, j));
}

void swap_cols(WMat& M, int i, int k) {
  if (i == k) return;
  for (int r = 0; r < M.rows; ++r) std::swap(M(r, i), M(r, k));
}

void scale_row(WMat& M, int i, i64 u) {
  for (int j = 0; j < M.cols; ++j) M(i, j) = M.R.mul(M(i, j), u);
}

void scale_col(WMat& M, int j, i64 u) {
  for (int i = 0; i < M.rows; ++i) M(i, j) = M.R.mul(M(i, j), u);
}

}  // namespace

Smith smith(const WMat& A0, unsigned track) {
  const Wn R = A0.R;
  Smith S;
  S.R = R;
  S.rows = A0.rows;
  S.cols = A0.cols;
  WMat A = A0;
  const int m = A.rows, c = A.cols;
  if (track & kTrackP) S.P = WMat::identity(m, R);
  if (track & kTrackPinv) S.Pinv = WMat::identity(m, R);
  if (track & kTrackQ) S.Q = WMat::identity(c, R);
  if (track & kTrackQinv) S.Qinv = WMat::identity(c, R);
  const int d = std::min(m, c);
  S.vals.assign(d, R.n);

  for (int k = 0; k < d; ++k) {
    // pivot of minimal valuation; a unit ends the search early
    int bi = -1, bj = -1, bv = R.n;
    for (int i = k; i < m && bv > 0; ++i) {
      const i64* row = &A.a[std::size_t(i) * c];
      for (int j = k; j < c; ++j) {
        if (!row[j]) continue;
        int v = R.val(row[j]);
        if (v < bv) {
          bv = v, bi = i, bj = j;
          if (v == 0) break;
        }
      }
    }
    if (bi < 0) break;
    swap_rows(A, k, bi);
    if (track & kTrackP) swap_rows(S.P, k, bi);
    if (track & kTrackPinv) swap_cols(S.Pinv, k, bi);
    swap_cols(A, k, bj);
    if (track & kTrackQ) swap_cols(S.Q, k, bj);
    if (track & kTrackQinv) swap_rows(S.Qinv, k, bj);

    const i64 pv = R.pp(bv);
    const i64 u = A(k, k) / pv;  // exact: A(k,k) = p^bv * unit (lifted)
    const i64 ui = R.inv(u % R.q);
    scale_row(A, k, ui);
    if (track & kTrackP) scale_row(S.P, k, ui);
    if (track & kTrackPinv) scale_col(S.Pinv, k, u % R.q);

    for (int i = k + 1; i < m; ++i) {
      i64 x = A(i, k);
      if (!x) continue;
      i64 t = x / pv;
      row_axpy(A, i, k, t);
      if (track & kTrackP) row_axpy(S.P, i, k, t);
      if (track & kTrackPinv) col_axpy(S.Pinv, k, i, R.neg(t));
    }
    for (int j = k + 1; j < c; ++j) {
      i64 x = A(k, j);
      if (!x) continue;
      i64 t = x / pv;
      col_axpy(A, j, k, t);
      if (track & kTrackQ) col_axpy(S.Q, j, k, t);
      if (track & kTrackQinv) row_axpy(S.Qinv, k, j, R.neg(t));
    }
    S.vals[k] = bv;
    S.rank = k + 1;
  }
  return S;
}

std::vector<int> cokernel_divisors(const WMat& A) {
  Smith S = smith(A);
  std::vector<int> e;
  for (int i = 0; i < A.rows; ++i) {
    int v = i < int(S.vals.size()) ? S.vals[i] : A.R.n;
    if (v > 0) e.push_back(v);
  }
  std::sort(e.begin(), e.end());
  return e;
}

int image_log_order(const WMat& A) {
  Smith S = smith(A);
  int s = 0;
  for (int v : S.vals) s += A.R.n - v;
  return s;
}

WMat kernel_gens(const WMat& A) {
  Smith S = smith(A, kTrackQ);
  const Wn R = A.R;
  std::vector<Vec> gens;
  for (int j = 0; j < A.cols; ++j) {
    int v = j < int(S.vals.size()) ? S.vals[j] : R.n;
    if (v == 0) continue;
    i64 s = R.pp(R.n - v);
    Vec g = S.Q.col(j);
    for (auto& x : g) x = R.mul(x, s);
    gens.push_back(std::move(g));
  }
  return WMat::from_cols(A.cols, gens, R);
}

bool solve(const WMat& A, const Vec& b, Vec& x) {
  const Wn R = A.R;
  Smith S = smith(A, kTrackP | kTrackQ);
  Vec pb = S.P.apply(b);
  Vec y(A.cols, 0);
  for (int i = 0; i < A.rows; ++i) {
    int v = i < int(S.vals.size()) ? S.vals[i] : R.n;
    if (v >= R.n) {
      if (pb[i]) return false;
      continue;
    }
    if (R.val(pb[i]) < v) return false;
    y[i] = R.red(pb[i] / R.pp(v));
  }
  x = S.Q.apply(y);
  return true;
}

}  // namespace dtw
