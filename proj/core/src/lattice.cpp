#include "dtw/lattice.hpp"

#include <numeric>

namespace dtw {

Subquotient::Subquotient(const WMat& V0, const WMat& U) : R_(V0.R), ambient_(V0.rows) {
  const int N = R_.n;
  // U must sit inside V; adding its generators to V is harmless and guards callers
  WMat V = U.cols ? WMat::hcat(V0, U) : V0;
  Smith S1 = smith(V, kTrackP | kTrackPinv);
  P1_ = S1.P;
  r1_ = S1.rank;
  v1_.assign(S1.vals.begin(), S1.vals.begin() + r1_);
  // coordinates of U in the basis g_j = Pinv e_j p^{v_j}
  WMat A(r1_, r1_ + U.cols, R_);
  for (int j = 0; j < r1_; ++j) A(j, j) = R_.pp(N - v1_[j]);
  for (int c = 0; c < U.cols; ++c) {
    Vec u = P1_.apply(U.col(c));
    for (int j = 0; j < r1_; ++j) A(j, r1_ + c) = R_.red(u[j] / R_.pp(v1_[j]));
  }
  Smith S2 = smith(A, kTrackP | kTrackPinv);
  P2_ = S2.P;
  std::vector<Vec> gcols;
  for (int i = 0; i < r1_; ++i) {
    int e = S2.vals[i];
    if (e == 0) continue;
    keep_.push_back(i);
    div_.push_back(e);
    // generator: sum_j Pinv2(j,i) g_j
    Vec coeff(ambient_, 0);
    for (int j = 0; j < r1_; ++j) {
      i64 c = S2.Pinv(j, i);
      if (!c) continue;
      c = R_.mul(c, R_.pp(v1_[j]));
      for (int r = 0; r < ambient_; ++r) coeff[r] = R_.add(coeff[r], R_.mul(c, S1.Pinv(r, j)));
    }
    gcols.push_back(coeff);
  }
  gens_ = WMat::from_cols(ambient_, gcols, R_);
}

int Subquotient::log_order() const { return std::accumulate(div_.begin(), div_.end(), 0); }

bool Subquotient::in_V(const Vec& x) const {
  Vec u = P1_.apply(x);
  for (int j = 0; j < ambient_; ++j) {
    if (j < r1_) {
      if (R_.val(u[j]) < v1_[j]) return false;
    } else if (u[j]) {
      return false;
    }
  }
  return true;
}

Vec Subquotient::coords(const Vec& x) const {
  Vec u = P1_.apply(x);
  Vec w(r1_, 0);
  for (int j = 0; j < r1_; ++j) w[j] = R_.red(u[j] / R_.pp(v1_[j]));
  Vec t = P2_.apply(w);
  Vec out(div_.size());
  for (std::size_t i = 0; i < div_.size(); ++i) {
    i64 m = div_[i] >= R_.n ? R_.q : R_.pp(div_[i]);
    out[i] = t[keep_[i]] % m;
  }
  return out;
}

bool Subquotient::is_trivial_class(const Vec& x) const {
  for (auto c : coords(x))
    if (c) return false;
  return true;
}

int AbGroup::log_order() const { return std::accumulate(e.begin(), e.end(), 0); }

static WMat with_relations(const WMat& F, const AbGroup& B) {
  WMat D(B.rank(), B.rank(), F.R);
  for (int i = 0; i < B.rank(); ++i) D(i, i) = F.R.pp(B.e[i]);
  return WMat::hcat(F, D);
}

int hom_image_log_order(const WMat& F, const AbGroup& B) {
  if (B.rank() == 0) return 0;
  auto c = cokernel_divisors(with_relations(F, B));
  return B.log_order() - std::accumulate(c.begin(), c.end(), 0);
}

std::vector<int> subgroup_divisors(const WMat& F, const AbGroup& B) {
  // the subgroup is a quotient of W_n^{cols}; take the image inside the ambient presentation
  if (B.rank() == 0) return {};
  WMat V = F;
  WMat D(B.rank(), B.rank(), F.R);
  for (int i = 0; i < B.rank(); ++i) D(i, i) = F.R.pp(B.e[i]);
  // image of F in B = (im F + im D) / im D
  Subquotient H(WMat::hcat(V, D), D);
  return H.divisors();
}

WMat hom_compose(const WMat& G, const WMat& F, const AbGroup& C) {
  WMat H = G * F;
  for (int i = 0; i < H.rows; ++i)
    for (int j = 0; j < H.cols; ++j) {
      i64 m = C.e[i] >= H.R.n ? 0 : H.R.pp(C.e[i]);
      if (m) H(i, j) %= m;
    }
  return H;
}

bool hom_is_zero(const WMat& F, const AbGroup& B) {
  for (int i = 0; i < F.rows; ++i)
    for (int j = 0; j < F.cols; ++j) {
      i64 m = B.e[i] >= F.R.n ? F.R.q : F.R.pp(B.e[i]);
      if (F(i, j) % m) return false;
    }
  return true;
}

bool exact_at(const WMat& f, const WMat& g, const AbGroup& A, const AbGroup& B, const AbGroup& C) {
  (void)A;
  if (!hom_is_zero(g * f, C)) return false;
  return hom_image_log_order(f, B) + hom_image_log_order(g, C) == B.log_order();
}

}  // namespace dtw
