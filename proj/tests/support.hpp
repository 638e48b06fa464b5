// Shared generators and brute-force oracles for the unit tests.
#pragma once

#include <random>
#include <set>
#include <utility>

#include "dtw/chain_complex.hpp"
#include "dtw/generators.hpp"

namespace dtw::testing {

// all vectors of W_n^k
inline std::vector<Vec> all_vectors(Wn W, int k) {
  std::vector<Vec> out;
  i64 total = 1;
  for (int i = 0; i < k; ++i) total *= W.q;
  for (i64 c = 0; c < total; ++c) {
    Vec v(k);
    i64 r = c;
    for (int i = 0; i < k; ++i) {
      v[i] = r % W.q;
      r /= W.q;
    }
    out.push_back(v);
  }
  return out;
}

using dtw::random_complex;
using dtw::random_invertible;

// |ker d_i| / |im d_{i+1}| by enumeration
inline i64 brute_homology_order(const ChainComplex& C, int i) {
  Wn W = C.S.W();
  WMat dout = C.diff(i).augmented(), din = C.diff(i + 1).augmented();
  i64 ker = 0;
  for (const auto& v : all_vectors(W, C.rank(i)))
    if (dout.rows == 0 || dout.apply(v) == Vec(dout.rows, 0)) ++ker;
  std::set<Vec> img;
  for (const auto& v : all_vectors(W, C.rank(i + 1))) img.insert(din.cols ? din.apply(v) : Vec(C.rank(i), 0));
  if (C.rank(i) == 0) return 1;
  return ker / i64(img.size());
}

inline i64 order_of(const std::vector<int>& div, i64 p) {
  i64 o = 1;
  for (int e : div) o *= ipow(p, e);
  return o;
}

inline ChainMap random_chain_map(std::mt19937_64& rng, const ChainComplex& A, const ChainComplex& B) {
  // f = d_B h + h d_A plus a map through homology-free pieces is hard to sample directly;
  // take a random null-homotopic map plus identity-like maps when shapes agree
  Ring S = A.S;
  Wn W = S.W();
  int lo = std::min(A.lo, B.lo) - 1, hi = std::max(A.hi, B.hi) + 1;
  std::vector<WMat> h;  // h_i: A_i -> B_{i+1}
  for (int i = lo; i <= hi; ++i) {
    WMat m(B.rank(i + 1), A.rank(i), W);
    for (auto& x : m.a) x = rng() % W.q;
    h.push_back(m);
  }
  ChainMap f{A, B, {}};
  for (int i = A.lo; i <= A.hi; ++i) {
    WMat m = B.diff(i + 1).augmented() * h[i - lo] + h[i - 1 - lo] * A.diff(i).augmented();
    f.f.push_back(RMat::from_wmat(m, S));
  }
  return f;
}

}  // namespace dtw::testing
