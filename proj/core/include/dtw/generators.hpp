// Seeded generators for complexes over W_n, shared by tests, self-tests and benchmarks.
#pragma once

#include <random>
#include <utility>

#include "dtw/chain_complex.hpp"

namespace dtw {

// random invertible matrix with its inverse, built from elementary operations
inline std::pair<WMat, WMat> random_invertible(std::mt19937_64& rng, int n, Wn W, int steps = 12) {
  WMat A = WMat::identity(n, W), Ai = WMat::identity(n, W);
  if (n == 0) return {A, Ai};
  for (int s = 0; s < steps; ++s) {
    int i = rng() % n, j = rng() % n;
    if (i == j) {
      i64 u;
      do u = rng() % W.q;
      while (u % W.p == 0);
      i64 ui = W.inv(u);
      for (int c = 0; c < n; ++c) A(i, c) = W.mul(A(i, c), u);
      for (int r = 0; r < n; ++r) Ai(r, i) = W.mul(Ai(r, i), ui);
    } else {
      i64 t = rng() % W.q;
      for (int c = 0; c < n; ++c) A(i, c) = W.add(A(i, c), W.mul(t, A(j, c)));
      for (int r = 0; r < n; ++r) Ai(r, j) = W.sub(Ai(r, j), W.mul(t, Ai(r, i)));
    }
  }
  return {A, Ai};
}

// sum of elementary complexes W --p^a--> W and single free terms, then scrambled by basis changes
inline ChainComplex random_complex(std::mt19937_64& rng, Wn W, int lo, int hi, int max_pieces = 3) {
  int len = hi - lo + 1;
  std::vector<int> ranks(len, 0);
  std::vector<std::vector<std::pair<int, int>>> pairs(len);  // (row in i-1, col in i) -> exponent stored separately
  std::vector<std::vector<int>> expo(len);
  for (int i = lo; i <= hi; ++i) {
    int free_pieces = rng() % 2;
    ranks[i - lo] += free_pieces;
  }
  for (int i = lo + 1; i <= hi; ++i) {
    int k = rng() % (max_pieces + 1);
    for (int t = 0; t < k; ++t) {
      int a = rng() % (W.n + 1);
      pairs[i - lo].push_back({ranks[i - 1 - lo]++, ranks[i - lo]++});
      expo[i - lo].push_back(a);
    }
  }
  Ring S = Ring::scalars(W);
  std::vector<std::pair<WMat, WMat>> g;
  for (int i = lo; i <= hi; ++i) g.push_back(random_invertible(rng, ranks[i - lo], W));
  ChainComplex C(S, lo, ranks);
  for (int i = lo + 1; i <= hi; ++i) {
    WMat d(ranks[i - 1 - lo], ranks[i - lo], W);
    for (std::size_t t = 0; t < pairs[i - lo].size(); ++t)
      d(pairs[i - lo][t].first, pairs[i - lo][t].second) = W.pp(expo[i - lo][t]);
    WMat dd = g[i - 1 - lo].first * d * g[i - lo].second;
    C.set_diff(i, RMat::from_wmat(dd, S));
  }
  return C;
}

}  // namespace dtw
