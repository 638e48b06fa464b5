#include "dtw/dold_kan.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <map>
#include <memory>

namespace dtw {

namespace {

bool same(const WMat& A, const WMat& B) { return A.rows == B.rows && A.cols == B.cols && A.a == B.a; }

Monotone face_map(int m, int i) {  // delta_i: [m-1] -> [m]
  Monotone t;
  for (int v = 0; v <= m; ++v)
    if (v != i) t.push_back(v);
  return t;
}

Monotone degen_map(int m, int j) {  // sigma_j: [m+1] -> [m]
  Monotone t;
  for (int v = 0; v <= m; ++v) {
    t.push_back(v);
    if (v == j) t.push_back(v);
  }
  return t;
}

// surjections [m] ->> [k], lexicographic
std::vector<Monotone> surjections(int m, int k) {
  std::vector<Monotone> out;
  Monotone cur{0};
  std::function<void()> rec = [&]() {
    int pos = int(cur.size());
    if (pos == m + 1) {
      if (cur.back() == k) out.push_back(cur);
      return;
    }
    for (int step = 0; step <= 1; ++step) {
      int v = cur.back() + step;
      // need enough positions left to reach k
      if (v > k || k - v > m - pos) continue;
      cur.push_back(v);
      rec();
      cur.pop_back();
    }
  };
  if (k > m) return out;
  if (m == 0) return {Monotone{0}};
  rec();
  return out;
}

bool is_unit_smith(const WMat& A) {
  if (A.rows != A.cols) return false;
  if (A.rows == 0) return true;
  Smith S = smith(A);
  return std::all_of(S.vals.begin(), S.vals.end(), [](int v) { return v == 0; });
}

}  // namespace

WMat SimplicialModule::op(const Monotone& theta, int b) const {
  const int a = int(theta.size()) - 1;
  if (a < 0 || a > D || b > D) throw Error("simplicial operator outside the truncation");
  for (int j = a - 1; j >= 0; --j)
    if (theta[j] == theta[j + 1]) {
      Monotone t = theta;
      t.erase(t.begin() + j + 1);
      return degen[a - 1][j] * op(t, b);
    }
  for (int i = b; i >= 0; --i)
    if (std::find(theta.begin(), theta.end(), i) == theta.end()) {
      Monotone t = theta;
      for (auto& v : t)
        if (v > i) --v;
      return op(t, b - 1) * face[b][i];
    }
  return WMat::identity(rank[b], W);
}

SimplicialCheck validate(const SimplicialModule& X) {
  auto fail = [](std::string s) { return SimplicialCheck{false, std::move(s)}; };
  if (int(X.rank.size()) != X.D + 1 || int(X.face.size()) != X.D + 1 || int(X.degen.size()) != X.D)
    return fail("level counts do not match the truncation");
  for (int m = 1; m <= X.D; ++m) {
    if (int(X.face[m].size()) != m + 1) return fail(fmt::format("level {} needs {} faces", m, m + 1));
    for (const auto& F : X.face[m])
      if (F.rows != X.rank[m - 1] || F.cols != X.rank[m]) return fail(fmt::format("face at level {} has wrong shape", m));
  }
  for (int m = 0; m < X.D; ++m) {
    if (int(X.degen[m].size()) != m + 1) return fail(fmt::format("level {} needs {} degeneracies", m, m + 1));
    for (const auto& S : X.degen[m])
      if (S.rows != X.rank[m + 1] || S.cols != X.rank[m])
        return fail(fmt::format("degeneracy at level {} has wrong shape", m));
  }
  const auto& d = X.face;
  const auto& s = X.degen;
  for (int m = 2; m <= X.D; ++m)
    for (int j = 1; j <= m; ++j)
      for (int i = 0; i < j; ++i)
        if (!same(d[m - 1][i] * d[m][j], d[m - 1][j - 1] * d[m][i]))
          return fail(fmt::format("d_{} d_{} != d_{} d_{} at level {}", i, j, j - 1, i, m));
  for (int m = 0; m < X.D; ++m)
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= m + 1; ++i) {
        WMat lhs = d[m + 1][i] * s[m][j];
        WMat rhs;
        if (i < j)
          rhs = s[m - 1][j - 1] * d[m][i];
        else if (i == j || i == j + 1)
          rhs = WMat::identity(X.rank[m], X.W);
        else
          rhs = s[m - 1][j] * d[m][i - 1];
        if (!same(lhs, rhs)) return fail(fmt::format("d_{} s_{} identity fails at level {}", i, j, m));
      }
  for (int m = 0; m + 2 <= X.D; ++m)
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= j; ++i)
        if (!same(s[m + 1][i] * s[m][j], s[m + 1][j + 1] * s[m][i]))
          return fail(fmt::format("s_{} s_{} != s_{} s_{} at level {}", i, j, j + 1, i, m));
  return {};
}

SimplicialModule constant_module(Wn W, int r, int D) {
  SimplicialModule X;
  X.W = W;
  X.D = D;
  X.rank.assign(D + 1, r);
  X.face.resize(D + 1);
  X.degen.resize(D);
  for (int m = 1; m <= D; ++m) X.face[m].assign(m + 1, WMat::identity(r, W));
  for (int m = 0; m < D; ++m) X.degen[m].assign(m + 1, WMat::identity(r, W));
  return X;
}

SimplicialModule direct_sum(const SimplicialModule& X, const SimplicialModule& Y) {
  if (X.D != Y.D) throw Error("direct sum needs equal truncations");
  SimplicialModule Z = X;
  for (int m = 0; m <= X.D; ++m) Z.rank[m] = X.rank[m] + Y.rank[m];
  for (int m = 1; m <= X.D; ++m)
    for (int i = 0; i <= m; ++i) Z.face[m][i] = WMat::block_diag(X.face[m][i], Y.face[m][i]);
  for (int m = 0; m < X.D; ++m)
    for (int j = 0; j <= m; ++j) Z.degen[m][j] = WMat::block_diag(X.degen[m][j], Y.degen[m][j]);
  return Z;
}

SimplicialModule sphere_module(Wn W, int n, int D) {
  SimplicialModule X;
  X.W = W;
  X.D = D;
  std::vector<std::vector<Monotone>> basis(D + 1);
  std::vector<std::map<Monotone, int>> index(D + 1);
  for (int m = 0; m <= D; ++m) {
    basis[m] = surjections(m, n);
    for (int t = 0; t < int(basis[m].size()); ++t) index[m][basis[m][t]] = t;
    X.rank.push_back(int(basis[m].size()));
  }
  auto act = [&](int m, int mp, const Monotone& theta) {  // theta: [mp] -> [m]
    WMat A(X.rank[mp], X.rank[m], W);
    for (int t = 0; t < X.rank[m]; ++t) {
      Monotone c;
      for (int v : theta) c.push_back(basis[m][t][v]);
      auto it = index[mp].find(c);
      if (it != index[mp].end()) A(it->second, t) = 1;  // otherwise the basepoint
    }
    return A;
  };
  X.face.resize(D + 1);
  X.degen.resize(D);
  for (int m = 1; m <= D; ++m)
    for (int i = 0; i <= m; ++i) X.face[m].push_back(act(m, m - 1, face_map(m, i)));
  for (int m = 0; m < D; ++m)
    for (int j = 0; j <= m; ++j) X.degen[m].push_back(act(m, m + 1, degen_map(m, j)));
  return X;
}

SimplicialModule transport(const SimplicialModule& X, const std::vector<WMat>& phi, const std::vector<WMat>& inv) {
  SimplicialModule Y = X;
  for (int m = 1; m <= X.D; ++m)
    for (int i = 0; i <= m; ++i) Y.face[m][i] = phi[m - 1] * X.face[m][i] * inv[m];
  for (int m = 0; m < X.D; ++m)
    for (int j = 0; j <= m; ++j) Y.degen[m][j] = phi[m + 1] * X.degen[m][j] * inv[m];
  return Y;
}

bool is_simplicial(const SimplicialMap& f, const SimplicialModule& X, const SimplicialModule& Y) {
  if (X.D != Y.D || int(f.f.size()) != X.D + 1) return false;
  for (int m = 1; m <= X.D; ++m)
    for (int i = 0; i <= m; ++i)
      if (!same(f.f[m - 1] * X.face[m][i], Y.face[m][i] * f.f[m])) return false;
  for (int m = 0; m < X.D; ++m)
    for (int j = 0; j <= m; ++j)
      if (!same(f.f[m + 1] * X.degen[m][j], Y.degen[m][j] * f.f[m])) return false;
  return true;
}

Normalized normalized_chains(const SimplicialModule& X) {
  SimplicialCheck v = validate(X);
  if (!v.ok) throw Error("simplicial identity violated: " + v.what);
  Normalized out;
  const Wn W = X.W;
  for (int m = 0; m <= X.D; ++m) {
    if (m == 0 || X.rank[m] == 0) {
      out.basis.push_back(WMat::identity(X.rank[m], W));
      out.proj.push_back(WMat::identity(X.rank[m], W));
      continue;
    }
    WMat F = X.face[m][1];
    for (int i = 2; i <= m; ++i) F = WMat::vcat(F, X.face[m][i]);
    Smith S = smith(F, kTrackQ | kTrackQinv);
    std::vector<int> keep;
    for (int j = 0; j < F.cols; ++j) {
      int val = j < int(S.vals.size()) ? S.vals[j] : W.n;
      if (val != 0 && val != W.n) throw Error(fmt::format("normalized chains are not free at level {}", m));
      if (val == W.n) keep.push_back(j);
    }
    WMat B(X.rank[m], int(keep.size()), W), P(int(keep.size()), X.rank[m], W);
    for (int c = 0; c < int(keep.size()); ++c)
      for (int r = 0; r < X.rank[m]; ++r) {
        B(r, c) = S.Q(r, keep[c]);
        P(c, r) = S.Qinv(keep[c], r);
      }
    out.basis.push_back(B);
    out.proj.push_back(P);
  }
  std::vector<int> ranks;
  for (const auto& B : out.basis) ranks.push_back(B.cols);
  Ring S = Ring::scalars(W);
  out.N = ChainComplex(S, 0, ranks);
  for (int m = 1; m <= X.D; ++m)
    out.N.set_diff(m, RMat::from_wmat(out.proj[m - 1] * X.face[m][0] * out.basis[m], S));
  return out;
}

ChainComplex moore_complex(const SimplicialModule& X) {
  Ring S = Ring::scalars(X.W);
  ChainComplex C(S, 0, X.rank);
  for (int m = 1; m <= X.D; ++m) {
    WMat d(X.rank[m - 1], X.rank[m], X.W);
    for (int i = 0; i <= m; ++i) d = i % 2 ? d - X.face[m][i] : d + X.face[m][i];
    C.set_diff(m, RMat::from_wmat(d, S));
  }
  return C;
}

std::vector<GammaSummand> gamma_layout(const ChainComplex& C, int m) {
  std::vector<GammaSummand> out;
  int off = 0;
  for (int k = std::max(C.lo, 0); k <= std::min(m, C.hi); ++k) {
    if (C.rank(k) == 0) continue;
    for (auto& s : surjections(m, k)) {
      out.push_back({s, k, off});
      off += C.rank(k);
    }
  }
  return out;
}

namespace {

void check_gamma_input(const ChainComplex& C, int D) {
  if (C.S.dim() != 1) throw Error("inverse Dold-Kan needs a complex over W_n");
  if (!C.empty() && (C.lo < 0 || C.hi > D)) throw Error("complex degrees lie outside [0, D]");
}

int layout_size(const std::vector<GammaSummand>& L, const ChainComplex& C) {
  return L.empty() ? 0 : L.back().offset + C.rank(L.back().k);
}

}  // namespace

SimplicialModule dk_inverse(const ChainComplex& C, int D) {
  check_gamma_input(C, D);
  const Wn W = C.S.W();
  SimplicialModule X;
  X.W = W;
  X.D = D;
  std::vector<std::vector<GammaSummand>> L(D + 1);
  std::vector<std::map<Monotone, int>> where(D + 1);
  for (int m = 0; m <= D; ++m) {
    L[m] = gamma_layout(C, m);
    for (const auto& s : L[m]) where[m][s.sigma] = s.offset;
    X.rank.push_back(layout_size(L[m], C));
  }
  // theta: [mp] -> [m]; summand (sigma, c) goes to the epi part of sigma theta
  auto act = [&](int m, int mp, const Monotone& theta) {
    WMat A(X.rank[mp], X.rank[m], W);
    for (const auto& s : L[m]) {
      Monotone st;
      for (int v : theta) st.push_back(s.sigma[v]);
      Monotone im = st;
      im.erase(std::unique(im.begin(), im.end()), im.end());
      Monotone tau;
      for (int v : st) tau.push_back(int(std::lower_bound(im.begin(), im.end(), v) - im.begin()));
      const int j = int(im.size()) - 1;
      const int r = C.rank(s.k);
      if (j == s.k) {
        int o = where[mp].at(tau);
        for (int t = 0; t < r; ++t) A(o + t, s.offset + t) = 1;
      } else if (j == s.k - 1 && im.front() == 1 && C.rank(j) > 0) {
        WMat d = C.diff(s.k).expand();
        int o = where[mp].at(tau);
        for (int a = 0; a < d.rows; ++a)
          for (int b = 0; b < d.cols; ++b) A(o + a, s.offset + b) = d(a, b);
      }
    }
    return A;
  };
  X.face.resize(D + 1);
  X.degen.resize(D);
  for (int m = 1; m <= D; ++m)
    for (int i = 0; i <= m; ++i) X.face[m].push_back(act(m, m - 1, face_map(m, i)));
  for (int m = 0; m < D; ++m)
    for (int j = 0; j <= m; ++j) X.degen[m].push_back(act(m, m + 1, degen_map(m, j)));
  return X;
}

SimplicialMap dk_inverse_map(const ChainMap& g, int D) {
  check_gamma_input(g.src, D);
  check_gamma_input(g.tgt, D);
  const Wn W = g.src.S.W();
  SimplicialMap F;
  for (int m = 0; m <= D; ++m) {
    auto Ls = gamma_layout(g.src, m), Lt = gamma_layout(g.tgt, m);
    std::map<Monotone, int> where;
    for (const auto& s : Lt) where[s.sigma] = s.offset;
    WMat A(layout_size(Lt, g.tgt), layout_size(Ls, g.src), W);
    for (const auto& s : Ls) {
      auto it = where.find(s.sigma);
      if (it == where.end()) continue;  // target is zero in that degree
      WMat f = g.at(s.k).expand();
      for (int a = 0; a < f.rows; ++a)
        for (int b = 0; b < f.cols; ++b) A(it->second + a, s.offset + b) = f(a, b);
    }
    F.f.push_back(A);
  }
  return F;
}

ChainMap normalized_map(const SimplicialMap& f, const Normalized& NX, const Normalized& NY) {
  ChainMap g{NX.N, NY.N, {}};
  Ring S = NX.N.S;
  for (int m = NX.N.lo; m <= NX.N.hi; ++m)
    g.f.push_back(RMat::from_wmat(NY.proj[m] * f.f[m] * NX.basis[m], S));
  return g;
}

SimplicialCheck check_n_gamma(const ChainComplex& C, int D) {
  auto fail = [](std::string s) { return SimplicialCheck{false, std::move(s)}; };
  SimplicialModule X = dk_inverse(C, D);
  SimplicialCheck v = validate(X);
  if (!v.ok) return v;
  Normalized N = normalized_chains(X);
  for (int m = 0; m <= D; ++m) {
    const int r = C.rank(m);
    if (N.basis[m].cols != r) return fail(fmt::format("N_{} has rank {}, expected {}", m, N.basis[m].cols, r));
    if (r == 0) continue;
    auto L = gamma_layout(C, m);
    // the identity surjection is the last summand of degree m
    const int o = L.back().offset;
    for (int i = 1; i <= m; ++i)
      for (int a = 0; a < X.rank[m - 1]; ++a)
        for (int b = 0; b < r; ++b)
          if (X.face[m][i](a, o + b)) return fail(fmt::format("d_{} is nonzero on the top summand at level {}", i, m));
    if (m == 0) continue;
    WMat d = C.diff(m).expand();
    const int o1 = C.rank(m - 1) ? gamma_layout(C, m - 1).back().offset : 0;
    for (int a = 0; a < X.rank[m - 1]; ++a)
      for (int b = 0; b < r; ++b) {
        i64 expect = (a >= o1 && a < o1 + C.rank(m - 1)) ? d(a - o1, b) : 0;
        if (X.face[m][0](a, o + b) != expect) return fail(fmt::format("d_0 differs from the differential at level {}", m));
      }
  }
  return {};
}

GammaN gamma_n_iso(const SimplicialModule& X) {
  Normalized N = normalized_chains(X);
  GammaN out;
  out.GNX = dk_inverse(N.N, X.D);
  out.invertible = true;
  for (int m = 0; m <= X.D; ++m) {
    WMat A(X.rank[m], out.GNX.rank[m], X.W);
    for (const auto& s : gamma_layout(N.N, m)) {
      WMat block = X.op(s.sigma, s.k) * N.basis[s.k];
      for (int a = 0; a < block.rows; ++a)
        for (int b = 0; b < block.cols; ++b) A(a, s.offset + b) = block(a, b);
    }
    out.invertible = out.invertible && is_unit_smith(A);
    out.phi.f.push_back(A);
  }
  out.simplicial = is_simplicial(out.phi, out.GNX, X);
  return out;
}

Vec SquareZeroRing::mul(int m, const Vec& x, const Vec& y) const {
  const Wn& W = X.W;
  Vec z(X.rank[m], 0);
  z[0] = W.mul(x[0], y[0]);
  for (int i = 1; i < X.rank[m]; ++i) z[i] = W.add(W.mul(x[0], y[i]), W.mul(y[0], x[i]));
  return z;
}

SquareZeroRing square_zero(const SimplicialModule& V) {
  SimplicialCheck v = validate(V);
  if (!v.ok) throw Error("simplicial identity violated: " + v.what);
  return SquareZeroRing{V, direct_sum(constant_module(V.W, 1, V.D), V)};
}

SimplicialCheck check_ring_laws(const SquareZeroRing& R) {
  auto fail = [](std::string s) { return SimplicialCheck{false, std::move(s)}; };
  const SimplicialModule& X = R.X;
  auto e = [&](int m, int i) {
    Vec v(X.rank[m], 0);
    v[i] = 1;
    return v;
  };
  for (int m = 0; m <= X.D; ++m) {
    const int r = X.rank[m];
    for (int i = 0; i < r; ++i) {
      if (R.mul(m, e(m, 0), e(m, i)) != e(m, i)) return fail(fmt::format("unit fails at level {}", m));
      for (int j = 0; j < r; ++j) {
        Vec xy = R.mul(m, e(m, i), e(m, j));
        if (xy != R.mul(m, e(m, j), e(m, i))) return fail(fmt::format("not commutative at level {}", m));
        if (i > 0 && j > 0 && std::any_of(xy.begin(), xy.end(), [](i64 t) { return t != 0; }))
          return fail(fmt::format("V V is nonzero at level {}", m));
        for (int k = 0; k < r; ++k)
          if (R.mul(m, xy, e(m, k)) != R.mul(m, e(m, i), R.mul(m, e(m, j), e(m, k))))
            return fail(fmt::format("not associative at level {}", m));
        auto check_op = [&](const WMat& F, int mp) {
          return F.apply(xy) == R.mul(mp, F.apply(e(m, i)), F.apply(e(m, j)));
        };
        for (int t = 0; m >= 1 && t <= m; ++t)
          if (!check_op(X.face[m][t], m - 1)) return fail(fmt::format("d_{} is not multiplicative at level {}", t, m));
        for (int t = 0; m < X.D && t <= m; ++t)
          if (!check_op(X.degen[m][t], m + 1)) return fail(fmt::format("s_{} is not multiplicative at level {}", t, m));
      }
    }
  }
  return {};
}

namespace {

// (a, b)-shuffles as (mu, nu, sign)
struct Shuffle {
  std::vector<int> mu, nu;
  int sign;
};

std::vector<Shuffle> shuffles(int a, int b) {
  std::vector<Shuffle> out;
  const int n = a + b;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != a) continue;
    Shuffle s;
    for (int t = 0; t < n; ++t) (mask >> t & 1u ? s.mu : s.nu).push_back(t);
    // sign of the permutation (mu, nu): count pairs mu_i > nu_j
    int inv = 0;
    for (int x : s.mu)
      for (int y : s.nu)
        if (x > y) ++inv;
    s.sign = inv % 2 ? -1 : 1;
    out.push_back(s);
  }
  return out;
}

Vec apply_degens(const SimplicialModule& X, int level, const std::vector<int>& idx, Vec x) {
  for (int j : idx) {
    x = X.degen[level][j].apply(x);
    ++level;
  }
  return x;
}

}  // namespace

GradedAlgebra homotopy_ring(const SquareZeroRing& R, int maxdeg) {
  if (maxdeg < 0 || maxdeg >= R.X.D) throw Error("homotopy ring needs maxdeg below the truncation level");
  auto N = std::make_shared<Normalized>(normalized_chains(R.X));
  GradedAlgebra A;
  A.W = R.X.W;
  A.maxdeg = maxdeg;
  for (int j = 0; j <= maxdeg; ++j) A.H.push_back(homology_at(N->N, j));
  auto H = std::make_shared<std::vector<Subquotient>>(A.H);
  auto Rp = std::make_shared<SquareZeroRing>(R);
  const Wn W = R.X.W;
  A.mul = [N, H, Rp, W, maxdeg](int a, const Vec& x, int b, const Vec& y) -> Vec {
    if (a + b > maxdeg) return Vec{};
    auto lift = [&](int deg, const Vec& c) {
      Vec z((*H)[deg].ambient(), 0);
      for (int g = 0; g < (*H)[deg].ngens(); ++g) {
        Vec gen = (*H)[deg].gen(g);
        for (std::size_t t = 0; t < z.size(); ++t) z[t] = W.add(z[t], W.mul(c[g], gen[t]));
      }
      return N->basis[deg].apply(z);
    };
    Vec xa = lift(a, x), yb = lift(b, y);
    const int n = a + b;
    Vec acc(Rp->X.rank[n], 0);
    for (const auto& s : shuffles(a, b)) {
      Vec u = apply_degens(Rp->X, a, s.nu, xa);
      Vec v = apply_degens(Rp->X, b, s.mu, yb);
      Vec uv = Rp->mul(n, u, v);
      for (std::size_t t = 0; t < acc.size(); ++t) acc[t] = s.sign > 0 ? W.add(acc[t], uv[t]) : W.sub(acc[t], uv[t]);
    }
    return (*H)[n].coords(N->proj[n].apply(acc));
  };
  return A;
}

}  // namespace dtw
