#include "dtw/deformation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

#include "dtw/tor.hpp"

namespace dtw {

namespace {

Ring ring_at(const Presentation& P, int T) { return Ring::truncated(P.W, P.s, T); }

Poly from_ring(const Ring& S, const Vec& v) {
  Poly f;
  for (int k = 0; k < S.dim(); ++k)
    if (v[k]) f.terms.push_back({S.multi_index(k), v[k]});
  if (f.terms.empty()) f = Poly::constant(S.nvars(), 0);
  return f;
}

// f(images) inside S
Vec eval_in(const Ring& S, const Poly& f, const std::vector<Vec>& im) {
  Vec v = S.zero();
  for (const auto& [a, c] : f.terms) {
    Vec m = S.scalar(c);
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[j]) m = S.mul(m, S.pow(im[j], a[j]));
    v = S.add(v, m);
  }
  return v;
}

std::vector<Vec> relations_in(const Presentation& P, const Ring& S) {
  std::vector<Vec> ys;
  for (const auto& f : P.rel) ys.push_back(to_ring(f, S));
  return ys;
}

// largest order of the reductions mod p
int max_order(const Presentation& P) {
  int m = 0;
  for (const auto& f : P.rel) {
    Poly g = f;
    for (auto& term : g.terms) term.second = ((term.second % P.W.p) + P.W.p) % P.W.p;
    m = std::max(m, g.order());
  }
  return m;
}

}  // namespace

void validate(const Presentation& P) {
  if (P.s < 0 || P.T < 1) throw Error("presentation needs s >= 0 and T >= 1");
  for (std::size_t i = 0; i < P.rel.size(); ++i) {
    const Poly& f = P.rel[i];
    i64 c = 0;
    for (const auto& [a, x] : f.terms) {
      if (int(a.size()) != P.s) throw Error(fmt::format("relation {} has {} variables, expected {}", i, a.size(), P.s));
      for (int e : a)
        if (e < 0) throw Error(fmt::format("relation {} has a negative exponent", i));
      if (std::all_of(a.begin(), a.end(), [](int e) { return e == 0; })) c += x;
    }
    if (((c % P.W.p) + P.W.p) % P.W.p != 0) throw Error(fmt::format("relation {} has a unit constant term", i));
  }
}

WMat linear_parts(const Presentation& P) {
  Wn k(P.W.p, 1);
  WMat L(P.t(), P.s, k);
  for (int i = 0; i < P.t(); ++i)
    for (const auto& [a, c] : P.rel[i].terms) {
      int deg = 0, where = -1;
      for (int j = 0; j < P.s; ++j) {
        deg += a[j];
        if (a[j]) where = j;
      }
      if (deg == 1) L(i, where) = k.add(L(i, where), k.red(c));
    }
  return L;
}

Presentation substitute(const Presentation& P, const std::vector<Poly>& images) {
  if (int(images.size()) != P.s) throw Error("substitution needs one image per variable");
  Ring S = ring_at(P, P.T);
  std::vector<Vec> im;
  for (const auto& g : images) im.push_back(to_ring(g, S));
  Presentation Q = P;
  Q.rel.clear();
  for (const auto& f : P.rel) Q.rel.push_back(from_ring(S, eval_in(S, f, im)));
  return Q;
}

Presentation mix_relations(const Presentation& P, const WMat& A) {
  if (A.rows != P.t() || A.cols != P.t()) throw Error("relation mix has the wrong shape");
  Ring S = ring_at(P, P.T);
  auto ys = relations_in(P, S);
  Presentation Q = P;
  Q.rel.clear();
  for (int i = 0; i < P.t(); ++i) {
    Vec v = S.zero();
    for (int j = 0; j < P.t(); ++j) v = S.add(v, S.scale(A(i, j), ys[j]));
    Q.rel.push_back(from_ring(S, v));
  }
  return Q;
}

namespace {

// Ybar plus s - t linear forms m-primary in k[[X]]: a system of parameters, hence regular.
// Restricting to the t-plane X = A z, m^N inside I + m^{N+1} gives m^N inside I by Nakayama.
bool parameter_certificate(const Presentation& P, int* degree) {
  const int s = P.s, t = P.t();
  const Wn k(P.W.p, 1);
  const int Nmax = max_order(P) * t + 2;
  std::mt19937_64 rng(0x5eedULL + std::uint64_t(s) * 31 + t);
  for (int attempt = 0; attempt < 12; ++attempt) {
    WMat A(s, t, k);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < t; ++j) A(i, j) = attempt == 0 ? (i == j) : std::uniform_int_distribution<i64>(0, k.q - 1)(rng);
    if (smith(A).rank < t) continue;
    for (int N = 1; N <= Nmax; ++N) {
      // in k[z]/m^{N+1}: every monomial of degree N lies in the ideal
      Ring S = Ring::truncated(k, t, N);
      std::vector<Vec> im(s, S.zero());
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j) im[i] = S.add(im[i], S.scale(A(i, j), S.var(j)));
      std::vector<Vec> gens;
      for (const auto& f : P.rel) gens.push_back(eval_in(S, f, im));
      const int base = image_log_order(ideal_span(S, gens));
      for (int b = 0; b < S.dim(); ++b)
        if (S.degree(b) == N) gens.push_back(S.basis(b));
      if (image_log_order(ideal_span(S, gens)) == base) {
        *degree = N;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

Regularity check_regular(const Presentation& P, int margin) {
  validate(P);
  Regularity r;
  r.T = P.T;
  if (P.rel.empty()) return r;
  int N = 0;
  if (P.t() <= P.s && parameter_certificate(P, &N)) {
    r.T = -1;
    r.method = fmt::format("parameters, m^{} in the ideal", N);
    return r;
  }
  // Koszul over k on the reductions: Ybar regular in k[[X]] makes (p, Y) and hence Y regular.
  // Truncation artifacts fade as the margin grows, genuine classes do not.
  r.method = "koszul";
  PolyQuotientRing Q{Wn(P.W.p, 1), P.s, false, P.T, {}};
  const int step = std::max(1, max_order(P));
  int m = std::max(margin, step);
  for (int round = 0; round < 3; ++round, m += step) {
    KoszulDiagnosis d = koszul_h1(Q, P.rel, m);
    r.regular = d.regular;
    r.witness = d.witness;
    if (r.regular) break;
  }
  return r;
}

Minimized minimize(const Presentation& P) {
  Minimized m;
  m.rho = P.t() && P.s ? smith(linear_parts(P)).rank : 0;
  m.s = P.s - m.rho;
  m.t = P.t() - m.rho;
  return m;
}

TangentDims ci_tangent_dims(const Presentation& P, int len) {
  Regularity r = check_regular(P);
  if (!r.regular) throw NotRegular(fmt::format("relations are not a regular sequence at truncation {}", r.T), r);
  Minimized m = minimize(P);
  TangentDims d(std::max(len, 2), 0);
  d[0] = m.s;
  d[1] = m.t;
  return d;
}

ExpectedSize expected_size_ci_check(const Presentation& P, int b0, int b1) {
  ExpectedSize e;
  e.m = minimize(P);
  // after elimination the remaining linear parts vanish mod p, so the relations sit in (p, m^2)
  if (e.m.s != b0) {
    e.witness = fmt::format("{} generators after minimization, expected {}", e.m.s, b0);
    return e;
  }
  if (e.m.t != b1) {
    e.witness = fmt::format("{} relations after minimization, expected {}", e.m.t, b1);
    return e;
  }
  e.reg = check_regular(P);
  if (!e.reg.regular) {
    e.witness = fmt::format("Koszul H_1 nonzero at truncation {}", e.reg.T);
    return e;
  }
  e.ok = true;
  return e;
}

ComparisonCheck pi0_comparison_check(const std::vector<int>& tR, const std::vector<int>& tpi0, int hom_pi1) {
  ComparisonCheck c;
  auto fail = [&](std::string why) {
    c.ok = false;
    c.failure = std::move(why);
    return c;
  };
  for (int x : tR)
    if (x < 0) return fail("negative dimension in t(R)");
  for (int x : tpi0)
    if (x < 0) return fail("negative dimension in t(pi_0 R)");
  if (hom_pi1 < 0) return fail("negative dimension of Hom(pi_1 R, k)");
  if (tR.empty() || tpi0.empty()) return fail("t^0 missing");
  if (tR[0] != tpi0[0]) return fail(fmt::format("t^0 differs: {} vs {}", tR[0], tpi0[0]));
  if (tR.size() < 2 || tpi0.size() < 2) return c;
  // ranks of consecutive maps along the displayed segment
  const int A1 = tpi0[1], B1 = tR[1];
  if (A1 > B1) return fail(fmt::format("t^1(pi_0 R) = {} does not inject into t^1(R) = {}", A1, B1));
  int r = B1 - A1;  // image in Hom(pi_1 R, k)
  if (r > hom_pi1) return fail(fmt::format("cokernel of t^1 has dimension {} > dim Hom(pi_1 R, k) = {}", r, hom_pi1));
  r = hom_pi1 - r;  // image in t^2(pi_0 R)
  if (tpi0.size() < 3) return c;
  if (r > tpi0[2]) return fail(fmt::format("image {} does not fit in t^2(pi_0 R) = {}", r, tpi0[2]));
  r = tpi0[2] - r;  // image in t^2(R)
  if (tR.size() < 3) return c;
  if (r > tR[2]) return fail(fmt::format("image {} does not fit in t^2(R) = {}", r, tR[2]));
  return c;
}

namespace {

// mu(I) and mu(H_1) of the Koszul complex over k, at truncation T; cycles must lift past T
std::pair<int, int> koszul_counts(const Presentation& P, int T) {
  const Wn kf(P.W.p, 1);
  auto ring_at = [&](int U) { return Ring::truncated(kf, P.s, U); };
  Ring S = ring_at(T);
  auto ys = relations_in(P, S);
  std::vector<Vec> mys;
  for (const auto& y : ys)
    for (int j = 0; j < P.s; ++j) mys.push_back(S.mul(S.var(j), y));
  const int muI = image_log_order(ideal_span(S, ys)) - image_log_order(ideal_span(S, mys));

  Ring S2 = ring_at(T + max_order(P) + 1);
  ChainComplex K = restrict_to_Wn(koszul_complex(S, ys));
  ChainComplex K2 = restrict_to_Wn(koszul_complex(S2, relations_in(P, S2)));
  WMat Z2 = kernel_gens(K2.diff(1).expand());
  const int t = P.t(), dim = S.dim();
  std::vector<Vec> Z;
  for (int c = 0; c < Z2.cols; ++c) {
    Vec z = Z2.col(c), w(std::size_t(t) * dim, 0);
    for (int j = 0; j < t; ++j)
      for (int k = 0; k < S2.dim(); ++k) {
        int idx = S.index_of(S2.multi_index(k));
        if (idx >= 0) w[std::size_t(j) * dim + idx] = z[std::size_t(j) * S2.dim() + k];
      }
    Z.push_back(w);
  }
  auto times = [&](const Vec& r, const Vec& z) {
    Vec out(z.size(), 0);
    for (int j = 0; j < t; ++j) {
      Vec blk(z.begin() + std::size_t(j) * dim, z.begin() + std::size_t(j + 1) * dim);
      blk = S.mul(r, blk);
      std::copy(blk.begin(), blk.end(), out.begin() + std::size_t(j) * dim);
    }
    return out;
  };
  std::vector<Vec> mZ;
  for (const auto& z : Z) {
    for (int j = 0; j < P.s; ++j) mZ.push_back(times(S.var(j), z));
  }
  WMat B = K.diff(2).expand();
  const int rows = t * dim;
  WMat ZB = WMat::hcat(WMat::from_cols(rows, Z, kf), B), mZB = WMat::hcat(WMat::from_cols(rows, mZ, kf), B);
  const int muH = image_log_order(ZB) - image_log_order(mZB);
  return {muI, muH};
}

}  // namespace

KoszulComparison koszul_comparison(const Presentation& P) {
  validate(P);
  KoszulComparison k;
  Minimized m = minimize(P);
  k.tR = {m.s, m.t, 0};
  if (P.rel.empty()) {
    k.tpi0 = {m.s, 0};
    return k;
  }
  const int T = std::max(P.T, max_order(P) + 1);
  auto a = koszul_counts(P, T), b = koszul_counts(P, T + 1);
  k.stable = a == b;
  k.tpi0 = {m.s, a.first - m.rho};
  k.hom_pi1 = a.second;
  return k;
}

Numerology wiles_numerology(i64 h1_global, i64 h2_global, i64 h1_local, i64 h1_f, i64 r, i64 nQ, i64 delta) {
  for (i64 x : {h1_global, h2_global, h1_local, h1_f, r, nQ, delta})
    if (x < 0) throw Error("numerology inputs must be nonnegative");
  Numerology N;
  N.value = (h1_global - h2_global) - h1_local + h1_f + r * nQ;
  N.expected = r * nQ - delta;
  N.relations = h1_global - h2_global + delta == h1_local - h1_f;
  N.negative = N.value < 0;
  return N;
}

Presentation random_ci(std::mt19937_64& rng, Wn W, int s, int t, int T) {
  if (t > s) throw Error("a regular sequence in s variables has at most s elements");
  auto uni = [&](i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng); };
  Presentation P{W, s, T, {}};
  Ring S = ring_at(P, T);
  auto unit = [&] {
    i64 u;
    do u = uni(1, W.q - 1);
    while (u % W.p == 0);
    return u;
  };
  // Y_i = u X_i^a + (higher terms) + p (anything in m); initial forms mod p are X_i^a
  std::vector<int> deg;
  for (int i = 0; i < t; ++i) {
    const int a = uni(0, 3) == 0 ? 3 : 2;
    deg.push_back(a);
    std::vector<int> e(s, 0);
    e[i] = a;
    Poly f{{{e, unit()}}};
    for (int k = 0; k < S.dim(); ++k) {
      const int d = S.degree(k);
      if (d == 0) continue;
      if (d > a && uni(0, 3) == 0) f.terms.push_back({S.multi_index(k), uni(0, W.q - 1)});
      else if (d <= a && W.n > 1 && uni(0, 5) == 0) f.terms.push_back({S.multi_index(k), W.p * uni(0, W.q / W.p - 1)});
    }
    if (W.n > 1 && uni(0, 4) == 0) f.terms.push_back({std::vector<int>(s, 0), W.p});
    P.rel.push_back(f);
  }
  // hide the shape: linear change of variables invertible mod p, plus a unit mix of relations
  std::vector<Poly> im;
  WMat A(s, s, W);
  for (;;) {
    for (auto& x : A.a) x = uni(0, W.q - 1);
    if (smith(reduce_to(A, Wn(W.p, 1))).rank == s) break;
  }
  for (int i = 0; i < s; ++i) {
    Poly g;
    for (int j = 0; j < s; ++j) g.terms.push_back(Poly::var(s, j, A(i, j)).terms[0]);
    if (uni(0, 2) == 0) {
      int j = int(uni(0, s - 1));
      g = g + Poly::var(s, j) * Poly::var(s, j).scaled(uni(0, W.q - 1));
    }
    im.push_back(g);
  }
  P = substitute(P, im);
  // mix relations without disturbing the initial forms: units between equal degrees,
  // multipliers of order >= deg_i - deg_j + 1 otherwise
  std::vector<Vec> ys = relations_in(P, S), out = ys;
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) {
      if (i == j) continue;
      Vec g;
      if (deg[i] == deg[j]) {
        if (j > i) continue;  // unitriangular within a degree
        g = S.scalar(uni(0, W.q - 1));
      } else {
        std::vector<int> e(s, 0);
        e[uni(0, s - 1)] = std::max(1, deg[i] - deg[j] + 1);
        int k = S.index_of(e);
        if (k < 0) continue;
        g = S.scale(uni(0, W.q - 1), S.basis(k));
      }
      out[i] = S.add(out[i], S.mul(g, ys[j]));
    }
  for (int i = 0; i < t; ++i) P.rel[i] = from_ring(S, S.scale(unit(), out[i]));
  return P;
}

}  // namespace dtw
