// Tor modules and algebras, inverse limits of Tor along a tower of levels,
// and comparisons with exterior algebras.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtw/resolutions.hpp"

namespace dtw {

// ring given either as a PolyQuotientRing (Koszul / truncation route) or directly as a finite ring
struct TorRing {
  std::optional<PolyQuotientRing> poly;  // present for truncated rings and for the group-relation presentation
  Ring S;                                // the ring actually computed in
  static TorRing from_poly(const PolyQuotientRing& P);
  static TorRing finite(const Ring& S);
  int nvars() const { return S.nvars(); }
};

// image of f in a ring; for group algebras X_i is read as sigma_i - 1
Vec element_in(const Ring& S, const Poly& f);
// (X_1, ..., X_s): the kernel of the augmentation
std::vector<Poly> augmentation_ideal(int s);

// columns spanning the ideal generated by elems, as a W_n-submodule of S
WMat ideal_span(const Ring& S, const std::vector<Vec>& elems);
// W_n-order of S/(elems), as log_p
int quotient_log_order(const Ring& S, const std::vector<Vec>& elems);

// P tensor_S S/J as a W_n-complex with relations
QuotientComplex tensor_quotient(const ChainComplex& P, const std::vector<Vec>& J);

// a free S-resolution of S/I built by choosing S-generators of each kernel (finite rings only)
ChainComplex greedy_resolution(const Ring& S, const std::vector<Vec>& I, int maxdeg, i64 max_cols = 4096);

struct TorModule {
  GradedModule H;
  std::string strategy;     // "free", "cyclic", "koszul", "greedy"
  bool swapped = false;     // computed by resolving the second module
  bool known_exact = true;  // false when only truncation-level statements are available
  int truncation = -1;
  std::string note;
};

// Tor^S_i(S/I, S/J) for i <= maxdeg
TorModule tor(const TorRing& R, const std::vector<Poly>& I, const std::vector<Poly>& J, int maxdeg);

// graded algebra given by per-degree subquotients and a product on coordinates
struct GradedAlgebra {
  Wn W;
  int maxdeg = 0;
  std::vector<Subquotient> H;
  // coordinates of x in degree a and y in degree b -> coordinates of xy in degree a+b
  std::function<Vec(int, const Vec&, int, const Vec&)> mul;
  AbGroup group(int i) const { return AbGroup{W, H[i].divisors()}; }
  int rank(int i) const { return H[i].ngens(); }
  Vec unit_coords(int i, int g) const;  // coordinate vector of generator g of degree i
};

struct TorAlgebra {
  GradedAlgebra A;
  GradedModule module;
  std::vector<std::string> labels;  // names of the degree-one generators
  std::string strategy;
  bool known_exact = true;
  int truncation = -1;
};

// Tor^S(S/I, S/J) with the product coming from the dg structure on the resolution of S/I
TorAlgebra tor_algebra(const TorRing& R, const std::vector<Poly>& I, const std::vector<Poly>& J, int maxdeg);
// the same for a resolution already built (koszul or tensor of cyclic); N = S/J
TorAlgebra tor_algebra(const ProductResolution& P, const std::vector<Vec>& J, int maxdeg);
// augmented version: N = W_n through the augmentation, never builds the ring of P
TorAlgebra tor_algebra_augmented(const ProductResolution& P, int maxdeg);

struct ExteriorReport {
  bool ok = true;
  int degree = -1;     // first failing degree
  std::string reason;  // empty when ok
  std::vector<int> generator_match;  // e_i -> generator index in degree one
};
ExteriorReport exterior_compare(const GradedAlgebra& A, int delta);

// graded-commutativity and associativity on generators
struct AlgebraLaws {
  bool commutative = true;
  bool associative = true;
  std::string where;
};
AlgebraLaws check_algebra_laws(const GradedAlgebra& A);

// ---- inverse limits ----

// levels[0] is the lowest level; maps[k] goes from levels[k+1] to levels[k] degreewise
struct Tower {
  std::vector<ChainComplex> levels;  // complexes over W_{n_k}
  std::vector<std::vector<WMat>> maps;
};

struct LimitTor {
  bool certified = false;
  std::vector<int> ranks;                     // limit rank per degree (minimal generators of the stable image)
  std::vector<int> stable_level;              // first N with im(N) = im(N+1) at the bottom, per degree; -1 if none
  std::vector<std::vector<std::vector<int>>> stable_divisors;  // [level][degree] divisors of the stable image
  std::vector<GradedModule> level_tor;
  std::string note;
};

LimitTor limit_tor(const Tower& T, int maxdeg);

// the tower Tor_{W_n[(Z/p^n)^s]}(W_n[(Z/p^n)^s]/(sigma_i - 1, last delta coordinates), W_n) for n = lo..hi
Tower group_tower(i64 p, int s, int delta, int n_lo, int n_hi, int maxdeg);

// ---- exterior compatibility ----

// M graded, V acting up by one degree, V* acting down by one; pairing[j][k] = <v_j, w_k>
struct CompatInput {
  Wn W;
  std::vector<int> ranks;  // rank of M_i, i = 0..
  // act_v[j][i]: matrix M_i -> M_{i+1}; act_w[k][i]: M_i -> M_{i-1} (i >= 1)
  std::vector<std::vector<WMat>> act_v, act_w;
  std::vector<std::vector<i64>> pairing;
};

struct CompatReport {
  bool ok = true;
  std::string violation;
  int degree = -1, v = -1, w = -1, basis = -1;
  bool uniqueness_checked = false;
  bool unique_matches = true;
};
CompatReport exterior_compat_check(const CompatInput& in);
// the exterior algebra on W_n^delta with wedge and contraction under the standard pairing
CompatInput exterior_model(Wn W, int delta);

}  // namespace dtw
