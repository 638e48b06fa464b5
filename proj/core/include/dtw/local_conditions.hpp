// Local conditions on group cochains: lifts with their axioms, the cone Selmer complex
// with its long exact sequence, and the chain-level duality pairing.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dtw/group_cochains.hpp"

namespace dtw {

// linear functional on local 2-cocycles valued in mu, zero on coboundaries.
// Either a raw row on C^2(G_v, mu) or lambda against the decomposition of H^2.
struct InvFunctional {
  std::optional<Vec> row;
  Subquotient H2;
  Vec lambda;  // lambda_i multiplies p^{n - e_i} coords_i

  i64 eval(const Cochains& Cmu, const Vec& x) const;
};

// helper: a splitting of Z^2 -> H^2 and an isomorphism of the largest cyclic summand with p^{n-e} W_n
InvFunctional invariant_from_h2(const Cochains& Cmu, i64 scale = 1);
// raw row; throws unless it vanishes on coboundaries and relations
InvFunctional invariant_from_row(const Cochains& Cmu, const Vec& row);

// spanning sets for C^k_L, k = 0..top, and declared cocycles spanning L^k
struct ConditionLift {
  std::vector<WMat> span;
  std::vector<WMat> declared;
};

ConditionLift zero_lift(const Cochains& C);
ConditionLift full_lift(const Cochains& C);

struct LocalSide {
  GModule M;
  Cochains C;
  std::vector<WMat> res;  // res[k]: global C^k -> local C^k
  ConditionLift lift;
  bool has_lift = false;
};

struct PlaceData {
  std::string label;
  FiniteGroup G;
  std::vector<int> iota;
  LocalSide prim, dual, mu;
  std::optional<InvFunctional> inv;
};

struct PlaceSpec {
  std::string label;
  FiniteGroup G;
  std::vector<int> iota;
};

struct SelmerData {
  FiniteGroup G;
  GModule M;
  DualData D;
  int top = 3;
  Cochains C, Cdual, Cmu;
  std::vector<PlaceData> places;
};

enum class Side { Primary, Dual };

// builds all global and local cochain complexes up to degree top (>= 3 for the pairing)
SelmerData make_selmer(const FiniteGroup& G, const GModule& M, const std::vector<PlaceSpec>& places,
                       const std::vector<i64>& chi = {}, int top = 3, i64 budget = 10000000);
void set_lift(SelmerData& S, int v, Side side, ConditionLift L);

struct AxiomReport {
  bool closed = true;       // (i)
  bool conjugation = true;  // (ii)
  bool realizes = true;     // (iii)
  bool vanishing = true;    // (iv)
  bool vanishing_checked = false;
  std::vector<std::string> failures;
  std::vector<std::vector<int>> lifted;    // H^k(C_L)
  std::vector<std::vector<int>> quotient;  // H^k(C / C_L)
  bool ok() const { return closed && conjugation && realizes && vanishing; }
};

AxiomReport check_lift(const FiniteGroup& Gv, const Cochains& C, const ConditionLift& L);
// (i)-(iii) for both lifts that are present, (iv) when both are
AxiomReport check_axioms(const SelmerData& S, int v);

// L = (H^0, l, 0, ...) and the dual (H^0, l_perp, 0, ...). l_perp comes from inv_v when present,
// otherwise from h1_pairing (rows: generators of H^1(M_v), cols: generators of H^1(M*_v)).
std::pair<ConditionLift, ConditionLift> example_unramified_lift(const SelmerData& S, int v, const WMat& l,
                                                                const std::optional<WMat>& h1_pairing = {});

// term n = C^n(G, M) + sum_v C^{n-1}_v / C^{n-1}_{L,v} for n = 0..T; d(x, y) = (-dx, dy + x|_v)
struct SelmerComplex : CoComplex {
  std::vector<int> global_dims;
  std::vector<std::vector<int>> offsets;  // offsets[n][v]: start of the place-v block in term n
  Vec global_part(int n, const Vec& xi) const;
  Vec local_part(int n, int v, int local_dim, const Vec& xi) const;
};

// every place needs a lift on the chosen side; T defaults to S.top
SelmerComplex cone_selmer_complex(const SelmerData& S, Side side, int T = -1);

struct SelmerLesReport {
  bool exact = true;
  int spots = 0;
  std::string failure;
  std::vector<std::vector<int>> selmer, global, local;  // divisors of H^k_L, H^k, H^k(sum of quotients)
};
// long exact sequence H^k_L -> H^k -> sum_v H^k(C_v / C_L) -> H^{k+1}_L, truncated at degree T
SelmerLesReport selmer_les(const SelmerData& S, Side side, int T = 2);

struct PairingOptions {
  bool symmetric = false;
  std::vector<Vec> shift_y;        // per place, added to y_v; must lie in C^0_L
  std::vector<Vec> shift_y_dual;   // per place, added to y'_v; must lie in C^1_Lperp
  std::optional<Vec> shift_z;      // added to z; must be a global 2-cocycle
};

struct PairingResult {
  i64 value = 0;
  std::vector<i64> local_values;
  bool local_cocycles = true;   // d P_v = eps_v u eps'_v
  bool eps_cup_zero = true;     // eps_v u eps'_v = 0
  Vec z;
};

// xi in Z^1 of the primary cone, xi' in Z^2 of the dual cone (both built with T >= 3);
// throws when no z with dz = x u x' exists, when a lift is missing, or when an epsilon leaves its condition
PairingResult duality_pairing(const SelmerData& S, const SelmerComplex& cone, const SelmerComplex& cone_dual,
                              const Vec& xi, const Vec& xi_dual, const PairingOptions& opt = {});

// sum_v inv_v(alpha_v u beta_v), alpha in C^0(G, M) restricting into C^0_L, beta_v local 2-cocycles in M*_v
i64 degree_zero_pairing(const SelmerData& S, const Vec& alpha, const std::vector<Vec>& beta);

// lambda vectors (one block per place over the generators of H^2(G_v, mu)) with sum_v inv_v(res w) = 0
// for every global 2-cocycle w; returned as columns
WMat reciprocal_invariants(const SelmerData& S);
void set_invariants(SelmerData& S, const Vec& lambda);
// sum_v inv_v(w_v) for each generator of H^2(G, mu)
std::vector<i64> reciprocity_defect(const SelmerData& S);

// pairing values on generators of H^1_L x H^2_Lperp; pairs without a global z are skipped and counted
struct PairingMatrix {
  WMat values;
  int left_log = 0, right_log = 0, image_log = 0;
  int skipped = 0;
  bool perfect() const { return skipped == 0 && image_log == left_log && image_log == right_log; }
};
PairingMatrix pairing_matrix(const SelmerData& S, const SelmerComplex& cone, const SelmerComplex& cone_dual);

// random cocycle: random combination of the generators of H plus a random coboundary
Vec random_cocycle(const CoComplex& C, const Subquotient& H, int k, std::mt19937_64& rng);

// seeded synthetic instance: |G| <= max_group, |M| <= max_module, two or three places with
// unramified, zero or full lifts, invariants chosen to satisfy reciprocity
struct SelmerInstance {
  SelmerData S;
  std::string description;
};
SelmerInstance random_selmer(std::uint64_t seed, int max_group = 8, int max_module = 27);

}  // namespace dtw
