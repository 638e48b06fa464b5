// Finite levels of the patching construction: level complexes, transitions, limit homotopy
// compared with the Koszul exterior algebra, thread selection in inverse systems of finite sets,
// and the concentration/freeness checker.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dtw/tor.hpp"

namespace dtw {

// synthetic damage for negative tests: the transition out of levels[level + 1] in one degree
struct Perturbation {
  enum class Kind { Zero, TimesP } kind = Kind::Zero;
  int level = 0;   // index into the level list: the map levels[level+1] -> levels[level]
  int degree = 0;
};

struct PatchScenario {
  i64 p = 2;
  int s = 1;
  int delta = 0;
  std::vector<int> levels;  // strictly increasing, >= 1
  int maxdeg = 3;
  std::vector<Perturbation> perturb;
};
void validate(const PatchScenario& sc);

// C_n = (tensor of delta cyclic resolutions over W_n[(Z/p^n)^s]) tensor W_n, through maxdeg + 1
struct LevelDatum {
  int n = 0;
  ProductResolution res;
  ChainComplex C;  // over W_n
  GradedModule pi;
};
LevelDatum build_level_complex(const PatchScenario& sc, int n);

// e_{n,m}: C_n -> C_m for n >= m; f[i] is a W_m-matrix on reduced coordinates
struct Transition {
  int n = 0, m = 0;
  std::vector<WMat> f;
  std::vector<WMat> on_homology;  // generator coordinates of H_i(C_n) -> H_i(C_m)
};
Transition transition(const PatchScenario& sc, int n, int m);
Transition transition(const LevelDatum& from, const LevelDatum& to, int maxdeg);
// g after f on homology, reduced into the target
WMat compose_on_homology(const Transition& g, const Transition& f, int i);

struct LimitReport {
  LimitTor limit;
  std::vector<int> koszul_ranks;  // Tor over the truncated power series ring
  bool ranks_match = false;
  bool band_ok = false;  // zero outside [0, delta]
  ExteriorReport koszul_exterior;
  ExteriorReport limit_exterior;  // the stable image at the bottom level as a subring
  std::optional<GradedAlgebra> limit_algebra;
  int euler = 0;  // alternating sum of limit ranks
  bool pi0_ok = false;
  std::string note;
  bool conclusive() const { return limit.certified; }
  bool ok() const {
    return conclusive() && ranks_match && band_ok && koszul_exterior.ok && limit_exterior.ok && pi0_ok;
  }
};
LimitReport limit_pi(const PatchScenario& sc);

// S_infinity / a_n from both sides: W_n[prod Z/p^n] and W_n[X]/((1+X_i)^{p^n} - 1), sigma_i -> 1 + X_i
struct GroupAlgebraIso {
  bool ok = true;
  int dim = 0;
  bool exhaustive = false;  // every product of basis pairs checked
  int samples = 0;
  std::string failure;
};
GroupAlgebraIso group_algebra_identification(i64 p, int n, int s, int samples = 64, std::uint64_t seed = 1);

// Tor over W_n[(Z/p^n)^s] of the quotient killing the last delta coordinates against the
// augmentation, before and after r extra coordinates
struct FreeVariables {
  GradedModule before, after;
  bool equal = false;
};
FreeVariables free_variables_check(i64 p, int s, int delta, int r, int n, int maxdeg);

// ---- inverse systems of finite sets ----

// X_k = {0, .., size[k]-1}; map[k][x] in X_k for x in X_{k+1}
struct FiniteInverseSystem {
  std::vector<int> size;
  std::vector<std::vector<int>> map;
};
void validate(const FiniteInverseSystem& sys);
// eventual image at each level: the image of the top level
std::vector<std::vector<int>> eventual_images(const FiniteInverseSystem& sys);
// the smallest compatible thread in level order, or nothing when an eventual image is empty
std::optional<std::vector<int>> compact_select(const FiniteInverseSystem& sys);
bool is_thread(const FiniteInverseSystem& sys, const std::vector<int>& x);
FiniteInverseSystem random_system(std::mt19937_64& rng, int length, int max_size, bool with_empty_level);

// ---- concentration and freeness ----

// D over any finite local ring, supported in [q, q + delta]; R acts on H_q(D) through matrices for
// R.var(j) in the generator coordinates of homology_at(restrict_to_Wn(D), q)
struct CgInput {
  ChainComplex D;
  int q = 0;
  int delta = 0;
  Ring R;
  std::vector<WMat> action;
};

struct CgReport {
  bool pass = false;
  bool concentrated = true;
  bool free = true;
  std::string diagnosis;  // "", "concentration", "freeness" or "concentration+freeness"
  std::vector<int> nonzero_degrees;
  int generators = 0;  // minimal R-generators of H_q
  int tor1 = 0;        // minimal relations, dim Tor_1^R(H_q, k)
  std::string detail;
};
CgReport cg_check(const CgInput& in);

// R acting on H_q of a complex of free R-modules by multiplication
std::vector<WMat> natural_action(const ChainComplex& D, int q);

// seeded inputs: free H_q with contractible noise, an extra class above q, or a non-free quotient R/I
enum class CgKind { Pass, Concentration, Freeness };
CgInput random_cg_instance(std::mt19937_64& rng, CgKind kind);

}  // namespace dtw
