// Tangent dimensions of complete-intersection presentations, the expected-size test,
// comparison with pi_0 and the Taylor-Wiles dimension count.
#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dtw/resolutions.hpp"

namespace dtw {

// W[[X_1..X_s]]/(Y_1..Y_t), computed in W_n[X]/m^{T+1}
struct Presentation {
  Wn W;
  int s = 0;
  int T = 4;
  std::vector<Poly> rel;
  int t() const { return int(rel.size()); }
};

// throws on a relation with a unit constant term or a variable count mismatch
void validate(const Presentation& P);
// t x s matrix of linear parts mod p
WMat linear_parts(const Presentation& P);
// X_i -> images[i], everything truncated at P.T
Presentation substitute(const Presentation& P, const std::vector<Poly>& images);
// Y -> A Y for a t x t matrix A over W_n
Presentation mix_relations(const Presentation& P, const WMat& A);

struct Regularity {
  bool regular = true;
  int T = -1;                  // truncation the statement holds at; -1 for an exact certificate
  std::string method;          // "parameters, ..." or "koszul"
  std::optional<Vec> witness;  // a Koszul 1-cycle that is not a boundary
};
Regularity check_regular(const Presentation& P, int margin = 2);

using TangentDims = std::vector<int>;

struct Minimized {
  int rho = 0;  // rank of the linear parts mod p
  int s = 0, t = 0;
};
Minimized minimize(const Presentation& P);

// (s - rho, t - rho, 0, ...) of length len; throws NotRegular when the Koszul test finds a witness
class NotRegular : public Error {
 public:
  NotRegular(const std::string& what, Regularity r) : Error(what), info(std::move(r)) {}
  Regularity info;
};
TangentDims ci_tangent_dims(const Presentation& P, int len = 4);

struct ExpectedSize {
  bool ok = false;
  std::string witness;  // which condition failed
  Minimized m;
  Regularity reg;
};
ExpectedSize expected_size_ci_check(const Presentation& P, int b0, int b1);

// t(R), t(pi_0 R) from degree 0 and dim Hom(pi_1 R, k): t^0 equal, then the exact segment
// 0 -> t^1(pi_0 R) -> t^1(R) -> Hom(pi_1 R, k) -> t^2(pi_0 R) -> t^2(R) -> ... admits ranks
struct ComparisonCheck {
  bool ok = true;
  std::string failure;
};
ComparisonCheck pi0_comparison_check(const std::vector<int>& tR, const std::vector<int>& tpi0, int hom_pi1);

// the derived quotient of a presentation by its (possibly non-regular) relations: t(R) from the
// counts, t^0, t^1 of the classical quotient and dim pi_1 / m pi_1, all at the truncation
struct KoszulComparison {
  std::vector<int> tR, tpi0;
  int hom_pi1 = 0;
  bool stable = true;  // the truncation-level answers agree at T and T+1
};
KoszulComparison koszul_comparison(const Presentation& P);

struct Numerology {
  i64 value = 0;
  i64 expected = 0;       // r #Q - delta
  bool relations = true;  // h1 - h2 + delta = dim H^1(Q_p) - dim H^1_f
  bool negative = false;
};
Numerology wiles_numerology(i64 h1_global, i64 h2_global, i64 h1_local, i64 h1_f, i64 r, i64 nQ, i64 delta);

// random regular presentation whose relations reduce into m^2 mod p, hidden by a linear change of
// variables and a unit mix of relations
Presentation random_ci(std::mt19937_64& rng, Wn W, int s, int t, int T);

}  // namespace dtw
