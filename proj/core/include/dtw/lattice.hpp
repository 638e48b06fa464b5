// Finite abelian p-groups as subquotients of W_n^r.
#pragma once

#include <vector>

#include "dtw/smith.hpp"

namespace dtw {

// H = V / U with U <= V <= W_n^r, both given by generating columns.
// H is decomposed as a sum of cyclic groups W_n/p^{e_i}.
class Subquotient {
 public:
  Subquotient() = default;
  Subquotient(const WMat& Vgens, const WMat& Ugens);

  const Wn& W() const { return R_; }
  int ambient() const { return ambient_; }
  const std::vector<int>& divisors() const { return div_; }
  int ngens() const { return int(div_.size()); }
  int log_order() const;
  bool is_zero() const { return div_.empty(); }
  // representative of generator i in the ambient module
  Vec gen(int i) const { return gens_.col(i); }
  const WMat& gens() const { return gens_; }
  bool in_V(const Vec& x) const;
  // coordinates of x in V, entry i taken mod p^{e_i}
  Vec coords(const Vec& x) const;
  bool is_trivial_class(const Vec& x) const;

 private:
  Wn R_;
  int ambient_ = 0;
  std::vector<int> div_;
  WMat gens_;
  WMat P1_;
  std::vector<int> v1_;
  int r1_ = 0;
  WMat P2_;
  std::vector<int> keep_;  // rows of P2 that carry a nonzero divisor
};

// abelian group sum W_n/p^{e_i}, e_i in [1, n]
struct AbGroup {
  Wn R;
  std::vector<int> e;
  int log_order() const;
  int rank() const { return int(e.size()); }
};

// homomorphism matrices act on coordinate columns; all helpers reduce outputs mod p^{target e}
int hom_image_log_order(const WMat& F, const AbGroup& target);
WMat hom_compose(const WMat& G, const WMat& F, const AbGroup& target);
bool hom_is_zero(const WMat& F, const AbGroup& target);
// exactness of A -f-> B -g-> C at B
bool exact_at(const WMat& f, const WMat& g, const AbGroup& A, const AbGroup& B, const AbGroup& C);
// minimal generator count, i.e. dim_k of H/pH
inline int min_gens(const AbGroup& A) { return A.rank(); }
// subgroup of B generated by the columns of F, as its own decomposition
std::vector<int> subgroup_divisors(const WMat& F, const AbGroup& B);

}  // namespace dtw
