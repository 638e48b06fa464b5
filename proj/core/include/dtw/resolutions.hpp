// Koszul and 2-periodic (Tate) resolutions, their tensor products, and the
// comparison maps between levels W_{n+1}[Z/p^{n+1}] -> W_n[Z/p^n].
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtw/chain_complex.hpp"

namespace dtw {

// polynomial over W_n given by terms {exponent vector -> coefficient}
struct Poly {
  std::vector<std::pair<std::vector<int>, i64>> terms;
  static Poly var(int nvars, int i, i64 c = 1);
  static Poly constant(int nvars, i64 c);
  Poly operator+(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(i64 c) const;
  int nvars() const;
  int order() const;  // lowest total degree of a term with nonzero coefficient; -1 for zero
};

// image in a monomial ring; terms outside the basis are dropped (truncated) or reduced (quotients)
Vec to_ring(const Poly& f, const Ring& S);

// W_n[X_1..X_s] truncated at total degree T, or with the relations (1+X_i)^{p^{m_i}} = 1
struct PolyQuotientRing {
  Wn W;
  int s = 0;
  bool group_relations = false;
  int T = 4;               // truncation degree when group_relations is false
  std::vector<int> m;      // exponents when group_relations is true
  Ring ring() const;
  // the same presentation read as a group algebra W_n[prod Z/p^{m_i}]
  RingSpec group_spec() const;
};

// One factor is a rank-one-per-degree complex: d(u_a) = coef[a] u_{a-1}, coefficients in
// the factor's own ring. Exterior factors stop at degree 1; Tate factors continue with divided powers.
struct Factor {
  bool tate = false;
  Ring ring;
  int coordinate = -1;    // >= 0: ring is W_n[Z/p^e] sitting at that coordinate of a product group algebra
  std::vector<Vec> coef;  // coef[a] for a = 1..len; coef[0] unused
  int len() const { return int(coef.size()) - 1; }
};

// tensor product of factors with its dg-algebra product
class ProductResolution {
 public:
  ProductResolution() = default;
  // S is the ring the factors' coefficients are read in; may be left empty when only base changes are used
  ProductResolution(Ring S, std::vector<Factor> factors, int maxdeg);

  const Ring& ring() const { return S_; }
  const Wn& W() const { return W_; }
  int maxdeg() const { return maxdeg_; }
  int nfactors() const { return int(factors_.size()); }
  const std::vector<Factor>& factors() const { return factors_; }
  const std::vector<std::vector<int>>& basis(int deg) const { return basis_[deg]; }
  int index_of(const std::vector<int>& a) const;
  // complex over T, coefficients pushed through phi(factor index, coefficient)
  ChainComplex base_change(const Ring& T, const std::function<Vec(int, const Vec&)>& phi) const;
  ChainComplex complex() const;    // over ring()
  ChainComplex augmented() const;  // tensor_S W_n through the augmentation
  // u_a * u_b = c * u_{a+b}; false when the product vanishes or leaves the window
  bool product(const std::vector<int>& a, const std::vector<int>& b, i64& c, int& idx) const;

 private:
  Ring S_;
  Wn W_;
  std::vector<Factor> factors_;
  int maxdeg_ = 0;
  std::vector<std::vector<std::vector<int>>> basis_;
};

// embed an element of W_n[Z/p^e] into a product group algebra at a coordinate
Vec embed_coordinate(const Ring& factor_ring, const Ring& S, int coordinate, const Vec& x);

struct Resolution {
  ProductResolution res;
  std::string strategy;  // "free", "koszul", "cyclic"
  bool known_exact = true;
  int truncation = -1;  // T when certified only at a truncation
  ChainComplex complex() const { return res.complex(); }
};

struct KoszulDiagnosis {
  bool regular = true;
  int T = -1;                 // truncation used, -1 when the ring is finite on the nose
  std::optional<Vec> witness; // a nonzero H_1 class as a cycle in S^t (flattened)
};

// Koszul resolution of S/(elems); regularity read off from H_1 (lifted from T+margin when truncated)
Resolution koszul(const PolyQuotientRing& S, const std::vector<Poly>& elems, KoszulDiagnosis* diag = nullptr,
                  int margin = 2);
KoszulDiagnosis koszul_h1(const PolyQuotientRing& S, const std::vector<Poly>& elems, int margin = 2);

// W_n over W_n[Z/p^e] sitting at a coordinate of a product group algebra, up to degree len
Factor cyclic_factor(i64 p, int n, int e, int coordinate, int len);
Resolution cyclic_resolution(const RingSpec& S, int coordinate, int maxdeg);
// tensor of cyclic resolutions for the listed coordinates: resolves S/(sigma_i - 1, i in coords).
// with_ring = false skips building the (possibly large) group algebra itself.
Resolution group_quotient_resolution(const RingSpec& S, const std::vector<int>& coords, int maxdeg,
                                     bool with_ring = true);

// ring map W_{n+1}[prod Z/p^{e_i}] -> W_n[prod Z/p^{f_i}] sending sigma_i to sigma_i and reducing coefficients
Vec group_reduce(const Ring& from, const Ring& to, const Vec& x);

// scalars c_a with F(u_a) = c_a u_a lifting the identity in degree 0 along group_reduce, one list per
// factor, found degree by degree by solving coef_to[a] c_a = reduce(coef_from[a]) c_{a-1}
std::vector<std::vector<Vec>> lift_comparison(const ProductResolution& from, const ProductResolution& to);
// per degree, the W_m-matrix of the comparison after augmentation (source coordinates reduced mod p^m)
std::vector<WMat> augmented_comparison(const ProductResolution& from, const ProductResolution& to);

}  // namespace dtw
