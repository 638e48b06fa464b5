// Bounded complexes of finite free modules, homology, cones, fibres, shifts,
// truncations and tensor products.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtw/lattice.hpp"
#include "dtw/ring.hpp"

namespace dtw {

// Homological grading; a cochain complex C^k is stored at degree -k with cohomological = true.
struct ChainComplex {
  Ring S;
  int lo = 0, hi = -1;
  std::vector<int> ranks;  // ranks[i - lo]
  std::vector<RMat> d;     // d[i - lo - 1]: C_i -> C_{i-1}, i in (lo, hi]
  bool cohomological = false;
  bool window_exact = true;  // false when a truncation could only be realized up to the window

  ChainComplex() = default;
  ChainComplex(Ring ring, int lo_, std::vector<int> ranks_);

  int rank(int i) const { return (i < lo || i > hi) ? 0 : ranks[i - lo]; }
  // differential out of degree i; a zero matrix outside the stored range
  RMat diff(int i) const;
  void set_diff(int i, const RMat& m);
  bool empty() const { return hi < lo; }
};

struct ValidationReport {
  bool ok = true;
  int degree = 0;
  std::string what;
};

ValidationReport validate(const ChainComplex& C);

// per-degree elementary divisor data: H_i = sum W_n/p^{e}
struct GradedModule {
  Wn R;
  int lo = 0;
  std::vector<std::vector<int>> divisors;
  const std::vector<int>& at(int i) const;
  // number of cyclic summands
  int rank(int i) const { return int(at(i).size()); }
  // count of full-order (free) summands
  int free_rank(int i) const;
  int hi() const { return lo + int(divisors.size()) - 1; }
};

// subquotient presentation of one homology group; gens are cycles in C_i
Subquotient homology_at(const ChainComplex& C, int i);
GradedModule homology(const ChainComplex& C);

// maps C_i -> D_i; f[i - lo] for i in [lo, hi] of the source
struct ChainMap {
  ChainComplex src, tgt;
  std::vector<RMat> f;
  RMat at(int i) const;
};

ValidationReport validate(const ChainMap& f);
ChainMap identity_map(const ChainComplex& C);
ChainMap zero_map(const ChainComplex& A, const ChainComplex& B);
ChainMap compose(const ChainMap& g, const ChainMap& f);
// matrix of the induced map H_i(src) -> H_i(tgt) in generator coordinates
WMat induced_map(const ChainMap& f, int i, const Subquotient& Hs, const Subquotient& Ht);

// cone(f)_n = A_{n-1} + B_n, d(a,b) = (-da, db + f a)
ChainComplex cone(const ChainMap& f);
// hofib(f)_n = A_n + B_{n+1}, same differential: hofib(f) = cone(f) shifted down by one
ChainComplex hofib(const ChainMap& f);
// C[k]_n = C_{n-k}, differential times (-1)^k
ChainComplex shift(const ChainComplex& C, int k);
// tau_{<=n} and tau_{>=n}
ChainComplex truncate_above(const ChainComplex& C, int n);
ChainComplex truncate_below(const ChainComplex& C, int n);
// (C x D)_n = sum C_i x D_{n-i}, d(x y) = dx y + (-1)^{|x|} x dy
ChainComplex tensor(const ChainComplex& C, const ChainComplex& D);
ChainMap tensor(const ChainMap& f, const ChainMap& g);
// the ring in degree 0
ChainComplex unit_complex(Ring S);
// restriction of scalars to W_n through the regular representation
ChainComplex restrict_to_Wn(const ChainComplex& C);
// entrywise augmentation: - tensor_S W_n
ChainComplex augment_to_Wn(const ChainComplex& C);
ChainMap augment_to_Wn(const ChainMap& f);

struct LesReport {
  bool ok = true;
  std::string where;
  int spots = 0;
};
// exactness of ... H_n(hofib f) -> H_n(A) -> H_n(B) -> H_{n-1}(hofib f) -> ...
LesReport check_hofib_les(const ChainMap& f);

// Koszul complex of a sequence in a commutative ring: K_i = wedge^i S^t
ChainComplex koszul_complex(Ring S, const std::vector<Vec>& elems);
// subsets of {0..t-1} of size i in lex order, the basis of K_i
std::vector<std::vector<int>> koszul_basis(int t, int i);

}  // namespace dtw

namespace dtw {

// W_n-complex with terms W_n^{r_i} / span(rel_i); the general homology engine
struct QuotientComplex {
  Wn R;
  int lo = 0, hi = -1;
  std::vector<int> ranks;
  std::vector<WMat> d;    // d[i - lo - 1]: term i -> term i-1
  std::vector<WMat> rel;  // rel[i - lo]: generators of the relation submodule, ranks[i-lo] rows
  int rank(int i) const { return (i < lo || i > hi) ? 0 : ranks[i - lo]; }
  WMat diff(int i) const;
  WMat relations(int i) const;
};

Subquotient homology_at(const QuotientComplex& C, int i);
QuotientComplex as_quotient_complex(const ChainComplex& C);

}  // namespace dtw
