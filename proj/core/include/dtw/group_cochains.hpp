// Inhomogeneous cochains of finite groups with coefficients in finite p-group modules:
// the cochain complex, cup products, restriction, conjugation, duals.
#pragma once

#include <string>
#include <vector>

#include "dtw/chain_complex.hpp"

namespace dtw {

struct FiniteGroup {
  int order = 1;
  std::vector<int> table;  // table[a * order + b] = a b
  int identity = 0;
  std::vector<int> inv;

  int mul(int a, int b) const { return table[std::size_t(a) * order + b]; }
  int inverse(int a) const { return inv[a]; }
  bool abelian() const;

  // validates associativity, identity and inverses
  static FiniteGroup from_table(const std::vector<std::vector<int>>& t);
  static FiniteGroup trivial() { return cyclic(1); }
  static FiniteGroup cyclic(int m);
  static FiniteGroup abelian_group(const std::vector<int>& invariants);  // product of cyclic groups
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);
  static FiniteGroup dihedral(int m);  // order 2m; elements r^i s^j at index i + m j
  static FiniteGroup quaternion();     // Q8
};

// group homomorphism given on all elements
bool is_homomorphism(const FiniteGroup& H, const FiniteGroup& G, const std::vector<int>& phi);
// inclusion of the subgroup generated by g
std::vector<int> cyclic_subgroup(const FiniteGroup& G, int g, FiniteGroup* H);

// sum of Z/p^{e_i} with a left action; act[g] acts on coordinate columns
struct GModule {
  Wn W;                   // n = max e_i
  std::vector<int> div;   // e_i in [1, n]
  std::vector<WMat> act;  // one matrix per group element

  int rank() const { return int(div.size()); }
  int log_order() const;
  bool uniform() const;  // all e_i = n
  i64 modulus(int i) const { return div[i] >= W.n ? W.q : W.pp(div[i]); }
  Vec reduce(const Vec& x) const;
  // throws when the action is not a well-defined homomorphism into Aut(M)
  void validate(const FiniteGroup& G) const;

  static GModule trivial(const FiniteGroup& G, i64 p, const std::vector<int>& div);
  // action given on generators, extended along the multiplication table
  static GModule from_generators(const FiniteGroup& G, i64 p, const std::vector<int>& div,
                                 const std::vector<std::pair<int, WMat>>& gens);
};

GModule restrict_module(const GModule& M, const FiniteGroup& H, const std::vector<int>& phi);

// bilinear M1 x M2 -> M3; B[(k * r1 + i) * r2 + j] is the coefficient of e_k in e_i . e_j
struct CupPairing {
  int r1 = 0, r2 = 0, r3 = 0;
  std::vector<i64> B;
  i64 at(int k, int i, int j) const { return B[(std::size_t(k) * r1 + i) * r2 + j]; }
};

// multiplication of a rank-one module W_n with itself
CupPairing ring_pairing(const GModule& M);

// Hom(M, mu) with mu = Z/p^n carrying the character chi (trivial when empty) and the evaluation pairing
struct DualData {
  GModule dual;
  GModule mu;
  CupPairing eval;  // M x M* -> mu
};
DualData dualize(const FiniteGroup& G, const GModule& M, const std::vector<i64>& chi = {});

// cohomologically graded W_n-complex with relations: term k is W_n^{dims[k]} / span(rel[k]), k = 0..top
struct CoComplex {
  Wn W;
  int top = 0;
  std::vector<int> dims;
  std::vector<WMat> d;    // d[k]: term k -> term k+1, k < top
  std::vector<WMat> rel;  // rel[k]: generators of the relation submodule of term k

  QuotientComplex as_quotient() const;  // degree -k holds term k
  // H^k; at k = top this is the window cokernel term_top / d term_{top-1}
  Subquotient cohomology(int k) const;
  // x in span(cols) + relations
  bool in_span(int k, const WMat& cols, const Vec& x) const;
  bool is_zero(int k, const Vec& x) const { return in_span(k, WMat(dims[k], 0, W), x); }
  bool is_cocycle(int k, const Vec& x) const;
  // x = d y + relations for some y
  bool is_coboundary(int k, const Vec& x, Vec* y = nullptr) const;
};

// C^k(G, M) = Maps(G^k, M) for k = 0..top; stored as W_n^{dim} modulo the module relations
struct Cochains : CoComplex {
  FiniteGroup G;
  GModule M;

  int tuples(int k) const { return dims[k] / M.rank(); }
  Vec reduce(int k, const Vec& x) const;
  bool is_cocycle(int k, const Vec& x) const;
  // cochain flat index of (g_1..g_k), module coordinate c
  std::size_t index(const std::vector<int>& g, int c) const;
};

// default budget caps |G|^top * rank
Cochains cochain_complex(const FiniteGroup& G, const GModule& M, int top, i64 budget = 10000000);

// (a u b)(g_1..g_{p+q}) = a(g_1..g_p) . (g_1...g_p) b(g_{p+1}..g_{p+q})
Vec cup(const FiniteGroup& G, const GModule& M1, const GModule& M2, const GModule& M3, const CupPairing& P, int pa,
        const Vec& a, int pb, const Vec& b);
// pullback along phi: H -> G; result lives in C^k(H, restrict_module(M, phi))
WMat restriction_matrix(const FiniteGroup& G, const FiniteGroup& H, const std::vector<int>& phi, const GModule& M, int k);
Vec restrict_cochain(const FiniteGroup& G, const FiniteGroup& H, const std::vector<int>& phi, const GModule& M, int k,
                     const Vec& c);
// (g f)(g_1..g_k) = g f(g^-1 g_1 g, ..., g^-1 g_k g)
Vec conjugate(const FiniteGroup& G, const GModule& M, int g, int k, const Vec& c);

// matrix of the map Hs -> Ht induced by f on representatives
WMat induced_on(const WMat& f, const Subquotient& Hs, const Subquotient& Ht);

}  // namespace dtw
