// Finite local W_n-algebras with a fixed W_n-basis: group algebras W_n[Delta],
// monic quotients W_n[X_1..X_s]/(f_1(X_1),..,f_s(X_s)), and degree-truncated
// polynomial rings W_n[X_1..X_s]/m^{T+1}.
#pragma once

#include <memory>
#include <vector>

#include "dtw/wn.hpp"

namespace dtw {

struct RingSpec {
  i64 p = 2;
  int n = 1;
  std::vector<int> exponents;  // Delta = prod Z/p^{e_i}
};

enum class RingKind { Group, PolyQuotient, Truncated };

class Ring {
 public:
  Ring() = default;
  static Ring make(const RingSpec& spec);
  static Ring scalars(Wn W) { return make({W.p, W.n, {}}); }
  // f[i] holds the coefficients of a monic polynomial in X_i, constant term first
  static Ring poly_quotient(Wn W, const std::vector<Vec>& f);
  // the group-algebra relations (1+X_i)^{p^e_i} - 1
  static Ring poly_group_relations(Wn W, const std::vector<int>& exponents);
  static Ring truncated(Wn W, int nvars, int T);

  bool valid() const { return bool(d_); }
  const Wn& W() const { return d_->W; }
  RingKind kind() const { return d_->kind; }
  int dim() const { return d_->dim; }
  int nvars() const { return int(d_->radix.size()); }
  bool trivial() const { return d_->dim == 1; }
  // log_p of the element count, n * dim
  i64 log_count() const { return i64(d_->W.n) * d_->dim; }
  const std::vector<int>& exponents() const { return d_->exponents; }
  int trunc_degree() const { return d_->T; }
  const std::vector<int>& radix() const { return d_->radix; }

  Vec zero() const { return Vec(dim(), 0); }
  Vec one() const;
  Vec scalar(i64 c) const;
  // sigma_i for group algebras, X_i otherwise
  Vec var(int i) const;
  Vec basis(int k) const;
  std::vector<int> multi_index(int k) const { return d_->mono[k]; }
  int index_of(const std::vector<int>& alpha) const;  // -1 when outside the basis
  int degree(int k) const;                            // total degree of a monomial basis element

  Vec add(const Vec& a, const Vec& b) const;
  Vec sub(const Vec& a, const Vec& b) const;
  Vec neg(const Vec& a) const;
  Vec scale(i64 c, const Vec& a) const;
  Vec mul(const Vec& a, const Vec& b) const;
  Vec pow(const Vec& a, i64 e) const;
  bool is_zero(const Vec& a) const;

  // W_n-valued augmentation (group elements to 1, variables to 0)
  i64 augment_wn(const Vec& a) const;
  // residue in k
  i64 augment(const Vec& a) const { return augment_wn(a) % W().p; }
  bool is_unit(const Vec& a) const { return augment(a) != 0; }
  Vec inverse(const Vec& a) const;

  // dim x dim matrix of multiplication by a; column k is a * basis(k)
  WMat regular_rep(const Vec& a) const;

  bool operator==(const Ring& o) const;
  bool operator!=(const Ring& o) const { return !(*this == o); }

 private:
  struct Data {
    RingKind kind = RingKind::Group;
    Wn W;
    int dim = 1;
    std::vector<int> exponents;        // group case
    std::vector<int> radix;            // per-variable basis extent (group order / poly degree / T+1)
    std::vector<Vec> f;                // poly quotient moduli
    int T = 0;                         // truncated case
    std::vector<std::vector<int>> mono;
    std::vector<int> lookup;           // mixed-radix -> basis index
  };
  std::shared_ptr<const Data> d_;
  static void finish(Data& d);
};

// matrices with entries in a Ring, stored flat: entry (i,j) occupies dim residues
struct RMat {
  Ring S;
  int rows = 0, cols = 0;
  Vec a;

  RMat() = default;
  RMat(int r, int c, Ring ring) : S(ring), rows(r), cols(c), a(std::size_t(r) * c * ring.dim(), 0) {}
  static RMat identity(int n, Ring ring);

  Vec get(int i, int j) const;
  void set(int i, int j, const Vec& x);
  RMat operator*(const RMat& o) const;
  RMat operator+(const RMat& o) const;
  bool is_zero() const;
  bool operator==(const RMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  // W_n-matrix of the map S^cols -> S^rows in the stacked basis
  WMat expand() const;
  // entrywise augmentation, the base change to W_n
  WMat augmented() const;
  static RMat from_wmat(const WMat& M, Ring ring);
};

}  // namespace dtw

namespace dtw {

struct Elimination {
  int unit_rank = 0;
  RMat residual;                           // entries all in the maximal ideal
  std::vector<std::pair<int, int>> pivots;  // (row, col) in original indices, in pivot order
};

// pivots on unit entries (first in row-major order) until none remain
Elimination local_eliminate(const RMat& M);

// elementary divisor exponents of a W_n-matrix, length min(rows, cols); n marks a zero divisor
std::vector<int> diagonalize_Wn(const WMat& M);

}  // namespace dtw
