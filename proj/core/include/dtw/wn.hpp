// Residue arithmetic and dense matrices over W_n = Z/p^n.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtw {

using i64 = std::int64_t;
using Vec = std::vector<i64>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// budget overrun, surfaced separately so callers can map it to exit code 3
class BudgetError : public Error {
 public:
  using Error::Error;
};

bool is_prime(i64 p);
i64 ipow(i64 b, int e);

// Coefficient ring Z/p^n. The modulus is kept below 2^31 so products fit in i64.
struct Wn {
  i64 p = 2;
  int n = 1;
  i64 q = 2;

  Wn() = default;
  Wn(i64 p_, int n_);

  i64 red(i64 x) const {
    x %= q;
    return x < 0 ? x + q : x;
  }
  i64 add(i64 a, i64 b) const {
    i64 s = a + b;
    return s >= q ? s - q : s;
  }
  i64 sub(i64 a, i64 b) const {
    i64 s = a - b;
    return s < 0 ? s + q : s;
  }
  i64 mul(i64 a, i64 b) const { return (a * b) % q; }
  i64 neg(i64 a) const { return a == 0 ? 0 : q - a; }
  // p-adic valuation of a residue; n for zero
  int val(i64 a) const;
  // inverse of a unit residue
  i64 inv(i64 a) const;
  i64 pp(int e) const { return e >= n ? 0 : ipow(p, e); }
  bool operator==(const Wn& o) const { return p == o.p && n == o.n; }
  bool operator!=(const Wn& o) const { return !(*this == o); }
};

struct WMat {
  int rows = 0, cols = 0;
  Wn R;
  Vec a;

  WMat() = default;
  WMat(int r, int c, Wn ring) : rows(r), cols(c), R(ring), a(std::size_t(r) * c, 0) {}
  static WMat identity(int n, Wn ring);

  i64& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  i64 operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  WMat operator*(const WMat& o) const;
  WMat operator+(const WMat& o) const;
  WMat operator-(const WMat& o) const;
  Vec apply(const Vec& x) const;
  WMat transpose() const;
  WMat scaled(i64 c) const;
  bool is_zero() const;
  bool operator==(const WMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  Vec col(int j) const;
  void set_col(int j, const Vec& v);
  WMat cols_range(int c0, int c1) const;
  WMat rows_range(int r0, int r1) const;
  static WMat hcat(const WMat& l, const WMat& r);
  static WMat vcat(const WMat& t, const WMat& b);
  static WMat block_diag(const WMat& x, const WMat& y);
  static WMat from_cols(int rows, const std::vector<Vec>& cs, Wn ring);
  std::string str() const;
};

// reduce every entry of a matrix over a finer modulus into W_m (m <= n, same p)
WMat reduce_to(const WMat& M, Wn target);

}  // namespace dtw
