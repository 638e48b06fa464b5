// Smith normal form over Z/p^n and the kernel/cokernel data derived from it.
#pragma once

#include "dtw/wn.hpp"

namespace dtw {

enum SmithTrack : unsigned {
  kTrackNone = 0,
  kTrackP = 1,
  kTrackPinv = 2,
  kTrackQ = 4,
  kTrackQinv = 8,
};

// P * A * Q = diag(p^{vals[0]}, p^{vals[1]}, ...); vals nondecreasing, n marks a zero
struct Smith {
  Wn R;
  int rows = 0, cols = 0;
  std::vector<int> vals;  // length min(rows, cols)
  int rank = 0;           // count of vals < n
  WMat P, Pinv, Q, Qinv;  // filled only when tracked
};

Smith smith(const WMat& A, unsigned track = kTrackNone);

// cokernel of A: W_n^rows / im A as exponents e (W_n/p^e), zeros dropped, free parts as n
std::vector<int> cokernel_divisors(const WMat& A);
// log_p of |im A|
int image_log_order(const WMat& A);
// generators of ker A as columns
WMat kernel_gens(const WMat& A);
// solve A x = b; false when there is no solution
bool solve(const WMat& A, const Vec& b, Vec& x);

}  // namespace dtw
