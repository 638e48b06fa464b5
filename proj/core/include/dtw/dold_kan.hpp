// Truncated simplicial W_n-modules with free levels: normalized and Moore chains, the inverse
// Dold-Kan functor, reduced sphere modules and square-zero simplicial rings.
#pragma once

#include <string>
#include <vector>

#include "dtw/chain_complex.hpp"
#include "dtw/tor.hpp"

namespace dtw {

// monotone map [a] -> [b] as its list of values
using Monotone = std::vector<int>;

struct SimplicialModule {
  Wn W;
  int D = 0;                             // top level
  std::vector<int> rank;                 // levels 0..D
  std::vector<std::vector<WMat>> face;   // face[m][i]: X_m -> X_{m-1}, m = 1..D; face[0] is empty
  std::vector<std::vector<WMat>> degen;  // degen[m][j]: X_m -> X_{m+1}, m = 0..D-1

  // X(theta): X_b -> X_a for theta: [a] -> [b], through faces and degeneracies
  WMat op(const Monotone& theta, int b) const;
};

struct SimplicialCheck {
  bool ok = true;
  std::string what;
};
SimplicialCheck validate(const SimplicialModule& X);

SimplicialModule constant_module(Wn W, int r, int D);
SimplicialModule direct_sum(const SimplicialModule& X, const SimplicialModule& Y);
// reduced free module on Delta[n] / boundary: basis at level m = surjections [m] ->> [n]
SimplicialModule sphere_module(Wn W, int n, int D);
// the same object transported along levelwise isomorphisms phi_m (phi_inv[m] its inverse)
SimplicialModule transport(const SimplicialModule& X, const std::vector<WMat>& phi, const std::vector<WMat>& phi_inv);

struct SimplicialMap {
  std::vector<WMat> f;  // f[m]: X_m -> Y_m
};
bool is_simplicial(const SimplicialMap& f, const SimplicialModule& X, const SimplicialModule& Y);

// N_m = intersection of ker d_i, i >= 1, boundary d_0. basis[m] includes N_m into X_m, proj[m] is a left inverse.
// Throws on identity violations, and when some N_m is not a free summand.
struct Normalized {
  ChainComplex N;
  std::vector<WMat> basis, proj;
};
Normalized normalized_chains(const SimplicialModule& X);
// all faces, alternating sum
ChainComplex moore_complex(const SimplicialModule& X);

// summands of Gamma(C)_m: surjections [m] ->> [k] with their offsets
struct GammaSummand {
  Monotone sigma;
  int k = 0;
  int offset = 0;
};
std::vector<GammaSummand> gamma_layout(const ChainComplex& C, int m);
// Gamma(C) through level D; C must sit in degrees [0, D] over W_n
SimplicialModule dk_inverse(const ChainComplex& C, int D);
SimplicialMap dk_inverse_map(const ChainMap& g, int D);
ChainMap normalized_map(const SimplicialMap& f, const Normalized& NX, const Normalized& NY);

// N(Gamma C) = C: the nondegenerate summand is exactly N, with d_0 equal to the differential of C
SimplicialCheck check_n_gamma(const ChainComplex& C, int D);
// explicit map Gamma(N X) -> X, (sigma, c) -> X(sigma) c
struct GammaN {
  SimplicialModule GNX;
  SimplicialMap phi;
  bool simplicial = false;
  bool invertible = false;
};
GammaN gamma_n_iso(const SimplicialModule& X);

// W_n + V levelwise with (a, v)(a', v') = (a a', a v' + a' v); coordinate 0 of each level is the W_n part
struct SquareZeroRing {
  SimplicialModule V;
  SimplicialModule X;
  Vec mul(int m, const Vec& x, const Vec& y) const;
};
SquareZeroRing square_zero(const SimplicialModule& V);
// associativity, commutativity, unit, V V = 0 and multiplicativity of faces and degeneracies, on bases
SimplicialCheck check_ring_laws(const SquareZeroRing& R);
// pi_j for j <= maxdeg < D with the shuffle product
GradedAlgebra homotopy_ring(const SquareZeroRing& R, int maxdeg);

}  // namespace dtw
