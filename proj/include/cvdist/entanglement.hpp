#pragma once

#include <vector>

#include "cvdist/covariance.hpp"
#include "cvdist/fock_bridge.hpp"

// Logarithmic negativity (base 2) of truncated Fock states, plus the Gaussian
// symplectic shortcut used for cross-checks.
namespace cvdist {

struct Bipartition {
  std::vector<int> side_a;  // mode indices; side B is the complement

  static Bipartition single_mode_vs_rest(int mode) { return Bipartition{{mode}}; }
};

// Transpose the side-A modes: their bra and ket indices are swapped.
FockDensityMatrix partial_transpose(const FockDensityMatrix& rho, const Bipartition& cut);

// log2 of the trace norm of the partial transpose of rho / trace(rho).
double log_negativity(const FockDensityMatrix& rho, const Bipartition& cut);

// Gaussian shortcut: flip the p quadratures of side A, then
// sum_j max(0, -log2(2 nu_j)) over the symplectic eigenvalues.
double gaussian_log_negativity(const CovMatrix& v, const Bipartition& cut);

}  // namespace cvdist
