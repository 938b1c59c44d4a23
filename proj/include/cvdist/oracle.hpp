#pragma once

#include <utility>

#include "cvdist/fock_bridge.hpp"

// Validation-only brute-force Fock-space simulator. Deliberately shares no
// code path with the phase-space pipeline beyond the FockDensityMatrix
// container.
namespace cvdist {
namespace oracle {

// Two-mode beamsplitter unitary exp[arccos(sqrt(T)) (a_A^dag a_B - a_A a_B^dag)]
// in the truncated Fock basis, row/column index = m1 * cutoff + m2. Exactly
// block-diagonal in the total photon number; blocks with m1 + m2 < cutoff are
// exactly unitary.
struct FockUnitary {
  int cutoff = 0;
  Eigen::MatrixXcd data;
};

FockUnitary bs_fock_matrix(double transmittance, int cutoff);

// Literal evaluation of the heralded subtraction map: tensor with ancilla
// vacuum, conjugate by the beamsplitter, keep the non-vacuum ancilla sector,
// trace the ancilla, normalize.
std::pair<double, FockDensityMatrix> oracle_photon_subtract(const FockDensityMatrix& rho_in,
                                                            int mode, double transmittance);

// Closed-form squeezed-vacuum and two-mode-squeezed-vacuum density matrices.
FockDensityMatrix analytic_smsv(double r, int cutoff);
FockDensityMatrix analytic_tmsv(double r, int cutoff);

// max |a - b| over elements whose mode occupations are all < interior_cutoff.
// Heralded states are nearly pure, so their coherences at the top occupation
// levels are sizable yet structurally invisible to the truncated-basis
// unitary; oracle comparisons are made on the interior block.
double max_interior_difference(const FockDensityMatrix& a, const FockDensityMatrix& b,
                               int interior_cutoff);

}  // namespace oracle
}  // namespace cvdist
