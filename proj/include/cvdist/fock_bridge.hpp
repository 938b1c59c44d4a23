#pragma once

#include <complex>
#include <cstdint>
#include <Eigen/Dense>

#include "cvdist/conditioning.hpp"
#include "cvdist/covariance.hpp"
#include "cvdist/errors.hpp"

// Transfer of zero-mean Gaussian states from covariance-matrix form to the
// truncated Fock basis. Matrix elements are Taylor coefficients of
// exp[(t,t') R (t,t')^T / 2] / sqrt(det(V + I/2)), extracted by degree-capped
// polynomial exponentiation.
namespace cvdist {

// N-mode density matrix truncated at `cutoff` levels per mode. Row/column
// multi-indices (k1,...,kN) are flattened lexicographically, k1 most
// significant.
struct FockDensityMatrix {
  int n_modes = 0;
  int cutoff = 0;
  Eigen::MatrixXcd data;

  // max |rho - rho^dag| before the final symmetrization pass
  double presym_asymmetry = 0;

  int dim() const { return static_cast<int>(data.rows()); }
  double trace_real() const { return data.trace().real(); }

  // flat index of a multi-index given as pointer to n_modes digits
  int flatten(const int* k) const {
    int idx = 0;
    for (int i = 0; i < n_modes; ++i) idx = idx * cutoff + k[i];
    return idx;
  }
};

struct TransferKernel {
  int n_modes = 0;
  Eigen::MatrixXcd r_matrix;  // 2N x 2N, complex symmetric
  double norm = 0;            // 1/sqrt(det(V + I/2))
};

// Default cap on the Fock matrix dimension cutoff^N; override with the
// CVDIST_CAPACITY_CAP environment variable.
std::int64_t fock_capacity_cap();

TransferKernel build_kernel(const CovMatrix& v);

FockDensityMatrix gaussian_to_fock(const CovMatrix& v, int cutoff);

FockDensityMatrix mixture_to_fock(const SignedGaussianMixture& mix, int cutoff);

// 1 - trace(rho): probability weight lost to truncation.
double truncation_deficit(const FockDensityMatrix& rho);

}  // namespace cvdist
