#pragma once

#include <utility>
#include <vector>

#include "cvdist/covariance.hpp"

// On/off-detector photon subtraction: vacuum conditioning of Gaussian states
// via Schur complements, producing signed Gaussian mixtures.
namespace cvdist {

// (Gamma1, M; M^T, Delta) split of a covariance matrix with one detected mode
// moved last.
struct Partition {
  Eigen::MatrixXd gamma1;  // 2(N-1) x 2(N-1) kept block
  Eigen::MatrixXd m;       // 2(N-1) x 2 cross covariance
  Eigen::Matrix2d delta;   // detected-mode block
};

struct SignedGaussianMixture {
  int n_modes = 0;
  std::vector<std::pair<double, CovMatrix>> terms;  // (weight, covariance), weights sum to 1

  double weight_sum() const;
};

// Outcome of conditioning on a non-vacuum detector click. p_succ == 0 with an
// empty mixture marks the degenerate delta = 1 case (nothing to subtract).
struct DistillOutcome {
  double p_succ = 0;
  SignedGaussianMixture state;

  bool is_zero_outcome() const { return state.terms.empty(); }
};

Partition partition_mode(const CovMatrix& v, int detected_mode);

// Vacuum projection of the detected mode: p_vac = 1/sqrt(det(Delta + I/2)),
// conditioned covariance Gamma2 = Gamma1 - M (Delta + I/2)^-1 M^T.
std::pair<double, CovMatrix> condition_on_vacuum(const Partition& part);

// One photon subtraction: tap `mode` with a beamsplitter of transmittance T
// into a vacuum ancilla and herald on the ancilla being non-vacuum. The
// result is the two-term signed mixture with weights delta/(delta-1) and
// -1/(delta-1), delta = sqrt(det(Delta + I/2)), and p_succ = (delta-1)/delta.
// detector_efficiency < 1 inserts a loss channel on the ancilla arm before
// detection.
DistillOutcome photon_subtract_one(const CovMatrix& v, int mode, double transmittance,
                                   double detector_efficiency = 1.0);

// Simultaneous subtraction on several modes, all ancillas heralded
// non-vacuum via inclusion-exclusion over vacuum projections; the result has
// 2^k terms for k tapped modes.
DistillOutcome photon_subtract_many(const CovMatrix& v, const std::vector<int>& modes,
                                    double transmittance, double detector_efficiency = 1.0);

// Pure loss of transmissivity eta on one mode: V -> X V X^T + Y with
// X = sqrt(eta) on the mode's block and Y = ((1-eta)/2) I there.
CovMatrix loss_channel(const CovMatrix& v, int mode, double eta);

}  // namespace cvdist
