#pragma once

#include <Eigen/Dense>
#include <vector>

// Zero-mean Gaussian states as covariance matrices in the vacuum = I/2
// convention, quadrature ordering (x1, p1, ..., xN, pN).
namespace cvdist {

class CovMatrix {
public:
  CovMatrix(int n_modes, Eigen::MatrixXd data);

  int n_modes() const { return n_modes_; }
  const Eigen::MatrixXd& data() const { return data_; }
  int dim() const { return 2 * n_modes_; }

  // 2x2 quadrature block of a single mode.
  Eigen::Matrix2d mode_block(int mode) const;

  // Minimum eigenvalue of the Hermitian matrix V + (i/2) Omega; a state is
  // physical iff this is >= 0 (up to numerical tolerance).
  double physicality_margin() const;
  bool is_physical(double tol = 1e-10) const { return physicality_margin() >= -tol; }

private:
  int n_modes_;
  Eigen::MatrixXd data_;
};

class SymplecticTransform {
public:
  SymplecticTransform(int n_modes, Eigen::MatrixXd data);

  int n_modes() const { return n_modes_; }
  const Eigen::MatrixXd& data() const { return data_; }

  // max |S Omega S^T - Omega|
  double symplectic_defect() const;

private:
  int n_modes_;
  Eigen::MatrixXd data_;
};

struct StateFamilyParams {
  int n_modes;  // N >= 2
  double r1;
  double r2;
};

// Block-diagonal symplectic form, diag blocks ((0,1),(-1,0)).
Eigen::MatrixXd symplectic_form(int n_modes);

CovMatrix vacuum(int n_modes);

// N-partite symmetric entangled family: diagonal 2x2 blocks diag(a,b),
// off-diagonal blocks diag(c,d).
CovMatrix symmetric_state(const StateFamilyParams& params);

// r1 that makes the symmetric family unbiased, r1 = asinh((N-1) sinh(2 r2)) / 2.
double unbiased_r1(double r2, int n_modes);

// Single-mode squeezer diag(e^s, e^-s).
SymplecticTransform squeezer(double s);

// Direct sum of per-mode squeezers.
SymplecticTransform squeezer_each(const std::vector<double>& s);

// Two-mode beamsplitter of transmittance T on modes (i, j) of an N-mode
// system: (sqrt(T) I, -sqrt(R) I; sqrt(R) I, sqrt(T) I), R = 1 - T.
SymplecticTransform beamsplitter(double transmittance, int mode_i, int mode_j, int n_modes);

CovMatrix apply_symplectic(const CovMatrix& v, const SymplecticTransform& s);

// Appends one vacuum mode as the last mode.
CovMatrix tensor_with_vacuum(const CovMatrix& v);

// 1 / (2^N sqrt(det V)); equals 1 iff pure.
double purity(const CovMatrix& v);

// Williamson spectrum: N values >= 1/2 for physical states, sorted ascending.
std::vector<double> symplectic_eigenvalues(const CovMatrix& v);

}  // namespace cvdist
