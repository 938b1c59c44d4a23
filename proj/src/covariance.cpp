#include "cvdist/covariance.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <algorithm>

namespace cvdist {

CovMatrix::CovMatrix(int n_modes, Eigen::MatrixXd data)
    : n_modes_(n_modes), data_(std::move(data)) {
  if (n_modes_ < 1) throw std::invalid_argument("CovMatrix: n_modes must be >= 1");
  if (data_.rows() != 2 * n_modes_ || data_.cols() != 2 * n_modes_)
    throw std::invalid_argument("CovMatrix: data must be 2N x 2N");
  if ((data_ - data_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("CovMatrix: data must be symmetric");
  // exact symmetrization so downstream algebra sees V == V^T bit-for-bit
  data_ = ((data_ + data_.transpose()) / 2).eval();
}

Eigen::Matrix2d CovMatrix::mode_block(int mode) const {
  if (mode < 0 || mode >= n_modes_) throw std::invalid_argument("mode_block: bad mode index");
  return data_.block<2, 2>(2 * mode, 2 * mode);
}

double CovMatrix::physicality_margin() const {
  Eigen::MatrixXcd h = data_.cast<std::complex<double>>() +
                       std::complex<double>(0, 0.5) * symplectic_form(n_modes_).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

SymplecticTransform::SymplecticTransform(int n_modes, Eigen::MatrixXd data)
    : n_modes_(n_modes), data_(std::move(data)) {
  if (n_modes_ < 1) throw std::invalid_argument("SymplecticTransform: n_modes must be >= 1");
  if (data_.rows() != 2 * n_modes_ || data_.cols() != 2 * n_modes_)
    throw std::invalid_argument("SymplecticTransform: data must be 2N x 2N");
}

double SymplecticTransform::symplectic_defect() const {
  Eigen::MatrixXd omega = symplectic_form(n_modes_);
  return (data_ * omega * data_.transpose() - omega).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1;
    omega(2 * k + 1, 2 * k) = -1;
  }
  return omega;
}

CovMatrix vacuum(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("vacuum: n_modes must be >= 1");
  return CovMatrix(n_modes, 0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

CovMatrix symmetric_state(const StateFamilyParams& params) {
  const int n = params.n_modes;
  if (n < 2) throw std::invalid_argument("symmetric_state: N must be >= 2");
  if (!std::isfinite(params.r1) || !std::isfinite(params.r2))
    throw std::invalid_argument("symmetric_state: r1, r2 must be finite");
  const double r1 = params.r1, r2 = params.r2;
  const double a = (std::exp(2 * r1) + (n - 1) * std::exp(-2 * r2)) / (2 * n);
  const double b = (std::exp(-2 * r1) + (n - 1) * std::exp(2 * r2)) / (2 * n);
  const double c = (std::exp(2 * r1) - std::exp(-2 * r2)) / (2 * n);
  const double d = (std::exp(-2 * r1) - std::exp(2 * r2)) / (2 * n);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        v(2 * i, 2 * j) = a;
        v(2 * i + 1, 2 * j + 1) = b;
      } else {
        v(2 * i, 2 * j) = c;
        v(2 * i + 1, 2 * j + 1) = d;
      }
    }
  }
  return CovMatrix(n, std::move(v));
}

double unbiased_r1(double r2, int n_modes) {
  if (n_modes < 2) throw std::invalid_argument("unbiased_r1: N must be >= 2");
  if (!(r2 > 0)) throw std::invalid_argument("unbiased_r1: r2 must be > 0");
  const double x = (n_modes - 1) * std::sinh(2 * r2);
  // 1/2 ln x + 1/2 ln(sqrt(1 + x^-2) + 1) == asinh(x) / 2
  return 0.5 * std::log(x) + 0.5 * std::log(std::sqrt(1 + 1 / (x * x)) + 1);
}

SymplecticTransform squeezer(double s) {
  if (!std::isfinite(s)) throw std::invalid_argument("squeezer: s must be finite");
  Eigen::MatrixXd m(2, 2);
  m << std::exp(s), 0, 0, std::exp(-s);
  return SymplecticTransform(1, std::move(m));
}

SymplecticTransform squeezer_each(const std::vector<double>& s) {
  const int n = static_cast<int>(s.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(s[i])) throw std::invalid_argument("squeezer_each: s must be finite");
    m(2 * i, 2 * i) = std::exp(s[i]);
    m(2 * i + 1, 2 * i + 1) = std::exp(-s[i]);
  }
  return SymplecticTransform(n, std::move(m));
}

SymplecticTransform beamsplitter(double transmittance, int mode_i, int mode_j, int n_modes) {
  if (!(transmittance > 0) || transmittance > 1)
    throw std::invalid_argument("beamsplitter: transmittance must be in (0, 1]");
  if (mode_i == mode_j || mode_i < 0 || mode_j < 0 || mode_i >= n_modes || mode_j >= n_modes)
    throw std::invalid_argument("beamsplitter: bad mode indices");
  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1 - transmittance);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  m.block<2, 2>(2 * mode_i, 2 * mode_i) = t * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2 * mode_i, 2 * mode_j) = -r * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2 * mode_j, 2 * mode_i) = r * Eigen::Matrix2d::Identity();
  m.block<2, 2>(2 * mode_j, 2 * mode_j) = t * Eigen::Matrix2d::Identity();
  return SymplecticTransform(n_modes, std::move(m));
}

CovMatrix apply_symplectic(const CovMatrix& v, const SymplecticTransform& s) {
  if (v.n_modes() != s.n_modes())
    throw std::invalid_argument("apply_symplectic: dimension mismatch");
  return CovMatrix(v.n_modes(), s.data() * v.data() * s.data().transpose());
}

CovMatrix tensor_with_vacuum(const CovMatrix& v) {
  const int d = v.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d + 2, d + 2);
  m.topLeftCorner(d, d) = v.data();
  m.bottomRightCorner(2, 2) = 0.5 * Eigen::Matrix2d::Identity();
  return CovMatrix(v.n_modes() + 1, std::move(m));
}

double purity(const CovMatrix& v) {
  return 1.0 / (std::pow(2.0, v.n_modes()) * std::sqrt(v.data().determinant()));
}

std::vector<double> symplectic_eigenvalues(const CovMatrix& v) {
  const int n = v.n_modes();
  Eigen::MatrixXcd m = std::complex<double>(0, 1) *
                       (symplectic_form(n) * v.data()).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<double> abs_ev(2 * n);
  for (int i = 0; i < 2 * n; ++i) abs_ev[i] = std::abs(es.eigenvalues()(i));
  // eigenvalues come in +/- pairs; keep one of each
  std::sort(abs_ev.begin(), abs_ev.end());
  std::vector<double> nu(n);
  for (int i = 0; i < n; ++i) nu[i] = (abs_ev[2 * i] + abs_ev[2 * i + 1]) / 2;
  return nu;
}

}  // namespace cvdist
