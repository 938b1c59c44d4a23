#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>

#include "cvdist/conditioning.hpp"
#include "cvdist/fock_bridge.hpp"
#include "cvdist/oracle.hpp"

using namespace cvdist;

namespace {

CovMatrix smsv_state(double r) {
  return CovMatrix(1, Eigen::Vector2d(std::exp(2 * r) / 2, std::exp(-2 * r) / 2).asDiagonal());
}

CovMatrix tmsv_state(double r) {
  const double c = std::cosh(2 * r) / 2, s = std::sinh(2 * r) / 2;
  Eigen::MatrixXd v(4, 4);
  v << c, 0, s, 0, 0, c, 0, -s, s, 0, c, 0, 0, -s, 0, c;
  return CovMatrix(2, v);
}

// random pure state: random symplectic rotation-squeeze-rotation per mode
// pair plus beamsplitter mixing, then optional thermal noise
CovMatrix random_physical_state(std::mt19937& rng, int n_modes) {
  std::uniform_real_distribution<double> sq(-0.4, 0.4);
  std::uniform_real_distribution<double> t(0.1, 0.9);
  std::uniform_real_distribution<double> th(0.0, 0.3);
  std::vector<double> s(n_modes);
  for (double& si : s) si = sq(rng);
  CovMatrix v = apply_symplectic(vacuum(n_modes), squeezer_each(s));
  for (int i = 0; i + 1 < n_modes; ++i)
    v = apply_symplectic(v, beamsplitter(t(rng), i, i + 1, n_modes));
  // add a little classical noise to leave the pure manifold
  Eigen::MatrixXd m = v.data() + th(rng) * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  return CovMatrix(n_modes, std::move(m));
}

}  // namespace

TEST_CASE("vacuum maps to |0..0><0..0| exactly") {
  const FockDensityMatrix rho = gaussian_to_fock(vacuum(2), 3);
  CHECK(rho.dim() == 9);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(9, 9);
  expect(0, 0) = 1;
  CHECK((rho.data - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(rho.presym_asymmetry < 1e-14);
}

TEST_CASE("kernel normalization is the vacuum overlap") {
  const CovMatrix v = smsv_state(0.25);
  const TransferKernel k = build_kernel(v);
  const double expect =
      1 / std::sqrt((v.data() + 0.5 * Eigen::MatrixXd::Identity(2, 2)).determinant());
  CHECK(k.norm == doctest::Approx(expect).epsilon(1e-14));
  // the kernel matrix is complex symmetric
  CHECK((k.r_matrix - k.r_matrix.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("squeezed vacuum matches its closed-form expansion") {
  for (double r : {0.1, 0.3, -0.2}) {
    const FockDensityMatrix rho = gaussian_to_fock(smsv_state(r), 9);
    CHECK((rho.data - oracle::analytic_smsv(r, 9).data).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("two-mode squeezed vacuum matches its closed-form expansion") {
  for (double r : {0.15, 0.3}) {
    const FockDensityMatrix rho = gaussian_to_fock(tmsv_state(r), 7);
    CHECK((rho.data - oracle::analytic_tmsv(r, 7).data).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("vacuum element equals 1/sqrt(det(V + I/2)) for random states") {
  std::mt19937 rng(20260826);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    const CovMatrix v = random_physical_state(rng, n);
    REQUIRE(v.is_physical());
    const FockDensityMatrix rho = gaussian_to_fock(v, 3);
    const double expect = 1 / std::sqrt((v.data() + 0.5 * Eigen::MatrixXd::Identity(2 * n, 2 * n))
                                            .determinant());
    CHECK(std::abs(rho.data(0, 0).real() - expect) < 1e-12);
    CHECK(std::abs(rho.data(0, 0).imag()) < 1e-12);
  }
}

TEST_CASE("images are Hermitian with nonnegative diagonal") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const CovMatrix v = random_physical_state(rng, 2);
    const FockDensityMatrix rho = gaussian_to_fock(v, 5);
    CHECK((rho.data - rho.data.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(rho.presym_asymmetry < 1e-10);
    CHECK(rho.data.diagonal().real().minCoeff() > -1e-12);
    CHECK(rho.trace_real() <= 1 + 1e-12);
  }
}

TEST_CASE("truncation deficit shrinks with the cutoff") {
  const CovMatrix v = smsv_state(0.3);
  const double d4 = truncation_deficit(gaussian_to_fock(v, 4));
  const double d8 = truncation_deficit(gaussian_to_fock(v, 8));
  CHECK(d4 > d8);
  CHECK(d8 >= 0);
  CHECK(d8 < 1e-3);
}

TEST_CASE("mixture image is the weighted sum of term images") {
  const DistillOutcome out = photon_subtract_one(tmsv_state(0.3), 1, 0.9);
  REQUIRE(out.state.terms.size() == 2);
  const FockDensityMatrix rho = mixture_to_fock(out.state, 6);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(36, 36);
  for (const auto& [w, cov] : out.state.terms) sum += w * gaussian_to_fock(cov, 6).data;
  sum = 0.5 * (sum + sum.adjoint().eval());
  CHECK((rho.data - sum).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(rho.trace_real() == doctest::Approx(1.0).epsilon(1e-3));  // up to truncation
}

TEST_CASE("flatten uses lexicographic order, first mode most significant") {
  FockDensityMatrix rho;
  rho.n_modes = 3;
  rho.cutoff = 4;
  const int k[3] = {2, 0, 3};
  CHECK(rho.flatten(k) == 2 * 16 + 0 * 4 + 3);
}

TEST_CASE("capacity cap rejects oversized requests") {
  setenv("CVDIST_CAPACITY_CAP", "100", 1);
  CHECK(fock_capacity_cap() == 100);
  CHECK_THROWS_AS(gaussian_to_fock(vacuum(2), 11), capacity_error);
  CHECK_NOTHROW(gaussian_to_fock(vacuum(2), 10));
  unsetenv("CVDIST_CAPACITY_CAP");
  CHECK(fock_capacity_cap() > 100);
}

TEST_CASE("invalid cutoffs are rejected") {
  CHECK_THROWS_AS(gaussian_to_fock(vacuum(1), 0), std::invalid_argument);
}
