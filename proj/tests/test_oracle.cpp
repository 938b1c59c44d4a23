#include <doctest.h>

#include <cmath>

#include "cvdist/conditioning.hpp"
#include "cvdist/oracle.hpp"

using namespace cvdist;

namespace {

CovMatrix tmsv_state(double r) {
  const double c = std::cosh(2 * r) / 2, s = std::sinh(2 * r) / 2;
  Eigen::MatrixXd v(4, 4);
  v << c, 0, s, 0, 0, c, 0, -s, s, 0, c, 0, 0, -s, 0, c;
  return CovMatrix(2, v);
}

int total_photons(int idx, int cutoff) { return idx / cutoff + idx % cutoff; }

}  // namespace

TEST_CASE("beamsplitter Fock matrix is block diagonal in photon number") {
  const oracle::FockUnitary u = oracle::bs_fock_matrix(0.7, 5);
  for (int row = 0; row < 25; ++row)
    for (int col = 0; col < 25; ++col)
      if (total_photons(row, 5) != total_photons(col, 5)) CHECK(std::abs(u.data(row, col)) == 0.0);
}

TEST_CASE("beamsplitter Fock matrix is unitary on uncut photon-number blocks") {
  const int d = 6;
  const oracle::FockUnitary u = oracle::bs_fock_matrix(0.9, d);
  const Eigen::MatrixXcd gram = u.data.adjoint() * u.data;
  for (int row = 0; row < d * d; ++row) {
    if (total_photons(row, d) >= d) continue;  // block cut by the truncation
    for (int col = 0; col < d * d; ++col) {
      if (total_photons(col, d) >= d) continue;
      const double expect = row == col ? 1.0 : 0.0;
      CHECK(std::abs(gram(row, col) - expect) < 1e-12);
    }
  }
}

TEST_CASE("beamsplitter acts classically on one photon") {
  const double t = 0.81;
  const oracle::FockUnitary u = oracle::bs_fock_matrix(t, 3);
  // |1,0> -> sqrt(T)|1,0> + sqrt(R)|0,1> up to the sign convention
  const int i10 = 1 * 3 + 0, i01 = 0 * 3 + 1;
  CHECK(std::abs(u.data(i10, i10)) == doctest::Approx(std::sqrt(t)).epsilon(1e-12));
  CHECK(std::abs(u.data(i01, i10)) == doctest::Approx(std::sqrt(1 - t)).epsilon(1e-12));
  CHECK(std::abs(u.data(i01, i01)) == doctest::Approx(std::sqrt(t)).epsilon(1e-12));
}

TEST_CASE("analytic squeezed states are normalized to within truncation") {
  const FockDensityMatrix smsv = oracle::analytic_smsv(0.3, 14);
  CHECK(smsv.trace_real() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((smsv.data - smsv.data.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  const FockDensityMatrix tmsv = oracle::analytic_tmsv(0.3, 10);
  CHECK(tmsv.trace_real() == doctest::Approx(1.0).epsilon(1e-8));
  // odd-photon amplitudes of the squeezed vacuum vanish
  CHECK(std::abs(smsv.data(1, 1)) == 0.0);
  CHECK(std::abs(smsv.data(0, 1)) == 0.0);
  // TMSV populates only equal pairs
  CHECK(std::abs(tmsv.data(0 * 10 + 1, 0 * 10 + 1)) == 0.0);
  CHECK(std::abs(tmsv.data(1 * 10 + 1, 1 * 10 + 1)) > 0.0);
}

TEST_CASE("oracle subtraction on the vacuum never clicks") {
  const auto [p, rho] = oracle::oracle_photon_subtract(gaussian_to_fock(vacuum(2), 4), 0, 0.9);
  CHECK(p == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("oracle agrees with the phase-space pipeline on a TMSV") {
  const CovMatrix v = tmsv_state(0.3);
  const DistillOutcome out = photon_subtract_one(v, 1, 0.9);
  const auto [p_oracle, rho_oracle] =
      oracle::oracle_photon_subtract(gaussian_to_fock(v, 8), 1, 0.9);
  CHECK(std::abs(out.p_succ - p_oracle) < 1e-8);
  FockDensityMatrix rho = mixture_to_fock(out.state, 8);
  rho.data /= rho.trace_real();
  CHECK((rho.data - rho_oracle.data).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(rho_oracle.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interior difference ignores edge-of-truncation elements") {
  FockDensityMatrix a = gaussian_to_fock(vacuum(2), 4);
  FockDensityMatrix b = a;
  const int edge[2] = {3, 0};
  const int inner[2] = {1, 1};
  b.data(a.flatten(edge), a.flatten(edge)) += 0.5;
  CHECK(oracle::max_interior_difference(a, b, 3) == 0.0);
  CHECK(oracle::max_interior_difference(a, b, 4) == doctest::Approx(0.5));
  b.data(a.flatten(inner), a.flatten(inner)) += 0.125;
  CHECK(oracle::max_interior_difference(a, b, 3) == doctest::Approx(0.125));
}
