#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cvdist/conditioning.hpp"

using namespace cvdist;

namespace {

CovMatrix squeezed_triple() {
  const CovMatrix v = symmetric_state({3, unbiased_r1(0.05, 3), 0.05});
  return apply_symplectic(v, squeezer_each({0.07, 0.07, 0.07}));
}

}  // namespace

TEST_CASE("partition_mode splits and reassembles the covariance") {
  const CovMatrix v = squeezed_triple();
  const Partition part = partition_mode(v, 1);
  CHECK(part.gamma1.rows() == 4);
  CHECK(part.m.rows() == 4);
  CHECK(part.m.cols() == 2);
  CHECK((part.delta - v.mode_block(1)).cwiseAbs().maxCoeff() == 0.0);
  // gamma1 keeps modes 0 and 2 in order
  CHECK((part.gamma1.block(0, 0, 2, 2) - v.mode_block(0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((part.gamma1.block(2, 2, 2, 2) - v.mode_block(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((part.m.block(0, 0, 2, 2) - v.data().block(0, 2, 2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(partition_mode(v, 3), std::invalid_argument);
}

TEST_CASE("vacuum conditioning of a product state is trivial") {
  const auto [p_vac, kept] = condition_on_vacuum(partition_mode(vacuum(3), 2));
  CHECK(p_vac == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((kept.data() - 0.5 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("subtracting from the vacuum is the zero outcome") {
  const DistillOutcome out = photon_subtract_one(vacuum(2), 0, 0.9);
  CHECK(out.p_succ == 0.0);
  CHECK(out.is_zero_outcome());
}

TEST_CASE("photon subtraction yields the two-term signed mixture") {
  const CovMatrix v = squeezed_triple();
  const DistillOutcome out = photon_subtract_one(v, 0, 0.9);
  REQUIRE(out.state.terms.size() == 2);
  CHECK(out.state.n_modes == 3);
  CHECK(out.state.weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.state.terms[0].first > 0);
  CHECK(out.state.terms[1].first < 0);

  // p_vac + p_succ = 1 and the weights are delta/(delta-1), -1/(delta-1)
  const CovMatrix big = apply_symplectic(tensor_with_vacuum(v), beamsplitter(0.9, 0, 3, 4));
  const Partition part = partition_mode(big, 3);
  const double delta =
      std::sqrt((part.delta + 0.5 * Eigen::Matrix2d::Identity()).determinant());
  CHECK(out.p_succ == doctest::Approx((delta - 1) / delta).epsilon(1e-12));
  CHECK(1.0 / delta + out.p_succ == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.state.terms[0].first == doctest::Approx(delta / (delta - 1)).epsilon(1e-12));
  CHECK(out.state.terms[1].first == doctest::Approx(-1 / (delta - 1)).epsilon(1e-12));
  for (const auto& [w, cov] : out.state.terms) CHECK(cov.is_physical());
}

TEST_CASE("subtraction probability is invariant under the detected mode") {
  const CovMatrix v = squeezed_triple();
  const double p0 = photon_subtract_one(v, 0, 0.9).p_succ;
  for (int mode : {1, 2})
    CHECK(photon_subtract_one(v, mode, 0.9).p_succ == doctest::Approx(p0).epsilon(1e-12));
}

TEST_CASE("degenerate transmittances are rejected") {
  CHECK_THROWS_AS(photon_subtract_one(squeezed_triple(), 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(photon_subtract_one(squeezed_triple(), 0, 0.0), std::invalid_argument);
}

TEST_CASE("photon_subtract_many on one mode matches photon_subtract_one") {
  const CovMatrix v = squeezed_triple();
  const DistillOutcome one = photon_subtract_one(v, 1, 0.9);
  const DistillOutcome many = photon_subtract_many(v, {1}, 0.9);
  CHECK(many.p_succ == doctest::Approx(one.p_succ).epsilon(1e-12));
  REQUIRE(many.state.terms.size() == one.state.terms.size());
  for (size_t i = 0; i < one.state.terms.size(); ++i) {
    CHECK(many.state.terms[i].first == doctest::Approx(one.state.terms[i].first).epsilon(1e-12));
    CHECK((many.state.terms[i].second.data() - one.state.terms[i].second.data())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("joint subtraction on all modes has 2^k terms and tiny probability") {
  const CovMatrix v = squeezed_triple();
  const DistillOutcome out = photon_subtract_many(v, {0, 1, 2}, 0.9);
  CHECK(out.state.terms.size() == 8);
  // the 8 signed weights are ~1e10 in magnitude, so cancellation leaves ~1e-6
  CHECK(out.state.weight_sum() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(out.p_succ > 0);
  CHECK(out.p_succ < photon_subtract_one(v, 0, 0.9).p_succ);
  CHECK_THROWS_AS(photon_subtract_many(v, {0, 0}, 0.9), std::invalid_argument);
}

TEST_CASE("detector loss reduces the success probability") {
  const CovMatrix v = squeezed_triple();
  const double p_ideal = photon_subtract_one(v, 0, 0.9).p_succ;
  const double p_lossy = photon_subtract_one(v, 0, 0.9, 0.1).p_succ;
  CHECK(p_lossy > 0);
  CHECK(p_lossy < p_ideal);
}

TEST_CASE("loss channel interpolates between identity and vacuum") {
  const CovMatrix v = squeezed_triple();
  CHECK((loss_channel(v, 1, 1.0).data() - v.data()).cwiseAbs().maxCoeff() < 1e-14);
  const CovMatrix dark = loss_channel(v, 1, 1e-12);
  CHECK((dark.mode_block(1) - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(dark.data().block(0, 2, 2, 2).cwiseAbs().maxCoeff() < 1e-6);
  for (double eta : {0.1, 0.5, 0.9}) CHECK(loss_channel(v, 0, eta).is_physical());
  CHECK_THROWS_AS(loss_channel(v, 0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(loss_channel(v, 0, 0.0), std::invalid_argument);
}
