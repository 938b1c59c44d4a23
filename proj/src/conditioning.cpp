#include "cvdist/conditioning.hpp"

#include <cmath>
#include <stdexcept>

namespace cvdist {
namespace {

constexpr double kZeroOutcomeTol = 1e-14;

// Rows/columns of V restricted to the given modes, in the given order.
Eigen::MatrixXd select_modes(const Eigen::MatrixXd& v, const std::vector<int>& modes) {
  const int k = static_cast<int>(modes.size());
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      out.block<2, 2>(2 * i, 2 * j) = v.block<2, 2>(2 * modes[i], 2 * modes[j]);
  return out;
}

Eigen::MatrixXd cross_block(const Eigen::MatrixXd& v, const std::vector<int>& rows,
                            const std::vector<int>& cols) {
  Eigen::MatrixXd out(2 * rows.size(), 2 * cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      out.block<2, 2>(2 * i, 2 * j) = v.block<2, 2>(2 * rows[i], 2 * cols[j]);
  return out;
}

// Vacuum projection of `proj` modes: returns the projection probability and
// the conditioned covariance of the `kept` modes.
std::pair<double, Eigen::MatrixXd> project_vacuum(const Eigen::MatrixXd& v,
                                                  const std::vector<int>& kept,
                                                  const std::vector<int>& proj) {
  Eigen::MatrixXd a = select_modes(v, kept);
  if (proj.empty()) return {1.0, a};
  Eigen::MatrixXd d = select_modes(v, proj);
  Eigen::MatrixXd m = cross_block(v, kept, proj);
  Eigen::MatrixXd dd = d + 0.5 * Eigen::MatrixXd::Identity(d.rows(), d.cols());
  const double p = 1.0 / std::sqrt(dd.determinant());
  Eigen::MatrixXd cond = a - m * dd.inverse() * m.transpose();
  return {p, cond};
}

}  // namespace

double SignedGaussianMixture::weight_sum() const {
  double s = 0;
  for (const auto& [w, cov] : terms) s += w;
  return s;
}

Partition partition_mode(const CovMatrix& v, int detected_mode) {
  const int n = v.n_modes();
  if (detected_mode < 0 || detected_mode >= n)
    throw std::invalid_argument("partition_mode: bad mode index");
  std::vector<int> kept;
  for (int i = 0; i < n; ++i)
    if (i != detected_mode) kept.push_back(i);
  Partition part;
  part.gamma1 = select_modes(v.data(), kept);
  part.m = cross_block(v.data(), kept, {detected_mode});
  part.delta = select_modes(v.data(), {detected_mode});
  return part;
}

std::pair<double, CovMatrix> condition_on_vacuum(const Partition& part) {
  Eigen::Matrix2d dd = part.delta + 0.5 * Eigen::Matrix2d::Identity();
  const double p_vac = 1.0 / std::sqrt(dd.determinant());
  Eigen::MatrixXd gamma2 = part.gamma1 - part.m * dd.inverse() * part.m.transpose();
  const int kept_modes = static_cast<int>(gamma2.rows()) / 2;
  return {p_vac, CovMatrix(kept_modes, std::move(gamma2))};
}

DistillOutcome photon_subtract_one(const CovMatrix& v, int mode, double transmittance,
                                   double detector_efficiency) {
  return photon_subtract_many(v, {mode}, transmittance, detector_efficiency);
}

DistillOutcome photon_subtract_many(const CovMatrix& v, const std::vector<int>& modes,
                                    double transmittance, double detector_efficiency) {
  const int n = v.n_modes();
  const int k = static_cast<int>(modes.size());
  if (k == 0) throw std::invalid_argument("photon_subtract_many: no modes");
  if (!(transmittance > 0) || !(transmittance < 1))
    throw std::invalid_argument("photon_subtract_many: transmittance must be in (0, 1)");
  for (int i = 0; i < k; ++i) {
    if (modes[i] < 0 || modes[i] >= n)
      throw std::invalid_argument("photon_subtract_many: bad mode index");
    for (int j = i + 1; j < k; ++j)
      if (modes[i] == modes[j])
        throw std::invalid_argument("photon_subtract_many: duplicate mode");
  }

  // Tap each listed mode into its own vacuum ancilla (ancilla i is mode n+i).
  CovMatrix big = v;
  for (int i = 0; i < k; ++i) big = tensor_with_vacuum(big);
  for (int i = 0; i < k; ++i)
    big = apply_symplectic(big, beamsplitter(transmittance, modes[i], n + i, n + k));
  if (detector_efficiency < 1)
    for (int i = 0; i < k; ++i) big = loss_channel(big, n + i, detector_efficiency);

  std::vector<int> signal(n);
  for (int i = 0; i < n; ++i) signal[i] = i;

  // All detectors click: Pi = prod_i (I - |0><0|), expanded by
  // inclusion-exclusion over the subsets projected onto vacuum.
  DistillOutcome out;
  out.state.n_modes = n;
  double p_succ = 0;
  std::vector<std::pair<double, Eigen::MatrixXd>> raw;
  for (unsigned subset = 0; subset < (1u << k); ++subset) {
    std::vector<int> proj;
    for (int i = 0; i < k; ++i)
      if (subset & (1u << i)) proj.push_back(n + i);
    auto [p, cond] = project_vacuum(big.data(), signal, proj);
    const double sign = (proj.size() % 2 == 0) ? 1.0 : -1.0;
    p_succ += sign * p;
    raw.emplace_back(sign * p, std::move(cond));
  }

  if (p_succ < kZeroOutcomeTol) return out;  // zero-probability outcome
  out.p_succ = p_succ;
  for (auto& [w, cov] : raw)
    out.state.terms.emplace_back(w / p_succ, CovMatrix(n, std::move(cov)));
  return out;
}

CovMatrix loss_channel(const CovMatrix& v, int mode, double eta) {
  if (!(eta > 0) || eta > 1) throw std::invalid_argument("loss_channel: eta must be in (0, 1]");
  if (mode < 0 || mode >= v.n_modes()) throw std::invalid_argument("loss_channel: bad mode index");
  Eigen::MatrixXd m = v.data();
  const double sq = std::sqrt(eta);
  m.middleRows<2>(2 * mode) *= sq;
  m.middleCols<2>(2 * mode) *= sq;
  m.block<2, 2>(2 * mode, 2 * mode) += (1 - eta) / 2 * Eigen::Matrix2d::Identity();
  return CovMatrix(v.n_modes(), std::move(m));
}

}  // namespace cvdist
