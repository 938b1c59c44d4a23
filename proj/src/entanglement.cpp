#include "cvdist/entanglement.hpp"

#include <cmath>
#include <stdexcept>

namespace cvdist {
namespace {

void check_cut(const Bipartition& cut, int n_modes) {
  if (cut.side_a.empty() || static_cast<int>(cut.side_a.size()) >= n_modes)
    throw std::invalid_argument("Bipartition: side A must be a non-empty strict subset");
  std::vector<bool> seen(n_modes, false);
  for (int m : cut.side_a) {
    if (m < 0 || m >= n_modes || seen[m])
      throw std::invalid_argument("Bipartition: bad or repeated mode index");
    seen[m] = true;
  }
}

}  // namespace

FockDensityMatrix partial_transpose(const FockDensityMatrix& rho, const Bipartition& cut) {
  check_cut(cut, rho.n_modes);
  const int n = rho.n_modes, d = rho.cutoff;
  std::vector<bool> in_a(n, false);
  for (int m : cut.side_a) in_a[m] = true;

  FockDensityMatrix out;
  out.n_modes = n;
  out.cutoff = d;
  out.data.resize(rho.dim(), rho.dim());

  std::vector<int> k(n), m(n), kk(n), mm(n);
  for (int row = 0; row < rho.dim(); ++row) {
    int rem = row;
    for (int i = n - 1; i >= 0; --i) { k[i] = rem % d; rem /= d; }
    for (int col = 0; col < rho.dim(); ++col) {
      rem = col;
      for (int i = n - 1; i >= 0; --i) { m[i] = rem % d; rem /= d; }
      for (int i = 0; i < n; ++i) {
        kk[i] = in_a[i] ? m[i] : k[i];
        mm[i] = in_a[i] ? k[i] : m[i];
      }
      out.data(out.flatten(kk.data()), out.flatten(mm.data())) = rho.data(row, col);
    }
  }
  return out;
}

double log_negativity(const FockDensityMatrix& rho, const Bipartition& cut) {
  const double tr = rho.trace_real();
  if (!(tr > 0) || tr > 1 + 1e-10)
    throw std::invalid_argument("log_negativity: trace must be in (0, 1]");
  if ((rho.data - rho.data.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("log_negativity: input is not Hermitian");

  FockDensityMatrix norm = rho;
  norm.data /= tr;  // truncation-deficit correction
  FockDensityMatrix pt = partial_transpose(norm, cut);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      (pt.data + pt.data.adjoint()) / 2, Eigen::EigenvaluesOnly);
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  return std::log2(trace_norm);
}

double gaussian_log_negativity(const CovMatrix& v, const Bipartition& cut) {
  check_cut(cut, v.n_modes());
  Eigen::MatrixXd m = v.data();
  for (int mode : cut.side_a) {
    m.row(2 * mode + 1) *= -1;
    m.col(2 * mode + 1) *= -1;
  }
  double sum = 0;
  for (double nu : symplectic_eigenvalues(CovMatrix(v.n_modes(), std::move(m))))
    sum += std::max(0.0, -std::log2(2 * nu));
  return sum;
}

}  // namespace cvdist
