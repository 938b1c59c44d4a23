#include "cvdist/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cvdist {
namespace oracle {
namespace {

constexpr double kZeroOutcomeTol = 1e-14;

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1); }

double binomial(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace

FockUnitary bs_fock_matrix(double transmittance, int cutoff) {
  if (!(transmittance > 0) || transmittance > 1)
    throw std::invalid_argument("bs_fock_matrix: transmittance must be in (0, 1]");
  if (cutoff < 1) throw std::invalid_argument("bs_fock_matrix: cutoff must be >= 1");

  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1 - transmittance);
  FockUnitary u;
  u.cutoff = cutoff;
  u.data = Eigen::MatrixXcd::Zero(cutoff * cutoff, cutoff * cutoff);

  // U (a_A^dag)^k (a_B^dag)^l |00> expands through
  //   U a_A^dag U^dag = t a_A^dag - r a_B^dag,
  //   U a_B^dag U^dag = r a_A^dag + t a_B^dag.
  for (int k = 0; k < cutoff; ++k) {
    for (int l = 0; l < cutoff; ++l) {
      for (int i = 0; i <= k; ++i) {
        for (int j = 0; j <= l; ++j) {
          const int out_a = i + j;
          const int out_b = k + l - i - j;
          if (out_a >= cutoff || out_b >= cutoff) continue;
          const double amp = binomial(k, i) * std::pow(t, i) * std::pow(-r, k - i) *
                             binomial(l, j) * std::pow(r, j) * std::pow(t, l - j) *
                             std::sqrt(factorial(out_a) * factorial(out_b) /
                                       (factorial(k) * factorial(l)));
          u.data(out_a * cutoff + out_b, k * cutoff + l) += amp;
        }
      }
    }
  }
  return u;
}

std::pair<double, FockDensityMatrix> oracle_photon_subtract(const FockDensityMatrix& rho_in,
                                                            int mode, double transmittance) {
  const int n = rho_in.n_modes, d = rho_in.cutoff;
  if (mode < 0 || mode >= n) throw std::invalid_argument("oracle_photon_subtract: bad mode");
  const int dim = rho_in.dim();
  const int big = dim * d;  // ancilla appended as least significant index

  Eigen::MatrixXcd state = Eigen::MatrixXcd::Zero(big, big);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) state(r * d, c * d) = rho_in.data(r, c);

  const FockUnitary u = bs_fock_matrix(transmittance, d);
  const int stride_a = [&] {  // stride of the tapped mode's digit
    int s = d;                // ancilla contributes one factor of d
    for (int i = mode + 1; i < n; ++i) s *= d;
    return s;
  }();

  // rho -> U rho
  Eigen::MatrixXcd tmp = Eigen::MatrixXcd::Zero(big, big);
  for (int g = 0; g < big; ++g) {
    const int a_src = g / stride_a % d;
    const int x_src = g % d;
    for (int a_dst = 0; a_dst < d; ++a_dst) {
      for (int x_dst = 0; x_dst < d; ++x_dst) {
        const std::complex<double> amp = u.data(a_dst * d + x_dst, a_src * d + x_src);
        if (amp == 0.0) continue;
        tmp.row(g + (a_dst - a_src) * stride_a + (x_dst - x_src)) += amp * state.row(g);
      }
    }
  }
  // rho -> rho U^dag
  state.setZero();
  for (int g = 0; g < big; ++g) {
    const int a_src = g / stride_a % d;
    const int x_src = g % d;
    for (int a_dst = 0; a_dst < d; ++a_dst) {
      for (int x_dst = 0; x_dst < d; ++x_dst) {
        const std::complex<double> amp = u.data(a_dst * d + x_dst, a_src * d + x_src);
        if (amp == 0.0) continue;
        state.col(g + (a_dst - a_src) * stride_a + (x_dst - x_src)) +=
            std::conj(amp) * tmp.col(g);
      }
    }
  }

  // Tr_B[state (I x Pi_on)] = Tr_B[state] - <x=0 block>
  FockDensityMatrix out;
  out.n_modes = n;
  out.cutoff = d;
  out.data = Eigen::MatrixXcd::Zero(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      std::complex<double> sum = 0;
      for (int x = 1; x < d; ++x) sum += state(r * d + x, c * d + x);
      out.data(r, c) = sum;
    }

  const double p = out.data.trace().real();
  if (p < kZeroOutcomeTol) return {0.0, FockDensityMatrix{n, d, Eigen::MatrixXcd(), 0}};
  out.data /= p;
  return {p, std::move(out)};
}

FockDensityMatrix analytic_smsv(double r, int cutoff) {
  const double lambda = std::tanh(r);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(cutoff);
  for (int n = 0; 2 * n < cutoff; ++n)
    psi(2 * n) = std::pow(lambda, n) * std::sqrt(factorial(2 * n)) /
                 (std::pow(2.0, n) * factorial(n) * std::sqrt(std::cosh(r)));
  FockDensityMatrix rho;
  rho.n_modes = 1;
  rho.cutoff = cutoff;
  rho.data = psi * psi.adjoint();
  return rho;
}

FockDensityMatrix analytic_tmsv(double r, int cutoff) {
  const double lambda = std::tanh(r);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(cutoff * cutoff);
  for (int n = 0; n < cutoff; ++n)
    psi(n * cutoff + n) = std::sqrt(1 - lambda * lambda) * std::pow(lambda, n);
  FockDensityMatrix rho;
  rho.n_modes = 2;
  rho.cutoff = cutoff;
  rho.data = psi * psi.adjoint();
  return rho;
}

double max_interior_difference(const FockDensityMatrix& a, const FockDensityMatrix& b,
                               int interior_cutoff) {
  if (a.n_modes != b.n_modes || a.cutoff != b.cutoff || a.dim() != b.dim())
    throw std::invalid_argument("max_interior_difference: shape mismatch");
  const int n = a.n_modes, d = a.cutoff;
  auto interior = [&](int flat) {
    for (int i = 0; i < n; ++i) {
      if (flat % d >= interior_cutoff) return false;
      flat /= d;
    }
    return true;
  };
  double max_diff = 0;
  for (int r = 0; r < a.dim(); ++r) {
    if (!interior(r)) continue;
    for (int c = 0; c < a.dim(); ++c)
      if (interior(c)) max_diff = std::max(max_diff, std::abs(a.data(r, c) - b.data(r, c)));
  }
  return max_diff;
}

}  // namespace oracle
}  // namespace cvdist
