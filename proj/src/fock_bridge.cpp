#include "cvdist/fock_bridge.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace cvdist {
namespace {

constexpr std::int64_t kDefaultCapacityCap = 1000000;

struct QuadMonomial {
  int var_a;
  int var_b;
  std::complex<double> coef;
};

// Truncated expansion of exp(Q), Q = sum of quadratic monomials, as a dense
// multivariate polynomial with per-variable degree < cutoff. Variables are
// (t1..tN, t'1..tN); flat layout has variable 0 most significant.
std::vector<std::complex<double>> exp_of_quadratic(const std::vector<QuadMonomial>& q,
                                                   int n_vars, int cutoff) {
  std::int64_t size = 1;
  for (int i = 0; i < n_vars; ++i) size *= cutoff;

  std::vector<std::int64_t> stride(n_vars);
  stride[n_vars - 1] = 1;
  for (int i = n_vars - 2; i >= 0; --i) stride[i] = stride[i + 1] * cutoff;

  std::vector<std::complex<double>> result(size, 0.0), term(size, 0.0), next(size);
  result[0] = 1.0;
  term[0] = 1.0;

  const int max_order = n_vars * (cutoff - 1) / 2;  // total degree cap / 2
  for (int j = 1; j <= max_order; ++j) {
    std::fill(next.begin(), next.end(), std::complex<double>(0.0));
    for (const auto& mono : q) {
      const std::int64_t sa = stride[mono.var_a], sb = stride[mono.var_b];
      const std::complex<double> c = mono.coef;
      for (std::int64_t idx = 0; idx < size; ++idx) {
        const std::complex<double> v = term[idx];
        if (v == 0.0) continue;
        const int da = static_cast<int>(idx / sa % cutoff);
        const int db = static_cast<int>(idx / sb % cutoff);
        if (mono.var_a == mono.var_b) {
          if (da + 2 >= cutoff) continue;
        } else if (da + 1 >= cutoff || db + 1 >= cutoff) {
          continue;
        }
        next[idx + sa + sb] += c * v;
      }
    }
    double max_abs = 0;
    const double inv_j = 1.0 / j;
    for (std::int64_t idx = 0; idx < size; ++idx) {
      term[idx] = next[idx] * inv_j;
      result[idx] += term[idx];
      max_abs = std::max(max_abs, std::abs(term[idx]));
    }
    if (max_abs < 1e-300) break;
  }
  return result;
}

}  // namespace

std::int64_t fock_capacity_cap() {
  if (const char* env = std::getenv("CVDIST_CAPACITY_CAP")) {
    const std::int64_t cap = std::atoll(env);
    if (cap > 0) return cap;
  }
  return kDefaultCapacityCap;
}

TransferKernel build_kernel(const CovMatrix& v) {
  const int n = v.n_modes();
  const int d = 2 * n;
  using cd = std::complex<double>;
  const cd i_unit(0, 1);

  // P_{kl} = delta_{2k-1,l} for k <= N, delta_{2(k-N),l} for k > N (1-based):
  // reorders (x1,p1,...) into (x1..xN, p1..pN).
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 1; k <= d; ++k) {
    const int l = (k <= n) ? (2 * k - 1) : (2 * (k - n));
    p(k - 1, l - 1) = 1.0;
  }

  Eigen::Matrix2cd base;
  base << -i_unit / std::sqrt(2.0), cd(-1.0 / std::sqrt(2.0)),
      i_unit / std::sqrt(2.0), cd(-1.0 / std::sqrt(2.0));
  Eigen::MatrixXcd l_n = Eigen::MatrixXcd::Zero(d, d);
  l_n.topLeftCorner(n, n) = base(0, 0) * Eigen::MatrixXcd::Identity(n, n);
  l_n.topRightCorner(n, n) = base(0, 1) * Eigen::MatrixXcd::Identity(n, n);
  l_n.bottomLeftCorner(n, n) = base(1, 0) * Eigen::MatrixXcd::Identity(n, n);
  l_n.bottomRightCorner(n, n) = base(1, 1) * Eigen::MatrixXcd::Identity(n, n);
  l_n = (l_n * p).eval();

  Eigen::MatrixXcd sig_x = Eigen::MatrixXcd::Zero(d, d);
  sig_x.topRightCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);
  sig_x.bottomLeftCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd sig_z = Eigen::MatrixXcd::Identity(d, d);
  sig_z.bottomRightCorner(n, n) *= -1.0;

  Eigen::MatrixXd gamma = v.data() + 0.5 * Eigen::MatrixXd::Identity(d, d);

  TransferKernel kernel;
  kernel.n_modes = n;
  kernel.r_matrix = sig_x + sig_z * l_n.conjugate() *
                                gamma.cast<cd>().inverse() * l_n.adjoint() * sig_z;
  kernel.norm = 1.0 / std::sqrt(gamma.determinant());
  return kernel;
}

FockDensityMatrix gaussian_to_fock(const CovMatrix& v, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("gaussian_to_fock: cutoff must be >= 1");
  const int n = v.n_modes();
  std::int64_t dim = 1;
  for (int i = 0; i < n; ++i) {
    dim *= cutoff;
    if (dim > fock_capacity_cap())
      throw capacity_error("gaussian_to_fock: cutoff^N exceeds capacity cap");
  }

  const TransferKernel kernel = build_kernel(v);
  const int n_vars = 2 * n;

  std::vector<QuadMonomial> q;
  for (int a = 0; a < n_vars; ++a) {
    const std::complex<double> diag = 0.5 * kernel.r_matrix(a, a);
    if (diag != 0.0) q.push_back({a, a, diag});
    for (int b = a + 1; b < n_vars; ++b) {
      // R is symmetric: (a,b) and (b,a) combine
      const std::complex<double> c = kernel.r_matrix(a, b);
      if (c != 0.0) q.push_back({a, b, c});
    }
  }

  const auto coeffs = exp_of_quadratic(q, n_vars, cutoff);

  std::vector<double> sqrt_fact(cutoff);
  for (int i = 0; i < cutoff; ++i)
    sqrt_fact[i] = std::sqrt(std::tgamma(static_cast<double>(i) + 1));

  FockDensityMatrix rho;
  rho.n_modes = n;
  rho.cutoff = cutoff;
  rho.data.resize(dim, dim);

  // coefficient of t^k t'^m times sqrt(prod k! prod m!) times the norm scalar
  std::vector<int> digits(n_vars, 0);
  const std::int64_t size = static_cast<std::int64_t>(dim) * dim;
  for (std::int64_t flat = 0; flat < size; ++flat) {
    std::int64_t rem = flat;
    double f = kernel.norm;
    for (int i = n_vars - 1; i >= 0; --i) {
      digits[i] = static_cast<int>(rem % cutoff);
      rem /= cutoff;
      f *= sqrt_fact[digits[i]];
    }
    int row = 0, col = 0;
    for (int i = 0; i < n; ++i) {
      row = row * cutoff + digits[i];
      col = col * cutoff + digits[n + i];
    }
    rho.data(row, col) = coeffs[flat] * f;
  }

  rho.presym_asymmetry = (rho.data - rho.data.adjoint()).cwiseAbs().maxCoeff();
  rho.data = ((rho.data + rho.data.adjoint()) / 2).eval();
  return rho;
}

FockDensityMatrix mixture_to_fock(const SignedGaussianMixture& mix, int cutoff) {
  if (mix.terms.empty()) throw std::invalid_argument("mixture_to_fock: empty mixture");
  FockDensityMatrix rho;
  double asym = 0;
  bool first = true;
  for (const auto& [w, cov] : mix.terms) {
    FockDensityMatrix part = gaussian_to_fock(cov, cutoff);
    asym = std::max(asym, part.presym_asymmetry);
    if (first) {
      rho = std::move(part);
      rho.data *= w;
      first = false;
    } else {
      rho.data += w * part.data;
    }
  }
  rho.presym_asymmetry = std::max(asym, (rho.data - rho.data.adjoint()).cwiseAbs().maxCoeff());
  rho.data = ((rho.data + rho.data.adjoint()) / 2).eval();
  return rho;
}

double truncation_deficit(const FockDensityMatrix& rho) {
  return 1.0 - rho.trace_real();
}

}  // namespace cvdist
