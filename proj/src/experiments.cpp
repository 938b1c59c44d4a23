#include "cvdist/experiments.hpp"

#include <cmath>
#include <stdexcept>
#include <limits>
#include <thread>

#include "cvdist/fock_bridge.hpp"

namespace cvdist {
namespace {

constexpr double kGoldenTol = 1e-4;
constexpr int kCoarseSteps = 25;

CovMatrix initial_state(const PipelineConfig& cfg) {
  return symmetric_state({cfg.n_modes, cfg.resolved_r1(), cfg.r2});
}

// e_before depends only on the initial state, not on s; sweeps and the
// optimizer compute it once and reuse it across grid points.
PipelineResult run_pipeline_impl(const PipelineConfig& cfg,
                                 const double* cached_e_before) {
  cfg.validate();
  PipelineResult res;
  res.config = cfg;

  const CovMatrix v = initial_state(cfg);
  res.e_before = cached_e_before ? *cached_e_before
                                 : log_negativity(gaussian_to_fock(v, cfg.cutoff), cfg.cut);

  CovMatrix squeezed = apply_symplectic(v, squeezer_each(cfg.s));
  if (cfg.eta < 1) squeezed = loss_channel(squeezed, cfg.detected_mode, cfg.eta);

  const DistillOutcome outcome =
      photon_subtract_one(squeezed, cfg.detected_mode, cfg.transmittance);
  res.p_succ = outcome.p_succ;
  if (outcome.is_zero_outcome()) return res;  // nothing was subtracted

  const FockDensityMatrix rho = mixture_to_fock(outcome.state, cfg.cutoff);
  res.deficit = truncation_deficit(rho);
  res.e_after = log_negativity(rho, cfg.cut);
  return res;
}

}  // namespace

double PipelineConfig::resolved_r1() const {
  return r1 ? *r1 : unbiased_r1(r2, n_modes);
}

void PipelineConfig::validate() const {
  if (n_modes < 2) throw std::invalid_argument("PipelineConfig: N must be >= 2");
  if (static_cast<int>(s.size()) != n_modes)
    throw std::invalid_argument("PipelineConfig: need one s per mode");
  if (detected_mode < 0 || detected_mode >= n_modes)
    throw std::invalid_argument("PipelineConfig: bad detected mode");
  if (!(transmittance > 0) || !(transmittance < 1))
    throw std::invalid_argument("PipelineConfig: transmittance must be in (0, 1)");
  if (cutoff < 1) throw std::invalid_argument("PipelineConfig: cutoff must be >= 1");
  if (!(eta > 0) || eta > 1)
    throw std::invalid_argument("PipelineConfig: eta must be in (0, 1]");
}

PipelineConfig PipelineConfig::with_equal_s(double value) const {
  PipelineConfig out = *this;
  out.s.assign(n_modes, value);
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  return run_pipeline_impl(cfg, nullptr);
}

SweepResult sweep_s(const PipelineConfig& cfg, double s_min, double s_max, int steps,
                    int jobs) {
  if (!(s_min < s_max) || steps < 2)
    throw std::invalid_argument("sweep_s: need s_min < s_max and steps >= 2");
  SweepResult sweep;
  sweep.points.resize(steps);
  for (int i = 0; i < steps; ++i)
    sweep.points[i].s = s_min + (s_max - s_min) * i / (steps - 1);

  cfg.validate();
  const double e_before =
      log_negativity(gaussian_to_fock(initial_state(cfg), cfg.cutoff), cfg.cut);
  auto eval_point = [&cfg, e_before](SweepPoint& pt) {
    try {
      pt.result = run_pipeline_impl(cfg.with_equal_s(pt.s), &e_before);
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  };

  if (jobs <= 1) {
    for (auto& pt : sweep.points) eval_point(pt);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < steps; i += jobs) eval_point(sweep.points[i]);
      });
    for (auto& t : pool) t.join();
  }
  return sweep;
}

OptResult optimize_s(const PipelineConfig& cfg, double s_lo, double s_hi) {
  if (!(s_lo < s_hi)) throw std::invalid_argument("optimize_s: bad bracket");

  cfg.validate();
  const double e_before =
      log_negativity(gaussian_to_fock(initial_state(cfg), cfg.cutoff), cfg.cut);
  auto objective = [&cfg, &e_before](double s) {
    return run_pipeline_impl(cfg.with_equal_s(s), &e_before);
  };

  // coarse grid to bracket the interior maximum
  std::vector<double> grid(kCoarseSteps), val(kCoarseSteps);
  int best = 0;
  for (int i = 0; i < kCoarseSteps; ++i) {
    grid[i] = s_lo + (s_hi - s_lo) * i / (kCoarseSteps - 1);
    val[i] = objective(grid[i]).e_after;
    if (val[i] > val[best]) best = i;
  }

  OptResult out;
  if (best == 0 || best == kCoarseSteps - 1) {
    out.boundary = true;
    out.s_opt = grid[best];
  } else {
    // golden-section on [grid[best-1], grid[best+1]]
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double a = grid[best - 1], b = grid[best + 1];
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = objective(c).e_after, fd = objective(d).e_after;
    while (b - a > kGoldenTol) {
      if (fc > fd) {
        b = d; d = c; fd = fc;
        c = b - gr * (b - a);
        fc = objective(c).e_after;
      } else {
        a = c; c = d; fc = fd;
        d = a + gr * (b - a);
        fd = objective(d).e_after;
      }
    }
    out.s_opt = (a + b) / 2;
  }
  out.at_opt = objective(out.s_opt);
  out.e_opt = out.at_opt.e_after;
  out.p_at_opt = out.at_opt.p_succ;
  return out;
}

std::vector<ScalingRow> n_scaling_study(double r2, double transmittance,
                                        const std::vector<int>& n_list, int cutoff) {
  std::vector<ScalingRow> rows;
  for (int n : n_list) {
    ScalingRow row;
    row.n_modes = n;
    try {
      PipelineConfig cfg;
      cfg.n_modes = n;
      cfg.r2 = r2;
      cfg.transmittance = transmittance;
      cfg.cutoff = cutoff;
      cfg.s.assign(n, 0.0);
      cfg.cut = Bipartition::single_mode_vs_rest(0);
      const OptResult opt = optimize_s(cfg, 0.0, 4 * r2);
      row.s_opt = opt.s_opt;
      row.e_opt = opt.e_opt;
      row.p_succ = opt.p_at_opt;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BaselineRow> baseline_study(double r2, double transmittance, double eta,
                                        const std::vector<int>& n_list) {
  std::vector<BaselineRow> rows;
  for (int n : n_list) {
    // N = 1 degenerates to a single squeezed mode
    CovMatrix v = (n >= 2) ? symmetric_state({n, unbiased_r1(r2, n), r2})
                           : apply_symplectic(vacuum(1), squeezer(r2));
    std::vector<int> all_modes(n);
    for (int i = 0; i < n; ++i) all_modes[i] = i;

    BaselineRow row;
    row.n_modes = n;
    row.p_joint = photon_subtract_many(v, all_modes, transmittance, eta).p_succ;
    row.log10_p = row.p_joint > 0 ? std::log10(row.p_joint)
                                  : -std::numeric_limits<double>::infinity();
    row.p_one = photon_subtract_one(v, 0, transmittance, eta).p_succ;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cvdist
