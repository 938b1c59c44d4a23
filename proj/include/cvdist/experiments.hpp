#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvdist/conditioning.hpp"
#include "cvdist/covariance.hpp"
#include "cvdist/entanglement.hpp"

// End-to-end distillation pipeline: squeeze, subtract one photon, measure
// log-negativity before/after; sweeps and deterministic 1-D optimization.
namespace cvdist {

struct PipelineConfig {
  int n_modes = 3;
  double r2 = 0.05;
  std::optional<double> r1;  // nullopt: use unbiased_r1(r2, N)
  std::vector<double> s;     // per-mode local squeezing
  double transmittance = 0.9;
  int detected_mode = 0;
  int cutoff = 7;
  Bipartition cut = Bipartition::single_mode_vs_rest(0);
  double eta = 1.0;  // detector efficiency; 1 = ideal

  double resolved_r1() const;
  void validate() const;
  PipelineConfig with_equal_s(double value) const;
};

struct PipelineResult {
  double e_before = 0;
  double e_after = 0;
  double p_succ = 0;
  double deficit = 0;
  PipelineConfig config;
};

struct SweepPoint {
  double s = 0;
  bool ok = false;
  std::string error;
  PipelineResult result;
};

struct SweepResult {
  std::vector<SweepPoint> points;
};

struct OptResult {
  double s_opt = 0;
  double e_opt = 0;
  double p_at_opt = 0;
  bool boundary = false;  // no interior maximum found in the bracket
  PipelineResult at_opt;
};

struct ScalingRow {
  int n_modes = 0;
  bool ok = false;
  std::string error;
  double s_opt = 0;
  double e_opt = 0;
  double p_succ = 0;
};

struct BaselineRow {
  int n_modes = 0;
  double p_joint = 0;
  double log10_p = 0;
  double p_one = 0;  // single subtraction on the same state, for comparison
};

PipelineResult run_pipeline(const PipelineConfig& cfg);

// Equal-s pipeline over a uniform grid; per-point failures are flagged and
// the sweep continues.
SweepResult sweep_s(const PipelineConfig& cfg, double s_min, double s_max, int steps,
                    int jobs = 1);

// Coarse grid followed by golden-section refinement of e_after(s) to
// |s - s_opt| <= 1e-4.
OptResult optimize_s(const PipelineConfig& cfg, double s_lo, double s_hi);

// Per-N optimized one-subtraction success probability (constancy study).
std::vector<ScalingRow> n_scaling_study(double r2, double transmittance,
                                        const std::vector<int>& n_list, int cutoff);

// Joint success probability of subtracting on every mode with lossy
// detectors (the exponentially suppressed baseline scheme).
std::vector<BaselineRow> baseline_study(double r2, double transmittance, double eta,
                                        const std::vector<int>& n_list);

}  // namespace cvdist
