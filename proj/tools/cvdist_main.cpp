#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvdist/entanglement.hpp"
#include "cvdist/errors.hpp"
#include "cvdist/experiments.hpp"
#include "cvdist/fock_bridge.hpp"
#include "cvdist/oracle.hpp"

namespace {

constexpr const char* kVersion = "cvdist 0.1.0";

// Fixed 12-significant-digit formatting so identical invocations produce
// identical bytes.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::ordered_json config_json(const cvdist::PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["n"] = cfg.n_modes;
  j["r2"] = fmt(cfg.r2);
  j["r1"] = fmt(cfg.resolved_r1());
  j["s"] = nlohmann::json::array();
  for (double s : cfg.s) j["s"].push_back(fmt(s));
  j["t"] = fmt(cfg.transmittance);
  j["mode"] = cfg.detected_mode;
  j["d"] = cfg.cutoff;
  j["cut"] = cfg.cut.side_a;
  j["eta"] = fmt(cfg.eta);
  return j;
}

void emit(const std::string& text, const std::string& out_path, const std::string& command,
          const cvdist::PipelineConfig* cfg) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  f << text;
  f.close();
  // every emitted data file is accompanied by its manifest
  nlohmann::ordered_json manifest;
  manifest["command"] = command;
  if (cfg) manifest["config"] = config_json(*cfg);
  manifest["version"] = kVersion;
  manifest["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count();
  manifest["output"] = out_path;
  std::ofstream m(out_path + ".manifest.json");
  m << manifest.dump(2) << "\n";
}

// Pulls --config FILE out of the argument list and appends "--key value"
// pairs for every config entry whose flag is absent from the command line,
// so explicit flags always win. Flat key=value lines, '#' starts a comment.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config") {
      if (std::next(it) == args.end())
        throw std::runtime_error("--config requires a file path");
      path = *std::next(it);
      it = args.erase(it, it + 2);
    } else {
      ++it;
    }
  }
  if (path.empty()) return args;

  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key=value");
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) == args.end()) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

struct CommonFlags {
  int n = 3;
  double r2 = 0.05;
  std::string r1 = "unbiased";
  double s = 0.0;
  double t = 0.9;
  int d = 7;
  int mode = 0;
  int cut_mode = -1;  // default: the detected mode vs rest
  double eta = 1.0;
  std::string out;
  int jobs = 1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--n", n, "number of modes");
    cmd->add_option("--r2", r2, "initial squeezing r2");
    cmd->add_option("--r1", r1, "r1, or 'unbiased'");
    cmd->add_option("--s", s, "local squeezing (equal on all modes)");
    cmd->add_option("--t", t, "beamsplitter transmittance");
    cmd->add_option("--d", d, "Fock cutoff per mode");
    cmd->add_option("--mode", mode, "detected mode");
    cmd->add_option("--cut", cut_mode, "single mode defining the bipartition");
    cmd->add_option("--eta", eta, "detector efficiency");
    cmd->add_option("--out", out, "write output to file (with manifest)");
    cmd->add_option("--jobs", jobs, "parallel sweep workers");
  }

  cvdist::PipelineConfig to_config() const {
    cvdist::PipelineConfig cfg;
    cfg.n_modes = n;
    cfg.r2 = r2;
    if (r1 != "unbiased") cfg.r1 = std::stod(r1);
    cfg.s.assign(n, s);
    cfg.transmittance = t;
    cfg.cutoff = d;
    cfg.detected_mode = mode;
    cfg.cut = cvdist::Bipartition::single_mode_vs_rest(cut_mode < 0 ? mode : cut_mode);
    cfg.eta = eta;
    return cfg;
  }
};

std::string result_json(const cvdist::PipelineResult& res,
                        const double* s_opt = nullptr) {
  nlohmann::ordered_json j;
  j["e_before"] = fmt(res.e_before);
  j["e_after"] = fmt(res.e_after);
  j["p_succ"] = fmt(res.p_succ);
  j["deficit"] = fmt(res.deficit);
  if (s_opt) j["s_opt"] = fmt(*s_opt);
  j["config"] = config_json(res.config);
  return j.dump(2) + "\n";
}

int cmd_distill(const CommonFlags& flags) {
  const cvdist::PipelineConfig cfg = flags.to_config();
  const cvdist::PipelineResult res = cvdist::run_pipeline(cfg);
  emit(result_json(res), flags.out, "distill", &cfg);
  return 0;
}

int cmd_sweep(const CommonFlags& flags, double s_min, double s_max, int steps) {
  const cvdist::PipelineConfig cfg = flags.to_config();
  const cvdist::SweepResult sweep = cvdist::sweep_s(cfg, s_min, s_max, steps, flags.jobs);
  std::ostringstream csv;
  csv << "s,e_before,e_after,p_succ,deficit\n";
  for (const auto& pt : sweep.points) {
    if (!pt.ok) {
      csv << fmt(pt.s) << ",failed,failed,failed,failed\n";
      continue;
    }
    csv << fmt(pt.s) << "," << fmt(pt.result.e_before) << "," << fmt(pt.result.e_after)
        << "," << fmt(pt.result.p_succ) << "," << fmt(pt.result.deficit) << "\n";
  }
  emit(csv.str(), flags.out, "sweep", &cfg);
  return 0;
}

int cmd_optimize(const CommonFlags& flags, double s_min, double s_max) {
  const cvdist::PipelineConfig cfg = flags.to_config();
  const cvdist::OptResult opt = cvdist::optimize_s(cfg, s_min, s_max);
  emit(result_json(opt.at_opt, &opt.s_opt), flags.out, "optimize", &cfg);
  if (opt.boundary) std::cerr << "warning: no interior maximum in bracket\n";
  return 0;
}

int cmd_scaling(const CommonFlags& flags, const std::vector<int>& n_list) {
  const auto rows = cvdist::n_scaling_study(flags.r2, flags.t, n_list, flags.d);
  std::ostringstream csv;
  csv << "N,s_opt,e_opt,p_succ\n";
  for (const auto& row : rows) {
    if (!row.ok) {
      std::cerr << "N=" << row.n_modes << " skipped: " << row.error << "\n";
      continue;
    }
    csv << row.n_modes << "," << fmt(row.s_opt) << "," << fmt(row.e_opt) << ","
        << fmt(row.p_succ) << "\n";
  }
  emit(csv.str(), flags.out, "scaling", nullptr);
  return 0;
}

int cmd_baseline(const CommonFlags& flags, const std::vector<int>& n_list) {
  const auto rows = cvdist::baseline_study(flags.r2, flags.t, flags.eta, n_list);
  std::ostringstream csv;
  csv << "N,log10_p\n";
  for (const auto& row : rows) csv << row.n_modes << "," << fmt(row.log10_p) << "\n";
  emit(csv.str(), flags.out, "baseline", nullptr);
  return 0;
}

bool check(bool ok, const std::string& name, bool& all_ok) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
  if (!ok) all_ok = false;
  return ok;
}

int cmd_verify() {
  using namespace cvdist;
  bool all_ok = true;

  // vacuum maps to |0...0><0...0|
  {
    const FockDensityMatrix rho = gaussian_to_fock(vacuum(2), 4);
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(16, 16);
    expect(0, 0) = 1;
    check((rho.data - expect).cwiseAbs().maxCoeff() < 1e-14, "vacuum -> |0><0|", all_ok);
  }

  // closed-form squeezed-vacuum images
  {
    CovMatrix smsv(1, Eigen::Vector2d(std::exp(0.6) / 2, std::exp(-0.6) / 2).asDiagonal());
    check((gaussian_to_fock(smsv, 8).data - oracle::analytic_smsv(0.3, 8).data)
                  .cwiseAbs()
                  .maxCoeff() < 1e-10,
          "SMSV r=0.3 matches analytic expansion", all_ok);
  }

  // Fock oracle vs phase-space pipeline: TMSV r=0.3
  {
    const double c2 = std::cosh(0.6), s2 = std::sinh(0.6);
    Eigen::MatrixXd v(4, 4);
    v << c2 / 2, 0, s2 / 2, 0, 0, c2 / 2, 0, -s2 / 2, s2 / 2, 0, c2 / 2, 0, 0, -s2 / 2, 0,
        c2 / 2;
    const CovMatrix tmsv(2, v);
    const DistillOutcome out = photon_subtract_one(tmsv, 1, 0.9);
    const auto [p_oracle, rho_oracle] =
        oracle::oracle_photon_subtract(gaussian_to_fock(tmsv, 8), 1, 0.9);
    check(std::abs(out.p_succ - p_oracle) < 1e-8, "TMSV p_succ matches oracle", all_ok);
    FockDensityMatrix rho = mixture_to_fock(out.state, 8);
    rho.data /= rho.trace_real();
    check((rho.data - rho_oracle.data).cwiseAbs().maxCoeff() < 1e-6,
          "TMSV subtracted state matches oracle", all_ok);
  }

  // N=3 operating point, and the delta definition arbiter
  {
    PipelineConfig cfg;
    cfg.s.assign(3, 0.07);
    const CovMatrix v = symmetric_state({3, cfg.resolved_r1(), 0.05});
    const CovMatrix vs = apply_symplectic(v, squeezer_each(cfg.s));
    const DistillOutcome out = photon_subtract_one(vs, 0, 0.9);
    const auto [p_oracle, rho_oracle] =
        oracle::oracle_photon_subtract(gaussian_to_fock(vs, 8), 0, 0.9);
    check(std::abs(out.p_succ - p_oracle) < 1e-8, "N=3 p_succ matches oracle", all_ok);
    FockDensityMatrix rho = mixture_to_fock(out.state, 8);
    rho.data /= rho.trace_real();
    check(oracle::max_interior_difference(rho, rho_oracle, 6) < 1e-6,
          "N=3 subtracted state matches oracle (interior block)", all_ok);

    // delta from the detected-mode block, not from the conditioned Gamma2
    const CovMatrix big = apply_symplectic(tensor_with_vacuum(vs), beamsplitter(0.9, 0, 3, 4));
    const Partition part = partition_mode(big, 3);
    const auto [p_vac, gamma2] = condition_on_vacuum(part);
    const double delta_from_delta =
        std::sqrt((part.delta + 0.5 * Eigen::Matrix2d::Identity()).determinant());
    const double delta_from_gamma2 = std::sqrt(
        (gamma2.data() + 0.5 * Eigen::MatrixXd::Identity(6, 6)).determinant());
    check(std::abs((delta_from_delta - 1) / delta_from_delta - p_oracle) < 1e-8,
          "delta computed from detected-mode block matches oracle", all_ok);
    check(std::abs((delta_from_gamma2 - 1) / delta_from_gamma2 - p_oracle) > 1e-4,
          "delta computed from Gamma2 does not match oracle", all_ok);
  }

  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multipartite CV entanglement distillation by local squeezing and one photon subtraction"};
  app.set_version_flag("--version", kVersion);
  app.footer("Common: --config FILE reads flat key=value defaults (one per line, '#'\n"
             "comments); command-line flags take precedence over config entries.");
  app.require_subcommand(1);

  CommonFlags flags;
  double s_min = 0.0, s_max = 0.2;
  int steps = 21;
  std::vector<int> n_list{2, 3, 4};

  auto* distill = app.add_subcommand("distill", "run one pipeline, print JSON result");
  flags.add_to(distill);
  distill->get_option("--s")->required();

  auto* sweep = app.add_subcommand("sweep", "equal-s sweep, print CSV");
  flags.add_to(sweep);
  sweep->add_option("--smin", s_min, "sweep start");
  sweep->add_option("--smax", s_max, "sweep end");
  sweep->add_option("--steps", steps, "grid points");

  auto* optimize = app.add_subcommand("optimize", "golden-section search for s_opt");
  flags.add_to(optimize);
  optimize->add_option("--smin", s_min, "bracket start");
  optimize->add_option("--smax", s_max, "bracket end");

  auto* scaling = app.add_subcommand("scaling", "optimized p_succ vs N, print CSV");
  flags.add_to(scaling);
  scaling->add_option("--nlist", n_list, "mode counts");

  auto* baseline = app.add_subcommand("baseline", "N-fold subtraction probability vs N");
  flags.add_to(baseline);
  baseline->add_option("--nlist", n_list, "mode counts");

  auto* verify = app.add_subcommand("verify", "oracle-equivalence checks");
  (void)verify;

  std::vector<std::string> args;
  try {
    args = expand_config_args(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes arguments back to front

  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (distill->parsed()) return cmd_distill(flags);
    if (sweep->parsed()) return cmd_sweep(flags, s_min, s_max, steps);
    if (optimize->parsed()) return cmd_optimize(flags, s_min, s_max);
    if (scaling->parsed()) return cmd_scaling(flags, n_list);
    if (baseline->parsed()) return cmd_baseline(flags, n_list);
    if (verify->parsed()) return cmd_verify();
  } catch (const cvdist::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
