#pragma once

#include <cstdint>
#include <string>

namespace scalelaw::tools {

// Resolved configuration for one CLI run; echoed into every output and into
// the run manifest.
struct RunConfig {
  std::string command;
  std::string curve_path;
  std::string manifest_path;
  std::string meta_model_path;
  std::string oracle_ppl;  // "t1,t2,t3,N" analytic oracle override
  std::string out_dir;
  std::string family = "ppl";
  std::string switch_spec = "linear";  // meta | linear | brute | fixed:<N>
  std::string curve_name;
  std::string task = "classification";
  int classes = 1;
  int m = 0;  // 0 = use every point for fitting
  double target = 0.0;
  double target_frac = 0.0;
  double tau = 0.0;  // 0 = plain policy
  int max_steps = 1;
  double n_cap = 0.0;
  double oracle_max_n = 1e9;
  std::uint64_t seed = 0;
  int count = 8;          // synth
  double noise_sd = 0.02; // synth
  int trees = 100;
  int min_leaf = 2;
  double feature_fraction = 1.0 / 3.0;
  int max_depth = -1;
  bool no_bootstrap = false;
  bool no_scale_cov = false;
  int max_iter = 200;
  double gtol = 1e-10;
  double xtol = 1e-10;
};

int cmd_fit(const RunConfig& config);
int cmd_extrapolate(const RunConfig& config);
int cmd_estimate_data(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_train_meta(const RunConfig& config);
int cmd_eval_loo(const RunConfig& config);
int cmd_synth(const RunConfig& config);

}  // namespace scalelaw::tools
