#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "scalelaw/curve_data.hpp"

namespace scalelaw {

// Generator for ground-truth curves: scores follow the piecewise power law in
// log-error space with optional additive Gaussian noise there.
struct SynthSpec {
  Eigen::Vector3d theta = Eigen::Vector3d::Zero();
  double n_switch = 1.0;
  double noise_sd = 0.0;  // in log-error space
  std::vector<std::int64_t> grid;
  int classes = 1;
  std::uint64_t seed = 0;
  std::size_t fit_count = 0;  // 0 means all points
  std::string name = "synth";
  Task task = Task::classification;
};

// v(n_i) = 1 - exp(ppl(n_i) + eps_i), eps_i ~ Normal(0, noise_sd^2);
// deterministic given the seed.
LearningCurve gen_curve(const SynthSpec& spec);

struct ParamRanges {
  double theta1_lo = -0.5, theta1_hi = 0.0;
  double theta2_lo = -0.2, theta2_hi = 0.0;
  // Admissible curvature band; draws landing outside are rejected.
  double theta3_lo = -0.2, theta3_hi = -0.02;
  // High-shot log-log slopes cluster tightly across real curves; with
  // couple_tail the curvature is derived as theta3 = (tail - theta2) /
  // (2 log N), the continuity condition read as the definition of the
  // switch. This couples the few-shot window shape to the switch location,
  // which is what the meta-model learns from. Without it theta3 is drawn
  // uniformly and the window carries no information about the switch.
  bool couple_tail = true;
  double tail_slope_lo = -0.7, tail_slope_hi = -0.5;
  double n_over_c_lo = 2.0, n_over_c_hi = 50.0;  // switch point / classes, log-uniform
  int classes_lo = 5, classes_hi = 257;          // log-uniform integer
  double noise_sd = 0.02;
  std::vector<int> shots = {1, 2, 3, 4, 5};  // few-shot grid: shots x classes
  // Eval grid: {10%, 15%, ..., 100%} of a per-curve budget of
  // classes x log-uniform[budget_over_c_lo, budget_over_c_hi] samples. Real
  // full-dataset sizes mostly sit at 10-100x the class count, which keeps the
  // eval subsets contiguous with the few-shot window instead of leaving a
  // candidate-free gap around the switch.
  double budget_over_c_lo = 10.0;
  double budget_over_c_hi = 100.0;
  double eval_frac_lo = 0.10;
  double eval_frac_step = 0.05;
};

struct SynthDictionary {
  CurveDictionary dict;
  std::vector<SynthSpec> specs;  // generator parameters per curve, same order
};

// Draws count curves with independent per-curve substreams of the master
// seed; infeasible draws are rejection-resampled up to a retry cap.
SynthDictionary gen_dictionary(int count, const ParamRanges& ranges, std::uint64_t seed);

}  // namespace scalelaw
