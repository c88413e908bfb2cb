#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scalelaw/fitting.hpp"
#include "scalelaw/metamodel.hpp"
#include "scalelaw/predictors.hpp"

namespace scalelaw {

// Source of true scores at arbitrary sample counts during a simulated
// collection run. true_score must be non-decreasing (validated on a probe
// grid at construction).
struct Oracle {
  std::function<double(double)> true_score;
  double max_n = 0.0;
};

// Monotone piecewise-linear interpolation of log(1-v) against log n through
// the measured points, clamped to the endpoints outside [n_1, n_M].
// Non-monotone tables are repaired by isotonic regression, with a warning.
Oracle oracle_from_table(const LearningCurve& curve);

// Analytic oracle following an exact PPL.
Oracle oracle_from_ppl(const PplParams& params, double max_n);

// Smallest integer n with true_score(n) >= v_target; nullopt when the target
// is beyond the oracle's reach.
std::optional<std::int64_t> required_samples(const Oracle& oracle, double v_target);

enum class SwitchSource { meta, linear, brute_force, fixed };

struct CollectionPolicy {
  PredictorFamily family = PredictorFamily::power_law3;
  SwitchSource switch_source = SwitchSource::linear;  // PPL only
  double fixed_n_switch = 0.0;                        // SwitchSource::fixed
  const MetaModel* meta_model = nullptr;              // SwitchSource::meta
  int max_steps = 1;                                  // T >= 1
  std::optional<double> tau;                          // confidence threshold; absent = plain
  double n_cap = 0.0;                                 // 0 = 1e4 x largest initial n
  FitOptions fit_options;
};

enum class StepCap { none, sigma, growth_floor, n_cap };
enum class StopCause { predicted, measured, exhausted };

struct CollectionStep {
  int k = 0;
  std::int64_t n_request = 0;
  std::optional<double> v_measured;  // absent on the final predicted-stop step
  StepCap cap = StepCap::none;
  bool predicted_reached = false;
  double sigma_v = 0.0;  // predictive sd at the request (tau policies)
  FitResult fit;
};

struct CollectionTrace {
  std::vector<CollectionStep> steps;
  int stopping_index = 0;  // K
  std::int64_t n_final = 0;
  std::optional<std::int64_t> n_star;
  std::optional<double> e_data;  // absent when the target is unreachable
  StopCause stop_cause = StopCause::exhausted;
  double n_switch_used = 0.0;  // resolved switch point (PPL policies)
  double v_target = 0.0;
  std::uint64_t seed = 0;
};

// Runs the T-step collection loop: fit the predictor on the initial points
// plus everything collected so far, propose the next size (plain policies
// invert the predictor, tau policies take the smaller of the mean inversion
// and the confidence cap), stop as soon as the predictor claims the target is
// reached at its own proposal or a measurement reaches it.
CollectionTrace simulate_collection(const Oracle& oracle,
                                    std::span<const PerformancePoint> init_points, int classes,
                                    double v_target, const CollectionPolicy& policy,
                                    std::uint64_t seed);

const char* to_string(StepCap cap);
const char* to_string(StopCause cause);

// CSV with columns k, n_request, v_measured, capped_reason plus a trailing
// summary block.
std::string serialize_trace_csv(const CollectionTrace& trace);

}  // namespace scalelaw
