#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scalelaw/curve_data.hpp"

namespace scalelaw {

// Predicted score at a given sample count; unlike measured points the value
// may fall outside (0,1) for a badly extrapolating predictor.
struct Prediction {
  std::int64_t n = 0;
  double v = 0.0;
};

struct EvalPoint {
  std::int64_t n = 0;
  double v_true = 0.0;
  double v_pred = 0.0;
};

struct EvalReport {
  double e_perf = 0.0;  // mean |v_true - v_pred| in percentage points
  double rmse = 0.0;    // root mean squared error in percentage points
  std::vector<EvalPoint> per_point;
};

// Mean absolute prediction error over held-out points, reported x100.
double mean_prediction_error(std::span<const PerformancePoint> truth,
                             std::span<const Prediction> pred);

double rmse(std::span<const PerformancePoint> truth, std::span<const Prediction> pred);

// Signed relative error of the final requested size against the true
// requirement: (n_final - n_star) / n_star. Negative means under-estimate.
double data_estimation_error(std::int64_t n_final, std::int64_t n_star);

// Data-estimation errors above this threshold render as "inf" in reports;
// the raw value is still stored.
inline constexpr double kEdataInfThreshold = 1000.0;

std::string format_e_data(double e_data);

EvalReport evaluate_predictions(std::span<const PerformancePoint> truth,
                                std::span<const Prediction> pred);

// Per-point CSV with columns n, v_true, v_pred.
std::string serialize_eval_csv(const EvalReport& report);

}  // namespace scalelaw
