#include "scalelaw/metrics.hpp"

#include <cmath>
#include <sstream>

#include "scalelaw/errors.hpp"

namespace scalelaw {

namespace {

void check_alignment(std::span<const PerformancePoint> truth,
                     std::span<const Prediction> pred) {
  if (truth.empty()) throw DomainError("no evaluation points");
  if (truth.size() != pred.size()) {
    throw DomainError("truth and prediction sequences have different lengths");
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].n != pred[i].n) {
      throw DomainError("misaligned n at index " + std::to_string(i) + ": " +
                        std::to_string(truth[i].n) + " vs " + std::to_string(pred[i].n));
    }
  }
}

}  // namespace

double mean_prediction_error(std::span<const PerformancePoint> truth,
                             std::span<const Prediction> pred) {
  check_alignment(truth, pred);
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += std::abs(truth[i].v - pred[i].v);
  return 100.0 * sum / static_cast<double>(truth.size());
}

double rmse(std::span<const PerformancePoint> truth, std::span<const Prediction> pred) {
  check_alignment(truth, pred);
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i].v - pred[i].v;
    sum += d * d;
  }
  return 100.0 * std::sqrt(sum / static_cast<double>(truth.size()));
}

double data_estimation_error(std::int64_t n_final, std::int64_t n_star) {
  if (n_star < 1) throw DomainError("n_star must be >= 1");
  return static_cast<double>(n_final - n_star) / static_cast<double>(n_star);
}

std::string format_e_data(double e_data) {
  if (e_data > kEdataInfThreshold) return "inf";
  std::ostringstream out;
  out.precision(6);
  out << e_data;
  return out.str();
}

EvalReport evaluate_predictions(std::span<const PerformancePoint> truth,
                                std::span<const Prediction> pred) {
  EvalReport report;
  report.e_perf = mean_prediction_error(truth, pred);
  report.rmse = rmse(truth, pred);
  report.per_point.reserve(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    report.per_point.push_back({truth[i].n, truth[i].v, pred[i].v});
  }
  return report;
}

std::string serialize_eval_csv(const EvalReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << "n,v_true,v_pred\n";
  for (const auto& p : report.per_point) {
    out << p.n << "," << p.v_true << "," << p.v_pred << "\n";
  }
  return out.str();
}

}  // namespace scalelaw
