#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scalelaw/curve_data.hpp"
#include "scalelaw/predictors.hpp"

namespace scalelaw {

struct FitOptions {
  int max_iter = 200;
  double gtol = 1e-10;   // inf-norm of J^T r
  double xtol = 1e-10;   // relative step size
  double lambda0 = 1e-3; // initial damping, x10 on reject, /10 on accept
  // Scale Sigma by the residual variance s^2 = |r|^2 / (m - p). Off gives the
  // bare (J^T J)^-1, which reads the measurements as having unit noise and
  // inflates every confidence band far beyond the observed scatter.
  bool scale_covariance = true;
};

struct FitResult {
  PredictorFamily family = PredictorFamily::log_linear;
  Eigen::VectorXd params;
  std::optional<double> n_switch;  // PPL only
  Eigen::MatrixXd covariance;      // (J^T J)^-1 at the optimum (pinv when singular)
  double residual_norm = 0.0;      // 2-norm of the final residual vector
  bool converged = false;
  bool degenerate = false;         // singular J^T J; covariance is a pseudo-inverse
  bool monotone_warning = false;   // fitted curve not decreasing in log-error over range
  int iterations = 0;
  double fit_n_min = 0.0;
  double fit_n_max = 0.0;
  std::vector<double> accepted_costs;  // |r|^2 after each accepted step

  double eval_log_error(double n) const;
  double eval_score(double n) const;
};

// Minimizes sum_i (y_i - y_hat(n_i; theta))^2 with y = log(1 - v), starting
// from theta0. For the PPL the switch point is held fixed.
FitResult lm_fit(PredictorFamily family, std::span<const PerformancePoint> points,
                 const Eigen::VectorXd& theta0, std::optional<double> n_switch,
                 const FitOptions& options = {});

struct Covariance {
  Eigen::MatrixXd matrix;
  bool degenerate = false;
};

// Sigma = (J^T J)^-1; Moore-Penrose pseudo-inverse (flagged) when the
// condition number exceeds 1e12.
Covariance param_covariance(const Eigen::MatrixXd& jacobian);

// Deterministic data-driven starting point for each family.
Eigen::VectorXd default_init(PredictorFamily family, std::span<const PerformancePoint> points,
                             std::optional<double> n_switch);

// lm_fit with the default initialization.
FitResult fit_family(PredictorFamily family, std::span<const PerformancePoint> points,
                     std::optional<double> n_switch, const FitOptions& options = {});

// PPL at a fixed switch point (linear in theta; LM agrees with the closed-form
// linear least-squares solution).
FitResult fit_ppl(std::span<const PerformancePoint> points, double n_switch,
                  const FitOptions& options = {});

std::string serialize_fit(const FitResult& fit);

}  // namespace scalelaw
