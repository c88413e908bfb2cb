#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "scalelaw/fitting.hpp"

namespace scalelaw {

// Design vector of the PPL seen as a model linear in theta at fixed N:
// n <= N -> [1, log n, (log n)^2]; n > N -> [1, log n, 2 log(N) log(n) - log(N)^2].
Eigen::Vector3d alpha_vec(double n_switch, double n);

// Predictive variance of y_hat(n) by the delta method: g(n)^T Sigma g(n) with
// g the parameter Jacobian at n (alpha_vec for the PPL).
double predictive_variance(const FitResult& fit, double n);

// Mean of 1 - exp(Y), Y ~ Normal(y_hat, sigma2_y): 1 - exp(y_hat + sigma2_y/2).
double score_mean(double y_hat, double sigma2_y);

// Standard deviation of 1 - exp(Y): exp(y_hat + sigma2_y/2) * sqrt(exp(sigma2_y) - 1).
double score_sd(double y_hat, double sigma2_y);

struct PredictiveBand {
  double n = 0;
  double y_hat = 0;
  double sigma2_y = 0;
  double mu_v = 0;
  double sigma_v = 0;
  bool degenerate = false;  // y_hat + sigma2_y/2 >= 0, so mu_v fell out of (0,1)
};

PredictiveBand band_at(const FitResult& fit, double n);

std::vector<PredictiveBand> band_grid(const FitResult& fit, double n_lo, double n_hi,
                                      int count);

// CSV with columns n, y_hat, sigma2_y, mu_v, sigma_v.
std::string serialize_band_csv(const std::vector<PredictiveBand>& band);

// Smallest n in [fit_n_max, n_cap] with mu_v(n) >= v_target; nullopt when the
// band never reaches the target. Throws DomainError when the band is
// non-monotone before the crossing.
std::optional<double> invert_mean(const FitResult& fit, double v_target, double n_cap);

struct SdInversion {
  double n = 0;
  bool at_floor = false;  // sigma_v(n_lo) already exceeds the budget
};

// Largest n in [n_lo, n_cap] with sigma_v(n) <= sd_budget, n_cap when the
// budget never binds on the range.
SdInversion invert_sd(const FitResult& fit, double sd_budget, double n_lo, double n_cap);

}  // namespace scalelaw
