#include "scalelaw/uncertainty.hpp"

#include <cmath>
#include <sstream>

#include "crossing_search.hpp"
#include "scalelaw/errors.hpp"
#include "scalelaw/log.hpp"

namespace scalelaw {

Eigen::Vector3d alpha_vec(double n_switch, double n) {
  return ppl_jacobian(PplParams{Eigen::Vector3d::Zero(), n_switch}, n);
}

double predictive_variance(const FitResult& fit, double n) {
  const Eigen::VectorXd g = family_jacobian(fit.family, fit.params, fit.n_switch, n);
  const double var = g.dot(fit.covariance * g);
  if (var < -1e-9 * (1.0 + g.squaredNorm())) {
    throw NumericalError("covariance is not positive semidefinite");
  }
  return std::max(var, 0.0);
}

double score_mean(double y_hat, double sigma2_y) {
  if (!std::isfinite(y_hat) || !std::isfinite(sigma2_y)) {
    throw NumericalError("non-finite band inputs");
  }
  return -std::expm1(y_hat + sigma2_y / 2.0);
}

double score_sd(double y_hat, double sigma2_y) {
  if (!std::isfinite(y_hat) || !std::isfinite(sigma2_y)) {
    throw NumericalError("non-finite band inputs");
  }
  if (sigma2_y <= 0.0) return 0.0;
  return std::exp(y_hat + sigma2_y / 2.0) * std::sqrt(std::expm1(sigma2_y));
}

PredictiveBand band_at(const FitResult& fit, double n) {
  PredictiveBand band;
  band.n = n;
  band.y_hat = family_eval_unchecked(fit.family, fit.params, fit.n_switch, n);
  if (!std::isfinite(band.y_hat)) {
    throw NumericalError("predictor is undefined at n=" + std::to_string(n));
  }
  band.sigma2_y = predictive_variance(fit, n);
  band.mu_v = score_mean(band.y_hat, band.sigma2_y);
  band.sigma_v = score_sd(band.y_hat, band.sigma2_y);
  if (band.mu_v <= 0.0) {
    band.degenerate = true;
    log::info("degenerate band at n=" + std::to_string(n) + ": mean score out of range");
  }
  return band;
}

std::vector<PredictiveBand> band_grid(const FitResult& fit, double n_lo, double n_hi,
                                      int count) {
  if (!(n_lo > 0.0) || !(n_hi >= n_lo) || count < 2) {
    throw RangeError("band grid needs 0 < n_lo <= n_hi and count >= 2");
  }
  std::vector<PredictiveBand> band;
  band.reserve(static_cast<std::size_t>(count));
  const double t_lo = std::log(n_lo);
  const double t_hi = std::log(n_hi);
  for (int i = 0; i < count; ++i) {
    const double t = t_lo + (t_hi - t_lo) * static_cast<double>(i) / (count - 1);
    band.push_back(band_at(fit, std::exp(t)));
  }
  return band;
}

std::string serialize_band_csv(const std::vector<PredictiveBand>& band) {
  std::ostringstream out;
  out.precision(12);
  out << "n,y_hat,sigma2_y,mu_v,sigma_v\n";
  for (const auto& b : band) {
    out << b.n << "," << b.y_hat << "," << b.sigma2_y << "," << b.mu_v << "," << b.sigma_v
        << "\n";
  }
  return out.str();
}

std::optional<double> invert_mean(const FitResult& fit, double v_target, double n_cap) {
  if (!(v_target > 0.0 && v_target < 1.0)) throw DomainError("target score must lie in (0,1)");
  const double n_lo = fit.fit_n_max;
  if (!(n_cap >= n_lo)) throw RangeError("n_cap below the fitted range");
  auto mean_at = [&](double n) { return band_at(fit, n).mu_v; };
  const auto crossing =
      detail::find_up_crossing(mean_at, v_target, n_lo, n_cap, 1e-6, 64);
  if (!crossing.monotone_ok) {
    std::ostringstream msg;
    msg << "mean-score band is non-monotone on [" << crossing.bad_lo << ", "
        << crossing.bad_hi << "]; refusing to invert";
    throw DomainError(msg.str());
  }
  return crossing.n;
}

SdInversion invert_sd(const FitResult& fit, double sd_budget, double n_lo, double n_cap) {
  if (!(sd_budget > 0.0)) throw DomainError("sd budget must be positive");
  if (!(n_lo > 0.0) || !(n_cap >= n_lo)) throw RangeError("invert_sd needs 0 < n_lo <= n_cap");
  auto sd_at = [&](double n) { return band_at(fit, n).sigma_v; };
  const auto crossing = detail::find_budget_crossing(sd_at, sd_budget, n_lo, n_cap, 1e-6, 64);
  if (!crossing.monotone_ok) {
    log::warn("sigma band is not non-decreasing on the search range; using first crossing");
  }
  if (crossing.at_floor) {
    log::info("sd budget already exceeded at the search floor n=" + std::to_string(n_lo));
  }
  return SdInversion{crossing.n, crossing.at_floor};
}

}  // namespace scalelaw
