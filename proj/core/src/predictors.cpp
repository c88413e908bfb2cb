#include "scalelaw/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "crossing_search.hpp"
#include "scalelaw/errors.hpp"

namespace scalelaw {

namespace {

void require_positive_n(double n) {
  if (!(n > 0.0)) {
    throw DomainError("sample size must be positive, got " + std::to_string(n));
  }
}

double clipped_log_error(double v) {
  const double vc = std::clamp(v, kScoreClip, 1.0 - kScoreClip);
  return std::log1p(-vc);
}

bool clip_active(double v) { return v <= kScoreClip || v >= 1.0 - kScoreClip; }

void check_params(PredictorFamily family, const Eigen::VectorXd& params,
                  const std::optional<double>& n_switch) {
  if (params.size() != param_count(family)) {
    std::ostringstream msg;
    msg << to_string(family) << " expects " << param_count(family) << " parameters, got "
        << params.size();
    throw ShapeError(msg.str());
  }
  if (family == PredictorFamily::ppl) {
    if (!n_switch) throw DomainError("ppl evaluation requires a switch point");
    if (!(*n_switch > 0.0)) throw DomainError("switch point must be positive");
  }
}

}  // namespace

int param_count(PredictorFamily family) {
  switch (family) {
    case PredictorFamily::ppl:
    case PredictorFamily::power_law3:
    case PredictorFamily::arctan:
    case PredictorFamily::algebraic:
      return 3;
    case PredictorFamily::log_linear:
    case PredictorFamily::logarithmic:
      return 2;
  }
  return 0;
}

PredictorFamily parse_family(std::string_view text) {
  if (text == "ppl") return PredictorFamily::ppl;
  if (text == "powerlaw3" || text == "power-law3") return PredictorFamily::power_law3;
  if (text == "loglinear" || text == "log-linear") return PredictorFamily::log_linear;
  if (text == "arctan") return PredictorFamily::arctan;
  if (text == "algebraic") return PredictorFamily::algebraic;
  if (text == "logarithmic") return PredictorFamily::logarithmic;
  throw ParseError("unknown predictor family '" + std::string(text) + "'");
}

const char* to_string(PredictorFamily family) {
  switch (family) {
    case PredictorFamily::ppl: return "ppl";
    case PredictorFamily::power_law3: return "powerlaw3";
    case PredictorFamily::log_linear: return "loglinear";
    case PredictorFamily::arctan: return "arctan";
    case PredictorFamily::algebraic: return "algebraic";
    case PredictorFamily::logarithmic: return "logarithmic";
  }
  return "?";
}

std::pair<double, double> ppl_derived_params(const Eigen::Vector3d& theta, double n_switch) {
  if (!(n_switch > 0.0)) throw DomainError("switch point must be positive");
  const double log_switch = std::log(n_switch);
  const double theta5 = theta[1] + 2.0 * theta[2] * log_switch;
  const double theta4 = theta[0] - theta[2] * log_switch * log_switch;
  return {theta4, theta5};
}

double ppl_eval(const PplParams& params, double n) {
  require_positive_n(n);
  const double t = std::log(n);
  if (n <= params.n_switch) {
    return params.theta[0] + params.theta[1] * t + params.theta[2] * t * t;
  }
  const auto [theta4, theta5] = ppl_derived_params(params.theta, params.n_switch);
  return theta4 + theta5 * t;
}

Eigen::Vector3d ppl_jacobian(const PplParams& params, double n) {
  require_positive_n(n);
  if (!(params.n_switch > 0.0)) throw DomainError("switch point must be positive");
  const double t = std::log(n);
  if (n <= params.n_switch) return {1.0, t, t * t};
  const double log_switch = std::log(params.n_switch);
  return {1.0, t, 2.0 * log_switch * t - log_switch * log_switch};
}

double family_eval_unchecked(PredictorFamily family, const Eigen::VectorXd& params,
                             std::optional<double> n_switch, double n) noexcept {
  const double t = std::log(n);
  switch (family) {
    case PredictorFamily::ppl: {
      PplParams p{params.head<3>(), n_switch.value_or(0.0)};
      if (!(p.n_switch > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      if (n <= p.n_switch) return p.theta[0] + p.theta[1] * t + p.theta[2] * t * t;
      const double log_switch = std::log(p.n_switch);
      const double theta5 = p.theta[1] + 2.0 * p.theta[2] * log_switch;
      const double theta4 = p.theta[0] - p.theta[2] * log_switch * log_switch;
      return theta4 + theta5 * t;
    }
    case PredictorFamily::power_law3: {
      const double err = params[0] * std::pow(n, params[1]) + params[2];
      if (!(err > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      return std::log(err);
    }
    case PredictorFamily::log_linear:
      return params[0] + params[1] * t;
    case PredictorFamily::arctan: {
      const double u = params[0] * (M_PI / 2.0) * n + params[1];
      const double v = (2.0 / M_PI) * std::atan(u) - params[2];
      return clipped_log_error(v);
    }
    case PredictorFamily::algebraic: {
      const double v = 1.0 - params[2] - params[0] / (1.0 + params[1] * n);
      return clipped_log_error(v);
    }
    case PredictorFamily::logarithmic: {
      const double v = params[1] + params[0] * t;
      return clipped_log_error(v);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double family_eval(PredictorFamily family, const Eigen::VectorXd& params,
                   std::optional<double> n_switch, double n) {
  check_params(family, params, n_switch);
  require_positive_n(n);
  if (family == PredictorFamily::power_law3) {
    const double err = params[0] * std::pow(n, params[1]) + params[2];
    if (!(err > 0.0 && err < 1.0)) {
      std::ostringstream msg;
      msg << "powerlaw3 error term " << err << " outside (0,1) at n=" << n;
      throw RangeError(msg.str());
    }
  }
  return family_eval_unchecked(family, params, n_switch, n);
}

double family_score(PredictorFamily family, const Eigen::VectorXd& params,
                    std::optional<double> n_switch, double n) {
  return -std::expm1(family_eval(family, params, n_switch, n));
}

Eigen::VectorXd family_jacobian(PredictorFamily family, const Eigen::VectorXd& params,
                                std::optional<double> n_switch, double n) {
  check_params(family, params, n_switch);
  require_positive_n(n);
  const double t = std::log(n);
  switch (family) {
    case PredictorFamily::ppl:
      return ppl_jacobian(PplParams{params.head<3>(), *n_switch}, n);
    case PredictorFamily::power_law3: {
      const double pw = std::pow(n, params[1]);
      const double err = params[0] * pw + params[2];
      Eigen::VectorXd jac(3);
      jac << pw / err, params[0] * pw * t / err, 1.0 / err;
      return jac;
    }
    case PredictorFamily::log_linear: {
      Eigen::VectorXd jac(2);
      jac << 1.0, t;
      return jac;
    }
    case PredictorFamily::arctan: {
      const double u = params[0] * (M_PI / 2.0) * n + params[1];
      const double v = (2.0 / M_PI) * std::atan(u) - params[2];
      Eigen::VectorXd jac = Eigen::VectorXd::Zero(3);
      if (clip_active(v)) return jac;
      const double w = 1.0 / (1.0 + u * u);
      const double inv_err = 1.0 / (1.0 - v);
      jac << -n * w * inv_err, -(2.0 / M_PI) * w * inv_err, inv_err;
      return jac;
    }
    case PredictorFamily::algebraic: {
      const double denom = 1.0 + params[1] * n;
      const double err = params[2] + params[0] / denom;
      Eigen::VectorXd jac = Eigen::VectorXd::Zero(3);
      if (clip_active(1.0 - err)) return jac;
      jac << (1.0 / denom) / err, -(params[0] * n / (denom * denom)) / err, 1.0 / err;
      return jac;
    }
    case PredictorFamily::logarithmic: {
      const double v = params[1] + params[0] * t;
      Eigen::VectorXd jac = Eigen::VectorXd::Zero(2);
      if (clip_active(v)) return jac;
      const double inv_err = 1.0 / (1.0 - v);
      jac << -t * inv_err, -inv_err;
      return jac;
    }
  }
  throw DomainError("unknown family");
}

std::optional<double> family_inverse(PredictorFamily family, const Eigen::VectorXd& params,
                                     std::optional<double> n_switch, double v_target,
                                     const InverseOptions& options) {
  check_params(family, params, n_switch);
  if (!(v_target > 0.0 && v_target < 1.0)) {
    throw DomainError("target score must lie in (0,1)");
  }
  if (!(options.n_lo >= 1.0) || !(options.n_cap >= options.n_lo)) {
    throw RangeError("inverse search needs 1 <= n_lo <= n_cap");
  }
  auto score_at = [&](double n) {
    const double y = family_eval_unchecked(family, params, n_switch, n);
    if (std::isnan(y)) return 1.0;  // power-law error term <= 0 reads as a perfect score
    return -std::expm1(y);
  };
  const auto crossing = detail::find_up_crossing(score_at, v_target, options.n_lo,
                                                 options.n_cap, options.rel_tol,
                                                 options.grid_points);
  if (!crossing.monotone_ok) {
    std::ostringstream msg;
    msg << to_string(family) << " fit is non-monotone on [" << crossing.bad_lo << ", "
        << crossing.bad_hi << "]; refusing to invert";
    throw DomainError(msg.str());
  }
  return crossing.n;
}

}  // namespace scalelaw
