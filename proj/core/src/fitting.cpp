#include "scalelaw/fitting.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "scalelaw/errors.hpp"
#include "scalelaw/log.hpp"

namespace scalelaw {

namespace {

void validate_points(std::span<const PerformancePoint> points) {
  for (const auto& p : points) {
    if (p.n < 1) throw DomainError("fit point with n < 1");
    if (!(p.v > 0.0 && p.v < 1.0)) throw DomainError("fit point score outside (0,1)");
  }
}

Eigen::VectorXd log_errors(std::span<const PerformancePoint> points) {
  Eigen::VectorXd y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) y[i] = std::log1p(-points[i].v);
  return y;
}

// Ordinary linear regression of y on log n: returns (intercept, slope).
std::pair<double, double> log_space_line(std::span<const PerformancePoint> points,
                                         bool y_is_score) {
  const auto m = static_cast<double>(points.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (const auto& p : points) {
    const double t = std::log(static_cast<double>(p.n));
    const double y = y_is_score ? p.v : std::log1p(-p.v);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double det = m * stt - st * st;
  if (std::abs(det) < 1e-14) return {sy / m, 0.0};
  const double slope = (m * sty - st * sy) / det;
  const double intercept = (sy - slope * st) / m;
  return {intercept, slope};
}

void check_monotone_warning(FitResult& fit) {
  // A fitted predictor whose log-error slope is positive anywhere on the
  // extrapolation range gets flagged; inversion later refuses such ranges.
  if (fit.family != PredictorFamily::ppl && fit.family != PredictorFamily::log_linear) return;
  const double t_m = std::log(fit.fit_n_max);
  const double t_hi = t_m + std::log(1e4);
  double slope_max;
  if (fit.family == PredictorFamily::log_linear) {
    slope_max = fit.params[1];
  } else {
    const double t_sw = std::log(*fit.n_switch);
    slope_max = -std::numeric_limits<double>::infinity();
    if (t_sw > t_m) {
      // quadratic branch slope t2 + 2 t3 t is linear in t; check segment ends
      const double t_end = std::min(t_sw, t_hi);
      slope_max = std::max(fit.params[1] + 2.0 * fit.params[2] * t_m,
                           fit.params[1] + 2.0 * fit.params[2] * t_end);
    }
    if (t_sw < t_hi) {
      const auto [theta4, theta5] = ppl_derived_params(fit.params.head<3>(), *fit.n_switch);
      (void)theta4;
      slope_max = std::max(slope_max, theta5);
    }
  }
  if (slope_max > 0.0) {
    fit.monotone_warning = true;
    log::warn(std::string(to_string(fit.family)) +
              " fit has a non-decreasing log-error segment on the extrapolation range");
  }
}

}  // namespace

double FitResult::eval_log_error(double n) const {
  return family_eval(family, params, n_switch, n);
}

double FitResult::eval_score(double n) const {
  return family_score(family, params, n_switch, n);
}

Covariance param_covariance(const Eigen::MatrixXd& jacobian) {
  if (!jacobian.allFinite()) throw NumericalError("jacobian has non-finite entries");
  const Eigen::MatrixXd normal = jacobian.transpose() * jacobian;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(normal, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double s_max = sv.size() ? sv[0] : 0.0;
  Covariance cov;
  cov.degenerate = !(s_max > 0.0) || sv[sv.size() - 1] < s_max / 1e12;
  // Moore-Penrose pseudo-inverse; equals the plain inverse when well-conditioned.
  Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > s_max * 1e-14 && sv[i] > 0.0) inv_sv[i] = 1.0 / sv[i];
  }
  cov.matrix = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
  cov.matrix = ((cov.matrix + cov.matrix.transpose()) / 2.0).eval();
  if (!cov.matrix.allFinite()) throw NumericalError("covariance has non-finite entries");
  return cov;
}

FitResult lm_fit(PredictorFamily family, std::span<const PerformancePoint> points,
                 const Eigen::VectorXd& theta0, std::optional<double> n_switch,
                 const FitOptions& options) {
  const int p = param_count(family);
  if (static_cast<int>(points.size()) < p) {
    std::ostringstream msg;
    msg << to_string(family) << " fit is underdetermined: " << points.size() << " points for "
        << p << " parameters";
    throw FitError(msg.str());
  }
  validate_points(points);
  if (theta0.size() != p) throw ShapeError("theta0 has wrong length");

  const auto m = static_cast<Eigen::Index>(points.size());
  const Eigen::VectorXd y = log_errors(points);

  auto residual = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& r) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double yh = family_eval_unchecked(family, theta, n_switch,
                                              static_cast<double>(points[i].n));
      r[i] = y[i] - yh;
    }
    return r.allFinite();
  };
  auto jacobian_at = [&](const Eigen::VectorXd& theta) {
    Eigen::MatrixXd jac(m, p);
    for (Eigen::Index i = 0; i < m; ++i) {
      jac.row(i) = family_jacobian(family, theta, n_switch, static_cast<double>(points[i].n));
    }
    return jac;
  };

  // The power law's offset is an asymptotic error, so it cannot go negative;
  // trial steps are projected back onto the feasible set.
  auto project = [&](Eigen::VectorXd& t) {
    if (family == PredictorFamily::power_law3 && t[2] < 0.0) t[2] = 0.0;
  };

  Eigen::VectorXd theta = theta0;
  project(theta);
  Eigen::VectorXd r(m), r_try(m);
  if (!residual(theta, r)) {
    throw NumericalError("non-finite residual at the initial parameters");
  }
  double cost = r.squaredNorm();

  FitResult fit;
  fit.family = family;
  fit.n_switch = family == PredictorFamily::ppl ? n_switch : std::nullopt;
  fit.fit_n_min = static_cast<double>(points.front().n);
  fit.fit_n_max = static_cast<double>(points.back().n);
  fit.accepted_costs.push_back(cost);

  double lambda = options.lambda0;
  int nonfinite_rejects = 0;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    fit.iterations = iter;
    const Eigen::MatrixXd jac = jacobian_at(theta);
    const Eigen::VectorXd grad = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() < options.gtol) {
      fit.converged = true;
      break;
    }
    // Damped step via QR of the augmented system [J; sqrt(lambda) I] to avoid
    // squaring the condition number through the normal equations.
    Eigen::MatrixXd augmented(m + p, p);
    augmented.topRows(m) = jac;
    augmented.bottomRows(p) =
        std::sqrt(lambda) * Eigen::MatrixXd::Identity(p, p);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + p);
    rhs.head(m) = r;
    const Eigen::VectorXd step = augmented.colPivHouseholderQr().solve(rhs);
    Eigen::VectorXd theta_try = theta + step;
    project(theta_try);
    const bool finite = residual(theta_try, r_try);
    const double cost_try = finite ? r_try.squaredNorm() : 0.0;
    if (finite && cost_try <= cost) {
      theta = theta_try;
      r.swap(r_try);
      cost = cost_try;
      fit.accepted_costs.push_back(cost);
      lambda = std::max(lambda / 10.0, 1e-14);
      nonfinite_rejects = 0;
      if (step.norm() < options.xtol * (theta.norm() + options.xtol)) {
        fit.converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (!finite) ++nonfinite_rejects;
      if (lambda > 1e15) {
        if (nonfinite_rejects > 0) {
          throw NumericalError("non-finite residual stalled the fit at iteration " +
                               std::to_string(iter));
        }
        break;  // no further progress possible; report converged = false
      }
    }
  }

  {
    // Final undamped Gauss-Newton polish; lands exactly on the optimum for
    // models linear in theta, guarded by a cost decrease otherwise.
    const Eigen::MatrixXd jac = jacobian_at(theta);
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(r);
    Eigen::VectorXd theta_try = theta + step;
    project(theta_try);
    if (residual(theta_try, r_try)) {
      const double cost_try = r_try.squaredNorm();
      // near the optimum the cost surface is flat to machine precision, so
      // allow a 1-ulp-scale slack when judging the polish step
      if (cost_try <= cost * (1.0 + 1e-12)) {
        theta = theta_try;
        r.swap(r_try);
        cost = std::min(cost, cost_try);
        fit.accepted_costs.push_back(cost);
      }
    }
  }

  fit.params = theta;
  fit.residual_norm = std::sqrt(cost);
  auto cov = param_covariance(jacobian_at(theta));
  fit.degenerate = cov.degenerate;
  fit.covariance = std::move(cov.matrix);
  if (options.scale_covariance && m > p) {
    fit.covariance *= cost / static_cast<double>(m - p);
  }
  if (fit.degenerate) {
    log::info(std::string(to_string(family)) +
              " fit has singular J^T J; covariance is a pseudo-inverse");
  }
  check_monotone_warning(fit);
  return fit;
}

Eigen::VectorXd default_init(PredictorFamily family, std::span<const PerformancePoint> points,
                             std::optional<double> n_switch) {
  (void)n_switch;
  if (points.empty()) throw FitError("no points to initialize from");
  const auto [intercept, slope] = log_space_line(points, /*y_is_score=*/false);
  switch (family) {
    case PredictorFamily::log_linear: {
      Eigen::VectorXd t(2);
      t << intercept, slope;
      return t;
    }
    case PredictorFamily::ppl: {
      Eigen::VectorXd t(3);
      t << intercept, slope, 0.0;
      return t;
    }
    case PredictorFamily::power_law3: {
      Eigen::VectorXd t(3);
      t << std::exp(intercept), slope, 0.0;
      return t;
    }
    case PredictorFamily::logarithmic: {
      const auto [b, a] = log_space_line(points, /*y_is_score=*/true);
      Eigen::VectorXd t(2);
      t << a, b;
      return t;
    }
    case PredictorFamily::arctan: {
      // Two-point heuristic through the first and last points with t3 = 0.
      const auto& first = points.front();
      const auto& last = points.back();
      const double g1 = std::tan((M_PI / 2.0) * first.v);
      const double g2 = std::tan((M_PI / 2.0) * last.v);
      double t1 = 0.0, t2 = 0.0;
      if (last.n > first.n) {
        t1 = (g2 - g1) / ((M_PI / 2.0) * static_cast<double>(last.n - first.n));
        t2 = g1 - t1 * (M_PI / 2.0) * static_cast<double>(first.n);
      } else {
        t2 = g1;
      }
      Eigen::VectorXd t(3);
      t << t1, t2, 0.0;
      return t;
    }
    case PredictorFamily::algebraic: {
      const auto& first = points.front();
      const auto& last = points.back();
      const double t3 = std::max(0.0, 0.5 * (1.0 - last.v));
      const double e1 = 1.0 - first.v - t3;
      const double e2 = 1.0 - last.v - t3;
      if (e1 > 1e-9 && e2 > 1e-9 && last.n > first.n) {
        const double g1 = 1.0 / e1;
        const double g2 = 1.0 / e2;
        const double s = (g2 - g1) / static_cast<double>(last.n - first.n);
        const double c = g1 - s * static_cast<double>(first.n);
        if (c > 1e-9 && s >= 0.0) {
          Eigen::VectorXd t(3);
          t << 1.0 / c, s / c, t3;
          return t;
        }
      }
      Eigen::VectorXd t(3);
      t << 1.0 - first.v, 0.1, 0.0;
      return t;
    }
  }
  throw DomainError("unknown family");
}

FitResult fit_family(PredictorFamily family, std::span<const PerformancePoint> points,
                     std::optional<double> n_switch, const FitOptions& options) {
  return lm_fit(family, points, default_init(family, points, n_switch), n_switch, options);
}

FitResult fit_ppl(std::span<const PerformancePoint> points, double n_switch,
                  const FitOptions& options) {
  return fit_family(PredictorFamily::ppl, points, n_switch, options);
}

std::string serialize_fit(const FitResult& fit) {
  std::ostringstream out;
  out.precision(17);
  out << "family=" << to_string(fit.family) << "\n";
  out << "params=";
  for (Eigen::Index i = 0; i < fit.params.size(); ++i) {
    if (i) out << ",";
    out << fit.params[i];
  }
  out << "\n";
  if (fit.n_switch) out << "n_switch=" << *fit.n_switch << "\n";
  out << "fit_range=" << fit.fit_n_min << "," << fit.fit_n_max << "\n";
  out << "residual_norm=" << fit.residual_norm << "\n";
  out << "converged=" << (fit.converged ? 1 : 0) << "\n";
  out << "degenerate=" << (fit.degenerate ? 1 : 0) << "\n";
  out << "iterations=" << fit.iterations << "\n";
  return out.str();
}

}  // namespace scalelaw
