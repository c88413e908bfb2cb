#pragma once

#include <Eigen/Core>
#include <optional>
#include <string_view>
#include <utility>

namespace scalelaw {

// Every family is evaluated in log-error space: y(n) = log(1 - v_hat(n)),
// natural logarithm throughout.
enum class PredictorFamily {
  ppl,          // quadratic-then-linear in log-log space with switch point N
  power_law3,   // 1 - v = t1 * n^t2 + t3
  log_linear,   // y = t1 + t2 * log n  (power law with zero asymptote)
  arctan,       // v = (2/pi) * atan(t1 * (pi/2) * n + t2) - t3
  algebraic,    // v = 1 - t3 - t1 / (1 + t2 * n)
  logarithmic,  // v = t2 + t1 * log n
};

int param_count(PredictorFamily family);
PredictorFamily parse_family(std::string_view text);
const char* to_string(PredictorFamily family);

// Score-space clip applied to the arctan/algebraic/logarithmic forms before
// the log-error transform.
inline constexpr double kScoreClip = 1e-6;

struct PplParams {
  Eigen::Vector3d theta;  // (t1, t2, t3) of the quadratic branch
  double n_switch = 1.0;  // N > 0
};

// Linear-branch coefficients (theta4, theta5) implied by continuity and
// differentiability at the switch point.
std::pair<double, double> ppl_derived_params(const Eigen::Vector3d& theta, double n_switch);

double ppl_eval(const PplParams& params, double n);

// d y / d theta at fixed N; equals alpha_vec(N, n) since the model is linear
// in theta once N is held fixed.
Eigen::Vector3d ppl_jacobian(const PplParams& params, double n);

// y(n) = log(1 - v_hat(n)) under the given family. PPL requires n_switch.
// Throws RangeError when the power-law error term leaves (0, 1).
double family_eval(PredictorFamily family, const Eigen::VectorXd& params,
                   std::optional<double> n_switch, double n);

// Same evaluation but returns NaN instead of throwing; used inside solvers.
double family_eval_unchecked(PredictorFamily family, const Eigen::VectorXd& params,
                             std::optional<double> n_switch, double n) noexcept;

// Predicted score v_hat(n) = 1 - exp(y).
double family_score(PredictorFamily family, const Eigen::VectorXd& params,
                    std::optional<double> n_switch, double n);

Eigen::VectorXd family_jacobian(PredictorFamily family, const Eigen::VectorXd& params,
                                std::optional<double> n_switch, double n);

struct InverseOptions {
  double n_lo = 1.0;
  double n_cap = 0.0;        // required; callers usually use 1e4 * largest fitted n
  double rel_tol = 1e-6;     // relative tolerance in n
  int grid_points = 64;      // monotonicity-validation grid
};

// Smallest n in [n_lo, n_cap] with v_hat(n) >= v_target, by bisection on
// log n; nullopt when the target is not reached by n_cap. Throws DomainError
// if the fit is non-monotone on the searched range before the crossing.
std::optional<double> family_inverse(PredictorFamily family, const Eigen::VectorXd& params,
                                     std::optional<double> n_switch, double v_target,
                                     const InverseOptions& options);

}  // namespace scalelaw
