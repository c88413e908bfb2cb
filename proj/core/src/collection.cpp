#include "scalelaw/collection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scalelaw/errors.hpp"
#include "scalelaw/log.hpp"
#include "scalelaw/metrics.hpp"
#include "scalelaw/uncertainty.hpp"

namespace scalelaw {

namespace {

// Pool-adjacent-violators: smallest-squared-change non-decreasing sequence.
std::vector<double> isotonic_non_decreasing(const std::vector<double>& values) {
  struct Block {
    double sum;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (const double v : values) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      auto& prev = blocks[blocks.size() - 2];
      auto& last = blocks.back();
      if (prev.sum / prev.count <= last.sum / last.count) break;
      prev.sum += last.sum;
      prev.count += last.count;
      blocks.pop_back();
    }
  }
  std::vector<double> result;
  result.reserve(values.size());
  for (const auto& b : blocks) {
    const double mean = b.sum / static_cast<double>(b.count);
    result.insert(result.end(), b.count, mean);
  }
  return result;
}

void validate_monotone_probe(const Oracle& oracle, double n_lo) {
  constexpr int kProbePoints = 33;
  double prev = oracle.true_score(n_lo);
  const double t_lo = std::log(n_lo);
  const double t_hi = std::log(oracle.max_n);
  for (int i = 1; i < kProbePoints; ++i) {
    const double n = std::exp(t_lo + (t_hi - t_lo) * i / (kProbePoints - 1));
    const double cur = oracle.true_score(n);
    if (cur < prev - 1e-12) {
      throw DomainError("oracle scores are not non-decreasing near n=" + std::to_string(n));
    }
    prev = cur;
  }
}

double resolve_switch(const CollectionPolicy& policy,
                      std::span<const PerformancePoint> init_points, int classes) {
  switch (policy.switch_source) {
    case SwitchSource::linear:
      return linear_switch(init_points);
    case SwitchSource::brute_force:
      return brute_force_switch(init_points);
    case SwitchSource::fixed:
      if (!(policy.fixed_n_switch > 0.0)) throw DomainError("fixed switch point must be > 0");
      return policy.fixed_n_switch;
    case SwitchSource::meta: {
      if (!policy.meta_model) throw DomainError("meta switch source needs a meta-model");
      const auto features = extract_features(init_points, classes);
      return rf_predict(*policy.meta_model, features);
    }
  }
  throw DomainError("unknown switch source");
}

}  // namespace

Oracle oracle_from_table(const LearningCurve& curve) {
  if (curve.points.size() < 2) throw DomainError("table oracle needs at least 2 points");
  std::vector<double> scores;
  scores.reserve(curve.points.size());
  for (const auto& p : curve.points) scores.push_back(p.v);
  if (!std::is_sorted(scores.begin(), scores.end())) {
    log::warn("oracle table for '" + curve.name + "' is not monotone; applying isotonic repair");
    scores = isotonic_non_decreasing(scores);
  }

  std::vector<double> log_n, log_err;
  log_n.reserve(scores.size());
  log_err.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    log_n.push_back(std::log(static_cast<double>(curve.points[i].n)));
    log_err.push_back(std::log1p(-scores[i]));
  }

  Oracle oracle;
  oracle.max_n = static_cast<double>(curve.points.back().n);
  oracle.true_score = [log_n, log_err](double n) {
    const double t = std::clamp(std::log(std::max(n, 1.0)), log_n.front(), log_n.back());
    const auto it = std::upper_bound(log_n.begin(), log_n.end(), t);
    const std::size_t hi = std::min(static_cast<std::size_t>(it - log_n.begin()),
                                    log_n.size() - 1);
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    double y;
    if (hi == lo || log_n[hi] == log_n[lo]) {
      y = log_err[lo];
    } else {
      const double w = (t - log_n[lo]) / (log_n[hi] - log_n[lo]);
      y = log_err[lo] + w * (log_err[hi] - log_err[lo]);
    }
    return -std::expm1(y);
  };
  validate_monotone_probe(oracle, static_cast<double>(curve.points.front().n));
  return oracle;
}

Oracle oracle_from_ppl(const PplParams& params, double max_n) {
  if (!(max_n >= 1.0)) throw DomainError("oracle max_n must be >= 1");
  Oracle oracle;
  oracle.max_n = max_n;
  oracle.true_score = [params, max_n](double n) {
    return -std::expm1(ppl_eval(params, std::clamp(n, 1.0, max_n)));
  };
  validate_monotone_probe(oracle, 1.0);
  return oracle;
}

std::optional<std::int64_t> required_samples(const Oracle& oracle, double v_target) {
  if (!(v_target > 0.0 && v_target < 1.0)) throw DomainError("target score must lie in (0,1)");
  const auto max_n = static_cast<std::int64_t>(std::floor(oracle.max_n));
  if (oracle.true_score(static_cast<double>(max_n)) < v_target) return std::nullopt;
  // Integer bisection; invariant score(hi) >= target, score(lo) < target.
  std::int64_t lo = 0, hi = max_n;
  if (oracle.true_score(1.0) >= v_target) return 1;
  lo = 1;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (oracle.true_score(static_cast<double>(mid)) >= v_target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

CollectionTrace simulate_collection(const Oracle& oracle,
                                    std::span<const PerformancePoint> init_points, int classes,
                                    double v_target, const CollectionPolicy& policy,
                                    std::uint64_t seed) {
  if (!(v_target > 0.0 && v_target < 1.0)) throw DomainError("target score must lie in (0,1)");
  if (policy.max_steps < 1) throw DomainError("max_steps must be >= 1");
  if (init_points.empty()) throw DomainError("no initial points");
  if (policy.tau && !(*policy.tau > 0.0 && *policy.tau < 1.0)) {
    throw DomainError("tau must lie in (0,1)");
  }

  CollectionTrace trace;
  trace.v_target = v_target;
  trace.seed = seed;

  std::vector<PerformancePoint> points(init_points.begin(), init_points.end());
  double current_max = static_cast<double>(points.back().n);
  const double n_cap = policy.n_cap > 0.0 ? policy.n_cap : 1e4 * current_max;

  if (policy.family == PredictorFamily::ppl) {
    trace.n_switch_used = resolve_switch(policy, init_points, classes);
  }

  for (int k = 1; k <= policy.max_steps; ++k) {
    CollectionStep step;
    step.k = k;
    step.fit = policy.family == PredictorFamily::ppl
                   ? fit_ppl(points, trace.n_switch_used, policy.fit_options)
                   : fit_family(policy.family, points, std::nullopt, policy.fit_options);

    double proposal;
    bool reached;
    if (policy.tau) {
      // Eq-9 style step: min of the mean inversion and the confidence cap.
      std::optional<double> n_mean;
      try {
        n_mean = invert_mean(step.fit, v_target, n_cap);
      } catch (const DomainError& e) {
        log::warn(std::string("mean inversion failed at step ") + std::to_string(k) + ": " +
                  e.what());
        n_mean = std::nullopt;
      }
      if (n_mean) {
        proposal = *n_mean;
        reached = true;
      } else {
        proposal = n_cap;
        reached = false;
        step.cap = StepCap::n_cap;
      }
      const auto sd_cap = invert_sd(step.fit, *policy.tau / 3.0, current_max, n_cap);
      if (sd_cap.at_floor) {
        // Budget exceeded even at the smallest admissible request; the
        // growth floor below turns this into a minimal monotone step.
        log::info("confidence budget binds at the floor on step " + std::to_string(k));
        if (current_max < proposal) {
          proposal = current_max;
          reached = false;
          step.cap = StepCap::sigma;
        }
      } else if (sd_cap.n < proposal) {
        proposal = std::floor(sd_cap.n);
        reached = false;
        step.cap = StepCap::sigma;
      }
    } else {
      // Plain policy: deterministic inversion of the fitted predictor.
      std::optional<double> n_inv;
      try {
        n_inv = family_inverse(step.fit.family, step.fit.params, step.fit.n_switch, v_target,
                               InverseOptions{current_max, n_cap, 1e-6, 64});
      } catch (const DomainError& e) {
        log::warn(std::string("inversion failed at step ") + std::to_string(k) + ": " +
                  e.what());
        n_inv = std::nullopt;
      }
      if (n_inv) {
        proposal = *n_inv;
        reached = true;
      } else {
        proposal = n_cap;
        reached = false;
        step.cap = StepCap::n_cap;
      }
    }

    auto n_request = static_cast<std::int64_t>(std::ceil(proposal - 1e-9));
    n_request = std::max<std::int64_t>(n_request, 1);
    if (!reached && static_cast<double>(n_request) <= current_max) {
      // The paper never covers a shrinking request; force a minimal
      // monotone step to keep the loop well-founded.
      n_request = static_cast<std::int64_t>(std::ceil(1.05 * current_max));
      step.cap = StepCap::growth_floor;
    }
    if (static_cast<double>(n_request) > n_cap) {
      n_request = static_cast<std::int64_t>(std::floor(n_cap));
      if (step.cap == StepCap::none) step.cap = StepCap::n_cap;
    }
    step.n_request = n_request;
    step.predicted_reached = reached;
    if (policy.tau) {
      step.sigma_v = band_at(step.fit, static_cast<double>(n_request)).sigma_v;
    }

    if (reached) {
      trace.steps.push_back(std::move(step));
      trace.stopping_index = k;
      trace.n_final = n_request;
      trace.stop_cause = StopCause::predicted;
      break;
    }

    const double measured = oracle.true_score(static_cast<double>(n_request));
    step.v_measured = measured;
    trace.steps.push_back(std::move(step));
    points.push_back({n_request, measured});
    current_max = static_cast<double>(n_request);

    if (measured >= v_target) {
      trace.stopping_index = k;
      trace.n_final = n_request;
      trace.stop_cause = StopCause::measured;
      break;
    }
    if (k == policy.max_steps) {
      trace.stopping_index = k;
      trace.n_final = n_request;
      trace.stop_cause = StopCause::exhausted;
    }
  }

  trace.n_star = required_samples(oracle, v_target);
  if (trace.n_star) {
    trace.e_data = data_estimation_error(trace.n_final, *trace.n_star);
  } else {
    log::warn("target score is unreachable under the oracle; e_data undefined");
  }
  return trace;
}

const char* to_string(StepCap cap) {
  switch (cap) {
    case StepCap::none: return "none";
    case StepCap::sigma: return "sigma";
    case StepCap::growth_floor: return "growth_floor";
    case StepCap::n_cap: return "n_cap";
  }
  return "?";
}

const char* to_string(StopCause cause) {
  switch (cause) {
    case StopCause::predicted: return "predicted";
    case StopCause::measured: return "measured";
    case StopCause::exhausted: return "exhausted";
  }
  return "?";
}

std::string serialize_trace_csv(const CollectionTrace& trace) {
  std::ostringstream out;
  out.precision(12);
  out << "k,n_request,v_measured,capped_reason\n";
  for (const auto& step : trace.steps) {
    out << step.k << "," << step.n_request << ",";
    if (step.v_measured) out << *step.v_measured;
    out << "," << to_string(step.cap) << "\n";
  }
  out << "# K=" << trace.stopping_index << "\n";
  out << "# n_final=" << trace.n_final << "\n";
  out << "# n_star=" << (trace.n_star ? std::to_string(*trace.n_star) : "unreachable") << "\n";
  out << "# e_data=" << (trace.e_data ? format_e_data(*trace.e_data) : "undefined") << "\n";
  out << "# stop_cause=" << to_string(trace.stop_cause) << "\n";
  return out.str();
}

}  // namespace scalelaw
