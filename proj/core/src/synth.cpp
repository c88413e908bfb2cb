#include "scalelaw/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scalelaw/errors.hpp"
#include "scalelaw/predictors.hpp"
#include "scalelaw/rng.hpp"

namespace scalelaw {

LearningCurve gen_curve(const SynthSpec& spec) {
  if (spec.grid.empty()) throw DomainError("synth grid is empty");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (spec.grid[i] < 1) throw DomainError("synth grid entries must be >= 1");
    if (i > 0 && spec.grid[i] <= spec.grid[i - 1]) {
      throw DomainError("synth grid must be strictly increasing");
    }
  }
  if (!(spec.n_switch > 0.0)) throw DomainError("synth switch point must be positive");
  if (spec.noise_sd < 0.0) throw DomainError("noise_sd must be >= 0");

  Rng rng(spec.seed);
  const PplParams params{spec.theta, spec.n_switch};
  std::vector<PerformancePoint> points;
  points.reserve(spec.grid.size());
  for (const auto n : spec.grid) {
    double y = ppl_eval(params, static_cast<double>(n));
    if (spec.noise_sd > 0.0) y += rng.normal(0.0, spec.noise_sd);
    if (y >= 0.0) {
      std::ostringstream msg;
      msg << "generated score out of (0,1) at n=" << n << " (log-error " << y << ")";
      throw DomainError(msg.str());
    }
    points.push_back({n, -std::expm1(y)});
  }
  auto curve = make_curve(spec.name, spec.task, spec.classes, std::move(points));
  if (spec.fit_count > 0) {
    if (spec.fit_count > curve.points.size()) throw RangeError("fit_count exceeds grid size");
    curve.fit_count = spec.fit_count;
  }
  return curve;
}

SynthDictionary gen_dictionary(int count, const ParamRanges& ranges, std::uint64_t seed) {
  if (count < 2) throw DomainError("dictionary needs at least 2 curves");
  if (ranges.shots.empty() || !(ranges.eval_frac_step > 0.0) ||
      !(ranges.eval_frac_lo > 0.0)) {
    throw DomainError("empty synth grids");
  }

  SynthDictionary result;
  std::vector<LearningCurve> curves;
  curves.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    constexpr int kMaxRetries = 100;
    bool done = false;
    for (int attempt = 0; attempt < kMaxRetries && !done; ++attempt) {
      SynthSpec spec;
      spec.theta[0] = rng.uniform(ranges.theta1_lo, ranges.theta1_hi);
      spec.theta[1] = rng.uniform(ranges.theta2_lo, ranges.theta2_hi);
      const double classes_raw = rng.log_uniform(static_cast<double>(ranges.classes_lo),
                                                 static_cast<double>(ranges.classes_hi));
      spec.classes = std::clamp(static_cast<int>(std::llround(classes_raw)),
                                ranges.classes_lo, ranges.classes_hi);
      spec.n_switch = spec.classes * rng.log_uniform(ranges.n_over_c_lo, ranges.n_over_c_hi);
      if (ranges.couple_tail) {
        const double tail_slope = rng.uniform(ranges.tail_slope_lo, ranges.tail_slope_hi);
        spec.theta[2] = (tail_slope - spec.theta[1]) / (2.0 * std::log(spec.n_switch));
      } else {
        spec.theta[2] = rng.uniform(ranges.theta3_lo, ranges.theta3_hi);
      }
      spec.noise_sd = ranges.noise_sd;
      spec.seed = rng.next_u64();
      if (spec.theta[2] < ranges.theta3_lo || spec.theta[2] > ranges.theta3_hi) {
        continue;  // curvature outside the admissible band; resample
      }

      const std::int64_t largest_shot =
          static_cast<std::int64_t>(ranges.shots.back()) * spec.classes;
      const double budget =
          spec.classes * rng.log_uniform(ranges.budget_over_c_lo, ranges.budget_over_c_hi);
      for (const int s : ranges.shots) {
        spec.grid.push_back(static_cast<std::int64_t>(s) * spec.classes);
      }
      for (double frac = ranges.eval_frac_lo; frac < 1.0 + 1e-9;
           frac += ranges.eval_frac_step) {
        const auto n = static_cast<std::int64_t>(std::llround(budget * frac));
        if (n > largest_shot && (spec.grid.empty() || n > spec.grid.back())) {
          spec.grid.push_back(n);
        }
      }
      spec.fit_count = ranges.shots.size();
      if (spec.grid.size() < spec.fit_count + 3) continue;  // too few eval points; resample

      std::ostringstream name;
      name << "synth-" << i;
      spec.name = name.str();

      try {
        curves.push_back(gen_curve(spec));
        result.specs.push_back(std::move(spec));
        done = true;
      } catch (const DomainError&) {
        // infeasible draw (noise pushed a score out of range); resample
      }
    }
    if (!done) {
      throw DomainError("could not draw a feasible curve after " +
                        std::to_string(kMaxRetries) + " attempts");
    }
  }
  result.dict = make_dictionary(Task::classification, std::move(curves));
  return result;
}

}  // namespace scalelaw
