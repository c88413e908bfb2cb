#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "scalelaw/curve_data.hpp"

namespace scalelaw {

// Meta features of a curve's m fit points: [log n_1..log n_m, log v(n_1)..
// log v(n_m), log C], length 2m+1, ordering fixed.
using MetaFeatures = std::vector<double>;

MetaFeatures extract_features(std::span<const PerformancePoint> fit_points, int classes);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf mean
};

struct RegressionTree {
  std::vector<TreeNode> nodes;
  double predict(std::span<const double> x) const;
};

struct ForestConfig {
  int n_trees = 100;
  int max_depth = -1;  // -1 = unlimited; 0 makes every tree a stump
  int min_leaf = 2;
  double feature_fraction = 1.0 / 3.0;
  bool bootstrap = true;
  std::uint64_t seed = 0;  // callers must set this explicitly
};

struct MetaModel {
  std::vector<RegressionTree> trees;
  ForestConfig config;
  int feature_count = 0;
  int fit_count = 0;  // m used to build the features
  std::string target_transform = "log-n-over-classes";
};

// CART regression forest: each tree grown on a bootstrap sample (when
// enabled), splits maximize variance reduction over a random feature subset,
// leaves hold the mean target. Fully deterministic given the seed, with one
// PRNG substream per tree.
MetaModel rf_train(const std::vector<MetaFeatures>& features, const std::vector<double>& targets,
                   const ForestConfig& config);

// Mean of the per-tree leaf values (the regressed transform of the target).
double rf_predict_raw(const MetaModel& model, std::span<const double> x);

// Predicted switch point: classes * exp(raw prediction), clamped to
// [n_1, 1e4 * n_m] from the query's own features.
double rf_predict(const MetaModel& model, std::span<const double> x);

// Switch-point ground truth: over candidates N in {n_1..n_M}, fit the PPL on
// the m fit points, score mean prediction error on the eval points, return
// the argmin (ties to the smallest N).
double ground_truth_switch(const LearningCurve& curve);

// Greedy baseline: over candidates N in {n_1..n_m}, fit on the first m-1 fit
// points, score absolute error on the m-th; argmin, ties to the smallest N.
double brute_force_switch(std::span<const PerformancePoint> fit_points);

// The switch point that reduces the PPL to its linear form: the smallest n.
double linear_switch(std::span<const PerformancePoint> points);

struct LooResult {
  double n_hat = 0.0;
  double n_star = 0.0;
};

// Leave-one-out: the model predicting curve X is trained on every other
// curve's (features, ground-truth switch) pairs.
std::map<std::string, LooResult> loo_train_predict(const CurveDictionary& dict,
                                                   const ForestConfig& config);

// Versioned self-describing text format; load rejects unknown versions.
std::string serialize_metamodel(const MetaModel& model);
MetaModel parse_metamodel(std::string_view text);

}  // namespace scalelaw
