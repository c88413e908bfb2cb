#include "scalelaw/metamodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scalelaw/errors.hpp"
#include "scalelaw/fitting.hpp"
#include "scalelaw/log.hpp"
#include "scalelaw/metrics.hpp"
#include "scalelaw/rng.hpp"

namespace scalelaw {

namespace {

constexpr double kTieTolerance = 1e-12;  // argmin ties resolve to the smallest N

// Permutation-invariant mean: sum in sorted order so row order cannot leak
// into leaf values through floating-point rounding.
double sorted_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = std::numeric_limits<double>::infinity();  // sse_left + sse_right
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<MetaFeatures>& features, const std::vector<double>& targets,
              const ForestConfig& config, Rng& rng)
      : features_(features), targets_(targets), config_(config), rng_(rng) {}

  RegressionTree build(std::vector<int> indices) {
    tree_.nodes.clear();
    grow(std::move(indices), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<int> indices, int depth) {
    const int node_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    const bool depth_capped = config_.max_depth >= 0 && depth >= config_.max_depth;
    if (depth_capped || indices.size() < 2 * static_cast<std::size_t>(config_.min_leaf)) {
      make_leaf(node_id, indices);
      return node_id;
    }
    const SplitChoice split = best_split(indices);
    if (!split.found) {
      make_leaf(node_id, indices);
      return node_id;
    }

    std::vector<int> left, right;
    left.reserve(indices.size());
    right.reserve(indices.size());
    for (const int idx : indices) {
      (features_[idx][split.feature] <= split.threshold ? left : right).push_back(idx);
    }
    indices.clear();
    indices.shrink_to_fit();

    tree_.nodes[node_id].feature = split.feature;
    tree_.nodes[node_id].threshold = split.threshold;
    const int left_id = grow(std::move(left), depth + 1);
    const int right_id = grow(std::move(right), depth + 1);
    tree_.nodes[node_id].left = left_id;
    tree_.nodes[node_id].right = right_id;
    return node_id;
  }

  void make_leaf(int node_id, const std::vector<int>& indices) {
    std::vector<double> values;
    values.reserve(indices.size());
    for (const int idx : indices) values.push_back(targets_[idx]);
    tree_.nodes[node_id].value = sorted_mean(std::move(values));
  }

  std::vector<int> draw_features() {
    const int d = static_cast<int>(features_.front().size());
    const int k = std::clamp(static_cast<int>(std::ceil(config_.feature_fraction * d)), 1, d);
    std::vector<int> all(d);
    for (int i = 0; i < d; ++i) all[i] = i;
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(rng_.below(static_cast<std::uint64_t>(d - i)));
      std::swap(all[i], all[j]);
    }
    all.resize(k);
    // evaluate candidates in ascending feature order so exact score ties
    // resolve by feature index, then threshold
    std::sort(all.begin(), all.end());
    return all;
  }

  SplitChoice best_split(const std::vector<int>& indices) {
    SplitChoice best;
    const auto candidate_features = draw_features();
    const std::size_t count = indices.size();
    std::vector<std::pair<double, double>> items(count);  // (feature value, target)
    for (const int feature : candidate_features) {
      for (std::size_t i = 0; i < count; ++i) {
        items[i] = {features_[indices[i]][feature], targets_[indices[i]]};
      }
      // sorting by (value, target) keeps prefix sums independent of row order
      std::sort(items.begin(), items.end());
      double total = 0.0, total_sq = 0.0;
      for (const auto& [value, target] : items) {
        total += target;
        total_sq += target * target;
      }
      double left_sum = 0.0, left_sq = 0.0;
      for (std::size_t i = 0; i + 1 < count; ++i) {
        left_sum += items[i].second;
        left_sq += items[i].second * items[i].second;
        if (items[i].first == items[i + 1].first) continue;  // no boundary here
        const auto left_count = static_cast<double>(i + 1);
        const auto right_count = static_cast<double>(count - i - 1);
        if (left_count < config_.min_leaf || right_count < config_.min_leaf) continue;
        const double sse_left = left_sq - left_sum * left_sum / left_count;
        const double right_sum = total - left_sum;
        const double sse_right = (total_sq - left_sq) - right_sum * right_sum / right_count;
        const double score = sse_left + sse_right;
        if (score < best.score) {
          best.found = true;
          best.feature = feature;
          best.threshold = (items[i].first + items[i + 1].first) / 2.0;
          best.score = score;
        }
      }
    }
    return best;
  }

  const std::vector<MetaFeatures>& features_;
  const std::vector<double>& targets_;
  const ForestConfig& config_;
  Rng& rng_;
  RegressionTree tree_;
};

}  // namespace

MetaFeatures extract_features(std::span<const PerformancePoint> fit_points, int classes) {
  if (fit_points.empty()) throw DomainError("no fit points for meta features");
  if (classes < 1) throw DomainError("classes must be >= 1");
  MetaFeatures features;
  features.reserve(2 * fit_points.size() + 1);
  for (const auto& p : fit_points) features.push_back(std::log(static_cast<double>(p.n)));
  for (const auto& p : fit_points) {
    if (!(p.v > 0.0)) throw DomainError("score must be positive for meta features");
    features.push_back(std::log(p.v));
  }
  features.push_back(std::log(static_cast<double>(classes)));
  return features;
}

double RegressionTree::predict(std::span<const double> x) const {
  int node = 0;
  for (;;) {
    const TreeNode& cur = nodes[static_cast<std::size_t>(node)];
    if (cur.feature < 0) return cur.value;
    node = x[static_cast<std::size_t>(cur.feature)] <= cur.threshold ? cur.left : cur.right;
  }
}

MetaModel rf_train(const std::vector<MetaFeatures>& features, const std::vector<double>& targets,
                   const ForestConfig& config) {
  if (features.size() != targets.size()) throw ShapeError("features/targets length mismatch");
  if (features.empty()) throw FitError("rf_train needs at least one sample");
  if (config.n_trees < 1 || config.min_leaf < 1) throw DomainError("bad forest config");
  if (!(config.feature_fraction > 0.0 && config.feature_fraction <= 1.0)) {
    throw DomainError("feature_fraction must lie in (0,1]");
  }
  const std::size_t d = features.front().size();
  for (const auto& row : features) {
    if (row.size() != d) throw ShapeError("ragged feature matrix");
    for (const double v : row) {
      if (!std::isfinite(v)) throw NumericalError("non-finite feature");
    }
  }
  for (const double t : targets) {
    if (!std::isfinite(t)) throw NumericalError("non-finite target");
  }

  MetaModel model;
  model.config = config;
  model.feature_count = static_cast<int>(d);
  model.trees.reserve(static_cast<std::size_t>(config.n_trees));
  const auto sample_count = features.size();
  for (int t = 0; t < config.n_trees; ++t) {
    Rng rng(config.seed, static_cast<std::uint64_t>(t));
    std::vector<int> indices;
    indices.reserve(sample_count);
    if (config.bootstrap) {
      for (std::size_t i = 0; i < sample_count; ++i) {
        indices.push_back(static_cast<int>(rng.below(sample_count)));
      }
    } else {
      for (std::size_t i = 0; i < sample_count; ++i) indices.push_back(static_cast<int>(i));
    }
    TreeBuilder builder(features, targets, config, rng);
    model.trees.push_back(builder.build(std::move(indices)));
  }
  return model;
}

double rf_predict_raw(const MetaModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.feature_count) {
    throw ShapeError("feature length " + std::to_string(x.size()) + " does not match model (" +
                     std::to_string(model.feature_count) + ")");
  }
  double sum = 0.0;
  for (const auto& tree : model.trees) sum += tree.predict(x);
  return sum / static_cast<double>(model.trees.size());
}

double rf_predict(const MetaModel& model, std::span<const double> x) {
  const double raw = rf_predict_raw(model, x);
  const std::size_t m = (x.size() - 1) / 2;
  const double classes = std::exp(x[x.size() - 1]);
  const double n_first = std::exp(x[0]);
  const double n_last = std::exp(x[m - 1]);
  const double predicted = classes * std::exp(raw);
  return std::clamp(predicted, n_first, 1e4 * n_last);
}

double ground_truth_switch(const LearningCurve& curve) {
  const auto fit_pts = curve.fit_points();
  const auto eval_pts = curve.eval_points();
  if (eval_pts.empty()) throw DomainError("ground-truth switch needs evaluation points");

  double best_n = 0.0;
  double best_err = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& candidate : curve.points) {
    try {
      const FitResult fit = fit_ppl(fit_pts, static_cast<double>(candidate.n));
      std::vector<Prediction> preds;
      preds.reserve(eval_pts.size());
      for (const auto& p : eval_pts) {
        preds.push_back({p.n, fit.eval_score(static_cast<double>(p.n))});
      }
      const double err = mean_prediction_error(eval_pts, preds);
      if (!any || err < best_err - kTieTolerance) {
        best_err = std::min(err, best_err);
        best_n = static_cast<double>(candidate.n);
        any = true;
      }
    } catch (const Error& e) {
      log::warn("switch candidate N=" + std::to_string(candidate.n) + " skipped: " + e.what());
    }
  }
  if (!any) throw FitError("every switch candidate failed for curve '" + curve.name + "'");
  return best_n;
}

double brute_force_switch(std::span<const PerformancePoint> fit_points) {
  if (fit_points.size() < 3) {
    throw FitError("brute-force switch needs at least 3 fit points");
  }
  const auto sub = fit_points.subspan(0, fit_points.size() - 1);
  const auto& held_out = fit_points.back();

  double best_n = 0.0;
  double best_err = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& candidate : fit_points) {
    try {
      const FitResult fit = fit_ppl(sub, static_cast<double>(candidate.n));
      const double err = std::abs(held_out.v - fit.eval_score(static_cast<double>(held_out.n)));
      if (!any || err < best_err - kTieTolerance) {
        best_err = std::min(err, best_err);
        best_n = static_cast<double>(candidate.n);
        any = true;
      }
    } catch (const Error& e) {
      log::warn("switch candidate N=" + std::to_string(candidate.n) + " skipped: " + e.what());
    }
  }
  if (!any) throw FitError("every brute-force switch candidate failed");
  return best_n;
}

double linear_switch(std::span<const PerformancePoint> points) {
  if (points.empty()) throw DomainError("linear switch needs at least one point");
  return static_cast<double>(points.front().n);
}

std::map<std::string, LooResult> loo_train_predict(const CurveDictionary& dict,
                                                   const ForestConfig& config) {
  const std::size_t count = dict.entries.size();
  if (count < 2) throw FitError("leave-one-out needs at least 2 curves");
  const std::size_t m = dict.entries.front().fit_count;
  std::vector<MetaFeatures> features;
  std::vector<double> targets;  // log(N* / classes)
  std::vector<double> n_stars;
  features.reserve(count);
  targets.reserve(count);
  for (const auto& curve : dict.entries) {
    if (curve.fit_count != m) {
      throw ShapeError("curve '" + curve.name + "' has a different fit count");
    }
    features.push_back(extract_features(curve.fit_points(), curve.classes));
    const double n_star = ground_truth_switch(curve);
    n_stars.push_back(n_star);
    targets.push_back(std::log(n_star / curve.classes));
  }

  std::map<std::string, LooResult> results;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<MetaFeatures> train_x;
    std::vector<double> train_y;
    train_x.reserve(count - 1);
    train_y.reserve(count - 1);
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      train_x.push_back(features[j]);
      train_y.push_back(targets[j]);
    }
    const MetaModel model = rf_train(train_x, train_y, config);
    results[dict.entries[i].name] = {rf_predict(model, features[i]), n_stars[i]};
  }
  return results;
}

std::string serialize_metamodel(const MetaModel& model) {
  std::ostringstream out;
  out.precision(17);
  out << "scalelaw-metamodel v1\n";
  out << "feature_count=" << model.feature_count << "\n";
  out << "fit_count=" << model.fit_count << "\n";
  out << "target_transform=" << model.target_transform << "\n";
  out << "n_trees=" << model.config.n_trees << "\n";
  out << "max_depth=" << model.config.max_depth << "\n";
  out << "min_leaf=" << model.config.min_leaf << "\n";
  out << "feature_fraction=" << model.config.feature_fraction << "\n";
  out << "bootstrap=" << (model.config.bootstrap ? 1 : 0) << "\n";
  out << "seed=" << model.config.seed << "\n";
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const auto& tree = model.trees[t];
    out << "tree " << t << " nodes=" << tree.nodes.size() << "\n";
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const auto& node = tree.nodes[i];
      out << i << " " << node.feature << " " << node.threshold << " " << node.left << " "
          << node.right << " " << node.value << "\n";
    }
  }
  return out.str();
}

MetaModel parse_metamodel(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "scalelaw-metamodel v1") {
    throw ParseError("unknown meta-model format or version");
  }
  MetaModel model;
  auto read_kv = [&](const char* key) {
    if (!std::getline(in, line)) throw ParseError("meta-model truncated");
    const std::string prefix = std::string(key) + "=";
    if (line.rfind(prefix, 0) != 0) throw ParseError("expected '" + prefix + "...'");
    return line.substr(prefix.size());
  };
  model.feature_count = std::stoi(read_kv("feature_count"));
  model.fit_count = std::stoi(read_kv("fit_count"));
  model.target_transform = read_kv("target_transform");
  if (model.target_transform != "log-n-over-classes") {
    throw ParseError("unknown target transform '" + model.target_transform + "'");
  }
  model.config.n_trees = std::stoi(read_kv("n_trees"));
  model.config.max_depth = std::stoi(read_kv("max_depth"));
  model.config.min_leaf = std::stoi(read_kv("min_leaf"));
  model.config.feature_fraction = std::stod(read_kv("feature_fraction"));
  model.config.bootstrap = std::stoi(read_kv("bootstrap")) != 0;
  model.config.seed = std::stoull(read_kv("seed"));
  model.trees.reserve(static_cast<std::size_t>(model.config.n_trees));
  for (int t = 0; t < model.config.n_trees; ++t) {
    if (!std::getline(in, line)) throw ParseError("meta-model missing trees");
    std::istringstream header(line);
    std::string word;
    int index = 0;
    header >> word >> index;
    std::string nodes_field;
    header >> nodes_field;
    if (word != "tree" || index != t || nodes_field.rfind("nodes=", 0) != 0) {
      throw ParseError("malformed tree header: '" + line + "'");
    }
    const int node_count = std::stoi(nodes_field.substr(6));
    RegressionTree tree;
    tree.nodes.resize(static_cast<std::size_t>(node_count));
    for (int i = 0; i < node_count; ++i) {
      if (!std::getline(in, line)) throw ParseError("meta-model tree truncated");
      std::istringstream row(line);
      int id = 0;
      TreeNode node;
      row >> id >> node.feature >> node.threshold >> node.left >> node.right >> node.value;
      if (!row || id != i) throw ParseError("malformed tree node: '" + line + "'");
      tree.nodes[static_cast<std::size_t>(i)] = node;
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace scalelaw
