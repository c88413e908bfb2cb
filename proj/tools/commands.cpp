#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "scalelaw/scalelaw.hpp"
#include "svg.hpp"

namespace scalelaw::tools {

namespace fs = std::filesystem;

namespace {

std::string config_echo(const RunConfig& config) {
  std::ostringstream out;
  out << "# command=" << config.command << "\n";
  auto put = [&](const char* key, const std::string& value) {
    if (!value.empty()) out << "# " << key << "=" << value << "\n";
  };
  put("curve", config.curve_path);
  put("manifest", config.manifest_path);
  put("meta_model", config.meta_model_path);
  put("oracle_ppl", config.oracle_ppl);
  put("family", config.family);
  put("switch", config.switch_spec);
  std::ostringstream rest;
  rest << "# classes=" << config.classes << "\n";
  rest << "# m=" << config.m << "\n";
  rest << "# target=" << config.target << "\n";
  rest << "# target_frac=" << config.target_frac << "\n";
  rest << "# tau=" << config.tau << "\n";
  rest << "# max_steps=" << config.max_steps << "\n";
  rest << "# n_cap=" << config.n_cap << "\n";
  rest << "# seed=" << config.seed << "\n";
  out << rest.str();
  return out.str();
}

void write_run_manifest(const RunConfig& config) {
  const auto now = std::chrono::system_clock::now();
  const auto stamp =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  std::ostringstream out;
  out << "timestamp_unix=" << stamp << "\n";
  std::istringstream echo(config_echo(config));
  std::string line;
  while (std::getline(echo, line)) {
    out << (line.rfind("# ", 0) == 0 ? line.substr(2) : line) << "\n";
  }
  write_file(fs::path(config.out_dir) / "run_manifest.txt", out.str());
}

fs::path ensure_out_dir(const RunConfig& config) {
  if (config.out_dir.empty()) throw IoError("--out directory is required");
  fs::create_directories(config.out_dir);
  return {config.out_dir};
}

LearningCurve load_curve(const RunConfig& config) {
  if (config.curve_path.empty()) throw IoError("--curve file is required");
  std::string name = config.curve_name;
  if (name.empty()) name = fs::path(config.curve_path).stem().string();
  auto curve = parse_curve(read_file(config.curve_path), config.classes, name,
                           parse_task(config.task));
  if (config.m > 0) {
    if (static_cast<std::size_t>(config.m) >= curve.points.size()) {
      throw RangeError("--m must be smaller than the number of points");
    }
    split_points(curve, static_cast<std::size_t>(config.m));
  }
  return curve;
}

FitOptions fit_options(const RunConfig& config) {
  FitOptions options;
  options.scale_covariance = !config.no_scale_cov;
  options.max_iter = config.max_iter;
  options.gtol = config.gtol;
  options.xtol = config.xtol;
  return options;
}

ForestConfig forest_config(const RunConfig& config) {
  ForestConfig forest;
  forest.n_trees = config.trees;
  forest.min_leaf = config.min_leaf;
  forest.feature_fraction = config.feature_fraction;
  forest.max_depth = config.max_depth;
  forest.bootstrap = !config.no_bootstrap;
  forest.seed = config.seed;
  return forest;
}

struct SwitchChoice {
  SwitchSource source = SwitchSource::linear;
  double fixed_value = 0.0;
};

SwitchChoice parse_switch(const std::string& spec) {
  if (spec == "meta") return {SwitchSource::meta, 0.0};
  if (spec == "linear") return {SwitchSource::linear, 0.0};
  if (spec == "brute") return {SwitchSource::brute_force, 0.0};
  if (spec.rfind("fixed:", 0) == 0) {
    return {SwitchSource::fixed, std::stod(spec.substr(6))};
  }
  throw ParseError("unknown --switch '" + spec + "' (meta|linear|brute|fixed:<N>)");
}

double resolve_switch_point(const RunConfig& config, const LearningCurve& curve,
                            const MetaModel* meta) {
  const auto choice = parse_switch(config.switch_spec);
  switch (choice.source) {
    case SwitchSource::linear:
      return linear_switch(curve.fit_points());
    case SwitchSource::brute_force:
      return brute_force_switch(curve.fit_points());
    case SwitchSource::fixed:
      return choice.fixed_value;
    case SwitchSource::meta: {
      if (!meta) throw IoError("--switch meta requires --meta-model");
      return rf_predict(*meta, extract_features(curve.fit_points(), curve.classes));
    }
  }
  throw ParseError("unknown switch source");
}

std::optional<MetaModel> maybe_load_meta(const RunConfig& config) {
  if (config.meta_model_path.empty()) return std::nullopt;
  return parse_metamodel(read_file(config.meta_model_path));
}

double lenient_score(const FitResult& fit, double n) {
  const double y = family_eval_unchecked(fit.family, fit.params, fit.n_switch, n);
  if (std::isnan(y)) return 1.0;
  return -std::expm1(y);
}

void write_fit_svg(const fs::path& path, const LearningCurve& curve, const FitResult& fit) {
  const double n_lo = static_cast<double>(curve.points.front().n);
  const double n_hi = 10.0 * static_cast<double>(curve.points.back().n);
  const auto band = band_grid(fit, n_lo, n_hi, 200);

  std::vector<double> xs, err_mean, err_lo, err_hi;
  double min_err = 1.0, max_err = 1e-9;
  for (const auto& b : band) {
    xs.push_back(b.n);
    const double mid = std::clamp(1.0 - b.mu_v, 1e-9, 10.0);
    const double lo = std::clamp(1.0 - (b.mu_v + 3.0 * b.sigma_v), 1e-9, 10.0);
    const double hi = std::clamp(1.0 - (b.mu_v - 3.0 * b.sigma_v), 1e-9, 10.0);
    err_mean.push_back(mid);
    err_lo.push_back(lo);
    err_hi.push_back(hi);
    min_err = std::min(min_err, lo);
    max_err = std::max(max_err, hi);
  }
  std::vector<double> px, py;
  for (const auto& p : curve.points) {
    px.push_back(static_cast<double>(p.n));
    py.push_back(1.0 - p.v);
    min_err = std::min(min_err, 1.0 - p.v);
    max_err = std::max(max_err, 1.0 - p.v);
  }

  LogLogSvg plot(720, 480);
  plot.set_domain(n_lo * 0.8, n_hi * 1.2, min_err * 0.7, max_err * 1.4);
  plot.add_band(xs, err_lo, err_hi, "#9ecae1");
  plot.add_line(xs, err_mean, "#08519c");
  plot.add_points(px, py, "#d62728");
  if (fit.n_switch) plot.add_vline(*fit.n_switch, "#555555");
  write_file(path, plot.render(curve.name + " (" + to_string(fit.family) + ")",
                               "training samples n", "test error 1 - v"));
}

FitResult fit_curve(const RunConfig& config, const LearningCurve& curve,
                    const std::optional<MetaModel>& meta, double* n_switch_out) {
  const auto family = parse_family(config.family);
  if (family == PredictorFamily::ppl) {
    const double n_switch =
        resolve_switch_point(config, curve, meta ? &*meta : nullptr);
    if (n_switch_out) *n_switch_out = n_switch;
    return fit_ppl(curve.fit_points(), n_switch, fit_options(config));
  }
  return fit_family(family, curve.fit_points(), std::nullopt, fit_options(config));
}

double resolve_target(const RunConfig& config, const Oracle& oracle) {
  if (config.target > 0.0) return config.target;
  if (config.target_frac > 0.0) {
    return oracle.true_score(config.target_frac * oracle.max_n);
  }
  throw ParseError("provide --target or --target-frac");
}

CollectionPolicy build_policy(const RunConfig& config, const LearningCurve& curve,
                              const std::optional<MetaModel>& meta) {
  CollectionPolicy policy;
  policy.family = parse_family(config.family);
  const auto choice = parse_switch(config.switch_spec);
  policy.switch_source = choice.source;
  policy.fixed_n_switch = choice.fixed_value;
  if (choice.source == SwitchSource::meta) {
    if (!meta) throw IoError("--switch meta requires --meta-model");
    policy.meta_model = &*meta;
  }
  policy.max_steps = config.max_steps;
  if (config.tau > 0.0) policy.tau = config.tau;
  policy.n_cap = config.n_cap;
  policy.fit_options = fit_options(config);
  (void)curve;
  return policy;
}

}  // namespace

int cmd_fit(const RunConfig& config) {
  const auto out = ensure_out_dir(config);
  const auto curve = load_curve(config);
  const auto meta = maybe_load_meta(config);
  double n_switch = 0.0;
  const auto fit = fit_curve(config, curve, meta, &n_switch);

  write_file(out / "fit.txt", config_echo(config) + serialize_fit(fit));
  const double n_lo = static_cast<double>(curve.points.front().n);
  const double n_hi = 10.0 * static_cast<double>(curve.points.back().n);
  const auto band = band_grid(fit, n_lo, n_hi, 200);
  write_file(out / "band.csv", config_echo(config) + serialize_band_csv(band));
  write_fit_svg(out / "fit.svg", curve, fit);
  write_run_manifest(config);

  std::cout << serialize_fit(fit);
  if (fit.degenerate) {
    std::cerr << "warning: degenerate covariance (rank-deficient design)\n";
    return 2;
  }
  return 0;
}

int cmd_extrapolate(const RunConfig& config) {
  const auto out = ensure_out_dir(config);
  if (config.m <= 0) throw RangeError("--m is required for extrapolation");
  const auto curve = load_curve(config);
  const auto meta = maybe_load_meta(config);
  double n_switch = 0.0;
  const auto fit = fit_curve(config, curve, meta, &n_switch);

  std::vector<Prediction> preds;
  for (const auto& p : curve.eval_points()) {
    preds.push_back({p.n, lenient_score(fit, static_cast<double>(p.n))});
  }
  const auto report = evaluate_predictions(curve.eval_points(), preds);

  write_file(out / "eval.csv", config_echo(config) + serialize_eval_csv(report));
  std::ostringstream summary;
  summary.precision(12);
  summary << "e_perf=" << report.e_perf << "\n";
  summary << "rmse=" << report.rmse << "\n";
  summary << serialize_fit(fit);
  write_file(out / "summary.txt", config_echo(config) + summary.str());
  write_run_manifest(config);

  std::cout << "e_perf=" << report.e_perf << " rmse=" << report.rmse << "\n";
  return 0;
}

int cmd_estimate_data(const RunConfig& config) {
  const auto out = ensure_out_dir(config);
  const auto curve = load_curve(config);
  const auto meta = maybe_load_meta(config);

  Oracle oracle;
  if (!config.oracle_ppl.empty()) {
    std::istringstream in(config.oracle_ppl);
    PplParams truth;
    char comma = 0;
    in >> truth.theta[0] >> comma >> truth.theta[1] >> comma >> truth.theta[2] >> comma >>
        truth.n_switch;
    if (!in) throw ParseError("--oracle-ppl expects 't1,t2,t3,N'");
    oracle = oracle_from_ppl(truth, config.oracle_max_n);
  } else {
    oracle = oracle_from_table(curve);
  }

  const double v_target = resolve_target(config, oracle);
  const auto policy = build_policy(config, curve, meta);
  const auto trace = simulate_collection(oracle, curve.fit_points(), curve.classes, v_target,
                                         policy, config.seed);

  write_file(out / "trace.csv", config_echo(config) + serialize_trace_csv(trace));
  std::ostringstream summary;
  summary.precision(12);
  summary << "v_target=" << v_target << "\n";
  summary << "K=" << trace.stopping_index << "\n";
  summary << "n_final=" << trace.n_final << "\n";
  summary << "n_star=" << (trace.n_star ? std::to_string(*trace.n_star) : "unreachable")
          << "\n";
  summary << "e_data=" << (trace.e_data ? format_e_data(*trace.e_data) : "undefined") << "\n";
  summary << "stop_cause=" << to_string(trace.stop_cause) << "\n";
  write_file(out / "summary.txt", config_echo(config) + summary.str());
  write_run_manifest(config);

  std::cout << "K=" << trace.stopping_index << " n_final=" << trace.n_final << " e_data="
            << (trace.e_data ? format_e_data(*trace.e_data) : "undefined") << "\n";
  if (!trace.n_star) {
    std::cerr << "error: target score is unreachable under the oracle\n";
    return 3;
  }
  return 0;
}

int cmd_simulate(const RunConfig& config) {
  const auto out = ensure_out_dir(config);
  if (config.manifest_path.empty()) throw IoError("--manifest is required");
  auto dict = load_dictionary(config.manifest_path);
  const auto meta = maybe_load_meta(config);

  const auto traces_dir = out / "traces";
  fs::create_directories(traces_dir);
  std::ostringstream aggregate;
  aggregate << config_echo(config);
  aggregate << "name,K,n_final,n_star,e_data,stop_cause\n";
  for (auto& curve : dict.entries) {
    if (config.m > 0 && static_cast<std::size_t>(config.m) < curve.points.size()) {
      split_points(curve, static_cast<std::size_t>(config.m));
    }
    const auto oracle = oracle_from_table(curve);
    const double v_target = resolve_target(config, oracle);
    const auto policy = build_policy(config, curve, meta);
    const auto trace = simulate_collection(oracle, curve.fit_points(), curve.classes,
                                           v_target, policy, config.seed);
    write_file(traces_dir / (curve.name + ".csv"),
               config_echo(config) + serialize_trace_csv(trace));
    aggregate << curve.name << "," << trace.stopping_index << "," << trace.n_final << ","
              << (trace.n_star ? std::to_string(*trace.n_star) : "unreachable") << ","
              << (trace.e_data ? format_e_data(*trace.e_data) : "undefined") << ","
              << to_string(trace.stop_cause) << "\n";
  }
  write_file(out / "aggregate.csv", aggregate.str());
  write_run_manifest(config);
  std::cout << "simulated " << dict.entries.size() << " curves\n";
  return 0;
}

namespace {

CurveDictionary load_split_dictionary(const RunConfig& config) {
  if (config.manifest_path.empty()) throw IoError("--manifest is required");
  auto dict = load_dictionary(config.manifest_path);
  if (config.m <= 0) throw RangeError("--m is required");
  for (auto& curve : dict.entries) {
    if (static_cast<std::size_t>(config.m) >= curve.points.size()) {
      throw RangeError("curve '" + curve.name + "' has too few points for m=" +
                       std::to_string(config.m));
    }
    split_points(curve, static_cast<std::size_t>(config.m));
  }
  return dict;
}

}  // namespace

int cmd_train_meta(const RunConfig& config) {
  const auto out = ensure_out_dir(config);
  const auto dict = load_split_dictionary(config);
  if (dict.entries.size() < 2) throw FitError("need at least 2 curves to train");

  std::vector<MetaFeatures> features;
  std::vector<double> targets;
  for (const auto& curve : dict.entries) {
    features.push_back(extract_features(curve.fit_points(), curve.classes));
    targets.push_back(std::log(ground_truth_switch(curve) / curve.classes));
  }
  auto model = rf_train(features, targets, forest_config(config));
  model.fit_count = config.m;
  write_file(out / "metamodel.txt", serialize_metamodel(model));
  write_run_manifest(config);
  std::cout << "trained " << model.trees.size() << " trees on " << dict.entries.size()
            << " curves\n";
  return 0;
}

int cmd_eval_loo(const RunConfig& config) {
  const auto out = ensure_out_dir(config);
  const auto dict = load_split_dictionary(config);
  const auto results = loo_train_predict(dict, forest_config(config));

  std::ostringstream table;
  table << config_echo(config);
  table << "name,n_star,n_hat,e_perf_ppl_meta,e_perf_powerlaw3\n";
  table.precision(12);
  double sum_ppl = 0, sum_pl3 = 0;
  for (const auto& curve : dict.entries) {
    const auto& result = results.at(curve.name);
    const auto ppl_fit = fit_ppl(curve.fit_points(), result.n_hat, fit_options(config));
    const auto pl3_fit = fit_family(PredictorFamily::power_law3, curve.fit_points(),
                                    std::nullopt, fit_options(config));
    std::vector<Prediction> ppl_preds, pl3_preds;
    for (const auto& p : curve.eval_points()) {
      ppl_preds.push_back({p.n, lenient_score(ppl_fit, static_cast<double>(p.n))});
      pl3_preds.push_back({p.n, lenient_score(pl3_fit, static_cast<double>(p.n))});
    }
    const double e_ppl = mean_prediction_error(curve.eval_points(), ppl_preds);
    const double e_pl3 = mean_prediction_error(curve.eval_points(), pl3_preds);
    sum_ppl += e_ppl;
    sum_pl3 += e_pl3;
    table << curve.name << "," << result.n_star << "," << result.n_hat << "," << e_ppl << ","
          << e_pl3 << "\n";
  }
  write_file(out / "loo.csv", table.str());
  write_run_manifest(config);
  const auto count = static_cast<double>(dict.entries.size());
  std::cout << "mean e_perf: ppl(meta)=" << sum_ppl / count << " powerlaw3=" << sum_pl3 / count
            << " over " << dict.entries.size() << " curves\n";
  return 0;
}

int cmd_synth(const RunConfig& config) {
  const auto out = ensure_out_dir(config);
  ParamRanges ranges;
  ranges.noise_sd = config.noise_sd;
  const auto synth = gen_dictionary(config.count, ranges, config.seed);

  const auto curves_dir = out / "curves";
  fs::create_directories(curves_dir);
  std::vector<ManifestEntry> entries;
  std::ostringstream params;
  params << config_echo(config);
  params << "name,theta1,theta2,theta3,n_switch,classes,noise_sd,seed\n";
  params.precision(17);
  for (std::size_t i = 0; i < synth.dict.entries.size(); ++i) {
    const auto& curve = synth.dict.entries[i];
    const auto& spec = synth.specs[i];
    write_file(curves_dir / (curve.name + ".csv"), serialize_curve(curve));
    entries.push_back({"curves/" + curve.name + ".csv", curve.name, curve.classes,
                       curve.task});
    params << curve.name << "," << spec.theta[0] << "," << spec.theta[1] << ","
           << spec.theta[2] << "," << spec.n_switch << "," << spec.classes << ","
           << spec.noise_sd << "," << spec.seed << "\n";
  }
  write_file(out / "manifest.txt",
             "# generated curve dictionary\n" + serialize_manifest(entries));
  write_file(out / "generator_params.csv", params.str());
  write_run_manifest(config);
  std::cout << "wrote " << synth.dict.entries.size() << " curves to " << out.string() << "\n";
  return 0;
}

}  // namespace scalelaw::tools
