#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "scalelaw/errors.hpp"

using scalelaw::tools::RunConfig;

namespace {

void add_curve_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--curve", config.curve_path, "curve CSV file (header n,score)");
  cmd->add_option("--classes", config.classes, "number of classes C");
  cmd->add_option("--name", config.curve_name, "curve name (default: file stem)");
  cmd->add_option("--task", config.task, "classification|detection");
}

void add_predictor_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--family", config.family,
                  "ppl|powerlaw3|loglinear|arctan|algebraic|logarithmic");
  cmd->add_option("--switch", config.switch_spec, "meta|linear|brute|fixed:<N>");
  cmd->add_option("--meta-model", config.meta_model_path, "meta-model file for --switch meta");
  cmd->add_option("--m", config.m, "fit on the first m points");
  cmd->add_flag("--no-scale-cov", config.no_scale_cov,
                "use the bare (J^T J)^-1 covariance without residual scaling");
  cmd->add_option("--max-iter", config.max_iter, "solver iteration cap");
  cmd->add_option("--gtol", config.gtol, "solver gradient tolerance");
  cmd->add_option("--xtol", config.xtol, "solver step tolerance");
}

void add_forest_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--trees", config.trees, "number of trees");
  cmd->add_option("--min-leaf", config.min_leaf, "minimum samples per leaf");
  cmd->add_option("--feature-fraction", config.feature_fraction,
                  "fraction of features tried per split");
  cmd->add_option("--max-depth", config.max_depth, "tree depth limit (-1 = unlimited)");
  cmd->add_flag("--no-bootstrap", config.no_bootstrap, "train each tree on all rows");
}

void add_collection_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--target", config.target, "target score in (0,1)");
  cmd->add_option("--target-frac", config.target_frac,
                  "target = oracle score at this fraction of its largest size");
  cmd->add_option("--tau", config.tau, "confidence threshold (0 = plain policy)");
  cmd->add_option("--max-steps", config.max_steps, "collection steps T");
  cmd->add_option("--n-cap", config.n_cap, "request cap (0 = 1e4 x largest initial n)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learning-curve extrapolation and data-requirement estimation"};
  app.require_subcommand(1);
  RunConfig config;

  auto* fit = app.add_subcommand("fit", "fit a predictor and export its confidence band");
  add_curve_options(fit, config);
  add_predictor_options(fit, config);
  fit->add_option("--out", config.out_dir, "output directory")->required();

  auto* extrapolate =
      app.add_subcommand("extrapolate", "fit on the first m points, score the rest");
  add_curve_options(extrapolate, config);
  add_predictor_options(extrapolate, config);
  extrapolate->add_option("--out", config.out_dir, "output directory")->required();

  auto* estimate =
      app.add_subcommand("estimate-data", "estimate samples needed to reach a target score");
  add_curve_options(estimate, config);
  add_predictor_options(estimate, config);
  add_collection_options(estimate, config);
  estimate->add_option("--oracle-ppl", config.oracle_ppl,
                       "analytic oracle 't1,t2,t3,N' instead of the curve table");
  estimate->add_option("--oracle-max-n", config.oracle_max_n, "analytic oracle size limit");
  estimate->add_option("--seed", config.seed, "run seed");
  estimate->add_option("--out", config.out_dir, "output directory")->required();

  auto* simulate =
      app.add_subcommand("simulate", "run the collection loop over every curve in a manifest");
  simulate->add_option("--manifest", config.manifest_path, "curve dictionary manifest");
  add_predictor_options(simulate, config);
  add_collection_options(simulate, config);
  simulate->add_option("--seed", config.seed, "run seed");
  simulate->add_option("--out", config.out_dir, "output directory")->required();

  auto* train = app.add_subcommand("train-meta", "train the switch-point meta-model");
  train->add_option("--manifest", config.manifest_path, "curve dictionary manifest");
  train->add_option("--m", config.m, "fit points per curve")->required();
  add_forest_options(train, config);
  train->add_option("--seed", config.seed, "forest seed")->required();
  train->add_option("--out", config.out_dir, "output directory")->required();

  auto* loo = app.add_subcommand("eval-loo", "leave-one-out meta-model evaluation table");
  loo->add_option("--manifest", config.manifest_path, "curve dictionary manifest");
  loo->add_option("--m", config.m, "fit points per curve")->required();
  add_forest_options(loo, config);
  loo->add_option("--seed", config.seed, "forest seed")->required();
  loo->add_option("--out", config.out_dir, "output directory")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic curve dictionary");
  synth->add_option("--count", config.count, "number of curves");
  synth->add_option("--noise-sd", config.noise_sd, "log-error noise level");
  synth->add_option("--seed", config.seed, "generator seed")->required();
  synth->add_option("--out", config.out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      config.command = "fit";
      return scalelaw::tools::cmd_fit(config);
    }
    if (extrapolate->parsed()) {
      config.command = "extrapolate";
      return scalelaw::tools::cmd_extrapolate(config);
    }
    if (estimate->parsed()) {
      config.command = "estimate-data";
      return scalelaw::tools::cmd_estimate_data(config);
    }
    if (simulate->parsed()) {
      config.command = "simulate";
      return scalelaw::tools::cmd_simulate(config);
    }
    if (train->parsed()) {
      config.command = "train-meta";
      return scalelaw::tools::cmd_train_meta(config);
    }
    if (loo->parsed()) {
      config.command = "eval-loo";
      return scalelaw::tools::cmd_eval_loo(config);
    }
    if (synth->parsed()) {
      config.command = "synth";
      return scalelaw::tools::cmd_synth(config);
    }
  } catch (const scalelaw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
