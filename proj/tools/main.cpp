// cmi: cluster-map imputation and classification of tabular records.
//
// Exit codes: 0 ok, 1 internal error, 2 parse/schema/config error,
// 3 insufficient data, 4 unlabeled training data, 5 case-study mismatch.

#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using cmi::cli::RunConfig;
  RunConfig cfg;
  cfg.seed = cmi::cli::default_seed();

  CLI::App app{"Cluster-center mapping imputation and classification"};
  app.set_config("--settings", "", "INI/TOML file with option values; command-line flags win");
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", cfg.verbosity, "Print progress to stderr");

  auto add_model_options = [&](CLI::App* sub) {
    sub->add_option("--schema", cfg.schema, "Schema config (JSON)")->required();
    sub->add_option("--mode", cfg.mode, "Nearest-record rule")
        ->check(CLI::IsMember({"absolute", "paper-signed"}));
    sub->add_option("--init", cfg.init, "k-means seeding")->check(CLI::IsMember({"farthest", "random"}));
    sub->add_option("--seed", cfg.seed, "Seed for k-means seeding (default $CMI_SEED or 0)");
    sub->add_option("--partition", cfg.partition, "Fixed partition, e.g. \"R1,R4;R2,R7\"");
  };

  auto* impute = app.add_subcommand("impute", "Fill missing cells of a dataset");
  impute->add_option("--data", cfg.data, "Input table (CSV)")->required();
  add_model_options(impute);
  impute->add_option("--k", cfg.k, "Number of clusters (default: number of classes)");
  impute->add_flag("--min-max", cfg.min_max_scale, "Min-max scale attributes before clustering");
  impute->add_flag("--scale-type2", cfg.scale_type2, "Rescale partial distances by sqrt(n/observed)");
  impute->add_option("--out", cfg.out, "Completed table (default stdout)");
  impute->add_option("--report", cfg.report, "Provenance report (CSV)");

  auto* classify = app.add_subcommand("classify", "Label new records");
  classify->add_option("--train", cfg.train, "Complete labeled training table")->required();
  classify->add_option("--query", cfg.query, "Records to classify")->required();
  add_model_options(classify);
  classify->add_option("--out", cfg.out, "Label report (default stdout)");
  classify->add_flag("--with-knn-baseline", cfg.with_knn_baseline, "Add raw 1-NN labels");
  classify->add_option("--d-table", cfg.d_table, "Write the mapping difference table here");

  auto* evaluate = app.add_subcommand("evaluate", "Run an MCAR imputation experiment");
  evaluate->add_option("--config", cfg.experiment, "Experiment spec (JSON)")->required();
  evaluate->add_option("--out", cfg.out, "Report (JSON, default stdout)");
  evaluate->add_option("--summary", cfg.summary, "Per-method summary (CSV)");

  auto* casestudy = app.add_subcommand("casestudy", "Recompute the bundled worked example");
  casestudy->add_option("--tolerance", cfg.tolerance, "Absolute tolerance for numeric cells");
  casestudy->add_option("--out", cfg.out, "Diff report (default stdout)");
  casestudy->add_option("--fixtures", cfg.fixtures, "Fixture directory (default $CMI_FIXTURES or bundled)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*impute) return cmi::cli::cmd_impute(cfg, std::cout, std::cerr);
  if (*classify) return cmi::cli::cmd_classify(cfg, std::cout, std::cerr);
  if (*evaluate) return cmi::cli::cmd_evaluate(cfg, std::cout, std::cerr);
  return cmi::cli::cmd_casestudy(cfg, std::cout, std::cerr);
}
