#include "cmi/eval.hpp"
#include "cmi/error.hpp"
#include "cmi/random.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <set>

using namespace cmi;

namespace {

Dataset crafted() {
  Schema s;
  s.id_column = "id";
  s.label_column = "class";
  s.attributes = {{"x", AttributeKind::kNumeric, {}, false}, {"y", AttributeKind::kNumeric, {}, false}};
  return parse_dataset("id,x,y,class\nr1,0,1,k\nr2,0,2,k\nr3,0,3,k\nr4,10,4,k\n", s);
}

}  // namespace

TEST(Rng, ReferenceSequence) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(1);
  std::mt19937_64 ref(1);
  EXPECT_EQ(c.next(), ref());
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(c.uniform_index(7), 7u);
    const double u = c.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_EQ(mix_seed(9, 3), mix_seed(9, 3));
}

TEST(ApplyMask, Table2ToTable3) {
  const auto [masked, plan] = apply_mask(test::table02(), {{"R3", 2}, {"R5", 3}});
  EXPECT_EQ(write_dataset(masked), write_dataset(test::table03()));
  ASSERT_EQ(plan.cells.size(), 2u);
  EXPECT_EQ(plan.cells[0].truth, 2.0);
  EXPECT_EQ(plan.cells[1].truth, 7.0);
  EXPECT_THROW(apply_mask(test::table02(), {{"R3", 9}}), ConfigError);
  EXPECT_THROW(apply_mask(test::table02(), {{"R3", 0}, {"R3", 1}, {"R3", 2}, {"R3", 3}}), ConfigError);
}

TEST(InjectMcar, NineByFourAtTenPercent) {
  const Dataset ds = test::table02();
  const auto [masked, plan] = inject_mcar(ds, 0.1, 123);
  EXPECT_GE(plan.cells.size(), 3u);
  EXPECT_LE(plan.cells.size(), 4u);
  std::size_t holes = 0;
  for (const auto& r : masked.records) {
    holes += r.missing_count();
    EXPECT_LT(r.missing_count(), r.cells.size());
  }
  EXPECT_EQ(holes, plan.cells.size());
  const auto again = inject_mcar(ds, 0.1, 123);
  EXPECT_EQ(write_dataset(again.first), write_dataset(masked));
}

TEST(InjectMcar, TinyRateMasksNothing) {
  const Dataset ds = test::table02();
  const auto [masked, plan] = inject_mcar(ds, 0.01, 5);
  EXPECT_TRUE(plan.cells.empty());
  EXPECT_EQ(write_dataset(masked), write_dataset(ds));
}

TEST(InjectMcar, Errors) {
  EXPECT_THROW(inject_mcar(test::table02(), 0.0, 1), ConfigError);
  EXPECT_THROW(inject_mcar(test::table02(), 1.0, 1), ConfigError);
  EXPECT_THROW(inject_mcar(test::table02(), 0.9, 1), ConfigError);
  EXPECT_THROW(inject_mcar(test::table03(), 0.1, 1), ConfigError);
}

TEST(InjectMcar, UnmaskRestoresInput) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset ds = encode(test::random_dataset(gen, 3 + static_cast<int>(gen() % 20), 2 + static_cast<int>(gen() % 4), 2));
    const double rate = 0.05 + 0.4 * static_cast<double>(gen() % 100) / 100.0;
    const auto [masked, plan] = inject_mcar(ds, rate, gen());
    EXPECT_EQ(write_dataset(unmask(masked, plan)), write_dataset(ds));
    std::set<std::pair<std::string, std::size_t>> seen;
    for (const auto& c : plan.cells) EXPECT_TRUE(seen.insert({c.record_id, c.attribute}).second);
  }
}

TEST(Score, CaseStudyIsPerfect) {
  const auto [masked, plan] = apply_mask(test::table02(), {{"R3", 2}, {"R5", 3}});
  ImputeConfig cfg;
  cfg.mode = NearestMode::kPaperSigned;
  cfg.init = test::table06_partition();
  const ImputationScore s = score_imputation(plan, impute_dataset(masked, cfg).completed);
  EXPECT_EQ(s.numeric_rmse, 0.0);
  EXPECT_EQ(s.numeric_cells, 2u);
}

TEST(Score, CraftedColumnRmse) {
  // x observed as {0, 0}; class mean fills 0 for truths 0 and 10.
  const auto [masked, plan] = apply_mask(crafted(), {{"r3", 0}, {"r4", 0}});
  const Dataset filled = impute_with(Method::kClassMeanMode, masked, 0);
  const ImputationScore s = score_imputation(plan, filled);
  EXPECT_EQ(s.numeric_cells, 2u);
  EXPECT_NEAR(s.numeric_rmse, std::sqrt(50.0), 1e-12);
  EXPECT_EQ(s.categorical_cells, 0u);
}

TEST(Score, CategoricalAccuracy) {
  const Schema schema = load_schema(test::fixture("schema_symbolic.json"));
  const Dataset ds = encode(load_dataset(test::fixture("table01.csv"), schema));
  const auto [masked, plan] = apply_mask(ds, {{"R3", 2}, {"R2", 0}});
  Dataset guess = unmask(masked, plan);
  for (auto& r : guess.records) {
    if (r.id == "R2") r.cells[0] = 1.0;  // truth is c13
  }
  const ImputationScore s = score_imputation(plan, guess);
  EXPECT_EQ(s.categorical_cells, 2u);
  EXPECT_DOUBLE_EQ(s.categorical_accuracy, 0.5);
}

TEST(Score, UnfilledCellIsAnError) {
  const auto [masked, plan] = apply_mask(crafted(), {{"r3", 0}});
  EXPECT_THROW(score_imputation(plan, masked), ScoringError);
}

TEST(Methods, NamesRoundTrip) {
  for (Method m : {Method::kClusterMapSigned, Method::kClusterMapAbsolute, Method::kClassMeanMode,
                   Method::kRawKnnDonor}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_EQ(parse_method("cluster-map(absolute)"), Method::kClusterMapAbsolute);
  EXPECT_THROW(parse_method("mice"), ConfigError);
}

TEST(Methods, RawKnnDonorCopiesNearestComplete) {
  const auto [masked, plan] = apply_mask(crafted(), {{"r4", 0}});
  const Dataset filled = impute_with(Method::kRawKnnDonor, masked, 0);
  // r4 has y=4; nearest complete record on y is r3 with x=0.
  EXPECT_EQ(std::get<double>(filled.find("r4").cells[0]), 0.0);
}

TEST(Synthetic, ShapeAndDeterminism) {
  SyntheticSpec spec;
  spec.per_cluster = 10;
  const Dataset a = make_synthetic(spec);
  EXPECT_EQ(a.size(), 30u);
  EXPECT_EQ(a.arity(), 4u);
  EXPECT_EQ(a.classes().size(), 3u);
  EXPECT_TRUE(a.complete());
  EXPECT_TRUE(a.encoded());
  EXPECT_TRUE(a.schema.attributes[3].categorical());
  EXPECT_EQ(write_dataset(a), write_dataset(make_synthetic(spec)));
  spec.seed = 8;
  EXPECT_NE(write_dataset(a), write_dataset(make_synthetic(spec)));
}

TEST(Experiment, ParseSpec) {
  const ExperimentConfig cfg = parse_experiment(R"({"dataset":{"synthetic":{"clusters":2,"per_cluster":5}},
      "methods":["cluster-map-absolute","raw-knn-donor"],"rates":[0.1,0.2],"trials":3,"master_seed":9})");
  EXPECT_EQ(cfg.dataset.size(), 10u);
  EXPECT_EQ(cfg.methods.size(), 2u);
  EXPECT_EQ(cfg.rates, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(cfg.trials, 3);
  EXPECT_EQ(cfg.master_seed, 9u);
  EXPECT_THROW(parse_experiment("{"), ConfigError);
  EXPECT_THROW(parse_experiment(R"({"dataset":{"synthetic":{}},"methods":["x"],"rates":[0.1]})"), ConfigError);
}

TEST(Experiment, ParseFileDataset) {
  const ExperimentConfig cfg = parse_experiment(
      R"({"dataset":{"data":"table02.csv","schema":"schema_numeric.json"},"methods":["class-mean-mode"],"rates":[0.1]})",
      std::filesystem::path(CMI_TEST_FIXTURES));
  EXPECT_EQ(cfg.dataset.size(), 9u);
}

TEST(Experiment, ZeroTrials) {
  ExperimentConfig cfg;
  cfg.dataset = make_synthetic({});
  cfg.methods = {Method::kClusterMapAbsolute};
  cfg.rates = {0.1};
  cfg.trials = 0;
  const EvaluationReport r = run_experiment(cfg);
  EXPECT_TRUE(r.trials.empty());
  ASSERT_EQ(r.summary.size(), 1u);
  EXPECT_EQ(r.summary[0].trials, 0);
}

TEST(Experiment, ReproducibleReport) {
  ExperimentConfig cfg;
  SyntheticSpec spec;
  spec.per_cluster = 12;
  cfg.dataset = make_synthetic(spec);
  cfg.methods = {Method::kClusterMapSigned, Method::kClusterMapAbsolute, Method::kClassMeanMode,
                 Method::kRawKnnDonor};
  cfg.rates = {0.1};
  cfg.trials = 4;
  cfg.master_seed = 42;
  const std::string a = report_json(run_experiment(cfg));
  EXPECT_EQ(a, report_json(run_experiment(cfg)));
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j.at("trials").size(), 16u);
  EXPECT_EQ(j.at("summary").size(), 4u);
  const std::string csv = summary_csv(run_experiment(cfg));
  EXPECT_NE(csv.find("cluster-map-paper-signed,0.1,4,"), std::string::npos);
}
