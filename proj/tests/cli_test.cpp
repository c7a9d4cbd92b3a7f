#include "commands.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cmi;
using cmi::cli::RunConfig;

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cmi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }

  // Runs the built binary; returns its exit status.
  int run_tool(const std::string& args) {
    const std::string cmd = std::string(CMI_TOOL_PATH) + " " + args + " >" + (dir_ / "stdout").string() +
                            " 2>" + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

RunConfig impute_config(const std::string& data, const std::string& schema) {
  RunConfig c;
  c.data = data;
  c.schema = schema;
  return c;
}

RunConfig classify_config(const std::string& query) {
  RunConfig c;
  c.train = test::fixture("table16.csv").string();
  c.schema = test::fixture("schema_classes.json").string();
  c.query = query;
  c.partition = "R1,R4,R6,R9;R2,R7,R8,R3,R5";
  return c;
}

}  // namespace

TEST_F(Cli, ImputeTable3ReproducesTable2) {
  RunConfig c = impute_config(test::fixture("table03.csv").string(), test::fixture("schema_numeric.json").string());
  c.mode = "paper-signed";
  c.partition = "R1,R4,R6,R9;R2,R7,R8";
  c.report = (dir_ / "report.csv").string();
  ASSERT_EQ(cli::cmd_impute(c, out_, err_), 0) << err_.str();
  EXPECT_EQ(out_.str(), test::slurp(test::fixture("table02.csv")));
  const std::string report = test::slurp(c.report);
  EXPECT_NE(report.find("R3,A3,R8,2,2,paper-signed,single-donor"), std::string::npos);
  EXPECT_NE(report.find("R5,A4,R8,7,7,paper-signed,single-donor"), std::string::npos);
}

TEST_F(Cli, ImputeSymbolicMatchesTable1ByteForByte) {
  RunConfig c =
      impute_config(test::fixture("table03_symbolic.csv").string(), test::fixture("schema_symbolic.json").string());
  c.mode = "paper-signed";
  c.partition = "R1,R4,R6,R9;R2,R7,R8";
  c.out = (dir_ / "completed.csv").string();
  ASSERT_EQ(cli::cmd_impute(c, out_, err_), 0) << err_.str();
  EXPECT_EQ(test::slurp(c.out), test::slurp(test::fixture("table01.csv")));
}

TEST_F(Cli, ImputeCompleteInputIsUnchanged) {
  RunConfig c = impute_config(test::fixture("table02.csv").string(), test::fixture("schema_numeric.json").string());
  c.report = (dir_ / "report.csv").string();
  ASSERT_EQ(cli::cmd_impute(c, out_, err_), 0);
  EXPECT_EQ(out_.str(), test::slurp(test::fixture("table02.csv")));
  EXPECT_EQ(test::slurp(c.report), "query,attribute,donors,value,decoded,mode,tie_policy\n");
}

TEST_F(Cli, ImputeIsDeterministicAndLeavesInputAlone) {
  const std::string before = test::slurp(test::fixture("table03.csv"));
  RunConfig c = impute_config(test::fixture("table03.csv").string(), test::fixture("schema_numeric.json").string());
  c.seed = 3;
  std::ostringstream a, b;
  ASSERT_EQ(cli::cmd_impute(c, a, err_), 0);
  ASSERT_EQ(cli::cmd_impute(c, b, err_), 0);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(test::slurp(test::fixture("table03.csv")), before);
}

TEST_F(Cli, ImputeAllMissingRecordExits3) {
  const std::string data = write("hollow.csv",
                                 "Record,A1,A2,A3,A4,Decision Class\nR1,1,5,1,10,CLASS-1\nR2,3,7,1,5,CLASS-2\n"
                                 "R3,?,?,?,?,CLASS-1\nR4,2,5,1,10,CLASS-1\n");
  const RunConfig c = impute_config(data, test::fixture("schema_numeric.json").string());
  EXPECT_EQ(cli::cmd_impute(c, out_, err_), 3);
  EXPECT_NE(err_.str().find("R3"), std::string::npos);
  EXPECT_EQ(run_tool("impute --data " + data + " --schema " + c.schema), 3);
  EXPECT_NE(test::slurp(dir_ / "stderr").find("R3"), std::string::npos);
}

TEST_F(Cli, ImputeParseErrorsExit2) {
  const std::string bad = write("bad.csv", "Record,A1,A2,A3,A4,Decision Class\nR1,1,5,x,10,CLASS-1\n");
  EXPECT_EQ(cli::cmd_impute(impute_config(bad, test::fixture("schema_numeric.json").string()), out_, err_), 2);
  EXPECT_EQ(cli::cmd_impute(impute_config(bad, (dir_ / "none.json").string()), out_, err_), 2);
}

TEST_F(Cli, ClassifyR10) {
  RunConfig c = classify_config(test::fixture("query_r10.csv").string());
  c.mode = "paper-signed";
  c.with_knn_baseline = true;
  c.d_table = (dir_ / "d.csv").string();
  ASSERT_EQ(cli::cmd_classify(c, out_, err_), 0) << err_.str();
  EXPECT_EQ(out_.str(),
            "query,labels,nearest,mode,knn_labels,knn_nearest\n"
            "R10,Level-2,R8,paper-signed,Level-1;Level-2,R4;R9\n");
  const std::string d = test::slurp(c.d_table);
  EXPECT_NE(d.find("R10,R8,-0.1986"), std::string::npos);
}

TEST_F(Cli, ClassifyAbsoluteDefault) {
  const RunConfig c = classify_config(test::fixture("query_r10.csv").string());
  ASSERT_EQ(cli::cmd_classify(c, out_, err_), 0) << err_.str();
  EXPECT_EQ(out_.str(), "query,labels,nearest,mode\nR10,Level-2,R9,absolute\n");
}

TEST_F(Cli, ClassifyEmptyQueryFile) {
  const RunConfig c = classify_config(write("empty.csv", ""));
  EXPECT_EQ(cli::cmd_classify(c, out_, err_), 0);
  EXPECT_EQ(out_.str(), "query,labels,nearest,mode\n");
}

TEST_F(Cli, ClassifyWrongArityExits2WithRow) {
  const RunConfig c = classify_config(write("q.csv", "Record,P1,P2,P3,P4\nR10,2,5,2,9\nR11,2,5,2\n"));
  EXPECT_EQ(cli::cmd_classify(c, out_, err_), 2);
  EXPECT_NE(err_.str().find("3"), std::string::npos) << err_.str();
}

TEST_F(Cli, ClassifyUnlabeledTrainingExits4) {
  RunConfig c = classify_config(test::fixture("query_r10.csv").string());
  c.train = write("train.csv",
                  "Record,P1,P2,P3,P4,Disease Class or Type\nR1,1,5,1,10,Level-1\nR2,3,7,1,5,\nR3,1,7,2,7,Level-2\n");
  c.partition.clear();
  EXPECT_EQ(cli::cmd_classify(c, out_, err_), 4);
  EXPECT_EQ(run_tool("classify --train " + c.train + " --query " + c.query + " --schema " + c.schema), 4);
}

TEST_F(Cli, EvaluateWritesReportAndSummary) {
  const std::string spec = write("exp.json", R"({"dataset":{"synthetic":{"clusters":2,"per_cluster":8}},
      "methods":["cluster-map-absolute","class-mean-mode"],"rates":[0.1],"trials":2,"master_seed":1})");
  RunConfig c;
  c.experiment = spec;
  c.summary = (dir_ / "summary.csv").string();
  ASSERT_EQ(cli::cmd_evaluate(c, out_, err_), 0) << err_.str();
  EXPECT_NE(out_.str().find("artifact-generated"), std::string::npos);
  EXPECT_EQ(test::slurp(c.summary).substr(0, 12), "method,rate,");
  RunConfig bad;
  bad.experiment = write("bad.json", "{\"methods\":[]}");
  EXPECT_EQ(cli::cmd_evaluate(bad, out_, err_), 2);
}

TEST_F(Cli, CasestudyExitCodes) {
  RunConfig c;
  c.fixtures = CMI_TEST_FIXTURES;
  EXPECT_EQ(cli::cmd_casestudy(c, out_, err_), 0) << err_.str();
  c.tolerance = 1e-7;
  EXPECT_EQ(cli::cmd_casestudy(c, out_, err_), 5);
  EXPECT_NE(err_.str().find("mismatch: table"), std::string::npos);
  c.tolerance = 1e-5;
  c.fixtures = (dir_ / "missing").string();
  EXPECT_EQ(cli::cmd_casestudy(c, out_, err_), 2);
}

TEST_F(Cli, BinaryExitCodes) {
  EXPECT_EQ(run_tool(std::string("casestudy --fixtures ") + CMI_TEST_FIXTURES), 0);
  EXPECT_EQ(run_tool(std::string("casestudy --tolerance 1e-7 --fixtures ") + CMI_TEST_FIXTURES), 5);
  EXPECT_EQ(run_tool("casestudy --fixtures " + (dir_ / "missing").string()), 2);
  EXPECT_EQ(run_tool("impute --bogus"), 2);
  EXPECT_EQ(run_tool(""), 2);
  EXPECT_EQ(run_tool("--help"), 0);
}

TEST_F(Cli, SettingsFileSuppliesOptions) {
  const std::string ini = write("settings.ini", "[impute]\nmode=paper-signed\npartition=\"R1,R4,R6,R9;R2,R7,R8\"\n");
  const std::string out = (dir_ / "out.csv").string();
  ASSERT_EQ(run_tool("--settings " + ini + " impute --data " + test::fixture("table03.csv").string() +
                     " --schema " + test::fixture("schema_numeric.json").string() + " --out " + out),
            0)
      << test::slurp(dir_ / "stderr");
  EXPECT_EQ(test::slurp(out), test::slurp(test::fixture("table02.csv")));
}
