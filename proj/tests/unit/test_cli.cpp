#include "hdmrge/cli.hpp"
#include "hdmrge/dataset.hpp"

#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hdmrge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    const auto train = synth::blobs(45, 3, 3, 4.0, 1);
    const auto test = synth::blobs(30, 3, 3, 4.0, 1);
    write(dir_ / "train.csv", train);
    write(dir_ / "test.csv", test);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static void write(const fs::path& p, const synth::Labeled& d) {
    hdmrge::LabeledDataset ds;
    ds.samples = d.x;
    ds.labels = d.labels;
    hdmrge::write_matrix_csv(p, ds);
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "hdmrge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return hdmrge::run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(Cli, FitTransformEvaluatePipeline) {
  ASSERT_EQ(run({"fit", "--data", p("train.csv"), "--method", "hdmr", "--p", "3", "--beta", "10", "--k", "3",
                 "--d", "2", "--out", p("model.txt"), "--embedding", p("train_emb.csv")}),
            0)
      << err_.str();
  ASSERT_EQ(run({"transform", "--model", p("model.txt"), "--data", p("test.csv"), "--labeled", "--out",
                 p("test_emb.csv")}),
            0)
      << err_.str();
  ASSERT_EQ(run({"evaluate", "--embedding", p("test_emb.csv"), "--reference", p("train_emb.csv"), "--out",
                 p("metrics.csv")}),
            0)
      << err_.str();
  std::ifstream in(dir_ / "metrics.csv");
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "d,oa,kappa,nmi,fisher,fisher_rank_deficient,silhouette,class_1,class_2,class_3");
  EXPECT_EQ(row.rfind("2,", 0), 0u);
  const auto emb = hdmrge::load_matrix_csv(dir_ / "test_emb.csv");
  EXPECT_EQ(emb.features(), 2u);
  EXPECT_EQ(emb.size(), 30u);
}

TEST_F(Cli, TransformUnlabeledFeatures) {
  ASSERT_EQ(run({"fit", "--data", p("train.csv"), "--method", "lpp", "--k", "2", "--d", "2", "--out", p("m.txt")}), 0);
  hdmrge::write_features_csv(dir_ / "x.csv", Eigen::MatrixXd::Random(4, 3));
  ASSERT_EQ(run({"transform", "--model", p("m.txt"), "--data", p("x.csv"), "--out", p("y.csv")}), 0) << err_.str();
  EXPECT_EQ(hdmrge::load_features_csv(dir_ / "y.csv").cols(), 2);
}

TEST_F(Cli, EvaluateLeaveOneOutToStdout) {
  ASSERT_EQ(run({"evaluate", "--embedding", p("train.csv")}), 0) << err_.str();
  EXPECT_EQ(out_.str().rfind("d,oa,", 0), 0u);
}

TEST_F(Cli, ExperimentWithOverrides) {
  std::ofstream(dir_ / "cfg.txt") << "dataset = train.csv\nk = 1\nn_repeats = 5\n";
  ASSERT_EQ(run({"experiment", "--config", p("cfg.txt"), "--method", "lpp", "--p", "1", "--beta", "0,1", "--k",
                 "2,3", "--d", "3", "--train-fraction", "0.3", "--seeds", "4,5", "--snr", "10", "--out", p("rep")}),
            0)
      << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "rep" / "learning_curve.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "rep" / "snr.csv"));
  std::ifstream in(dir_ / "rep" / "manifest.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("method = lpp"), std::string::npos);
  EXPECT_NE(ss.str().find("seeds = 4,5"), std::string::npos);
  EXPECT_NE(ss.str().find("d_max = 3"), std::string::npos);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({"fit", "--data", p("train.csv")}), 2);
  EXPECT_EQ(run({"fit", "--data", p("train.csv"), "--p", "x", "--out", p("m.txt")}), 2);
  EXPECT_EQ(run({"fit", "--data", p("train.csv"), "--method", "pca", "--out", p("m.txt")}), 2);
  EXPECT_EQ(run({"fit", "--data", p("train.csv"), "--k", "40", "--out", p("m.txt")}), 2);
  std::ofstream(dir_ / "bad.txt") << "unknown = 1\n";
  EXPECT_EQ(run({"experiment", "--config", p("bad.txt")}), 2);
}

TEST_F(Cli, DataErrorsExitThree) {
  EXPECT_EQ(run({"fit", "--data", p("missing.csv"), "--out", p("m.txt")}), 3);
  std::ofstream(dir_ / "nan.csv") << "1,nan,1\n2,3,1\n";
  EXPECT_EQ(run({"fit", "--data", p("nan.csv"), "--out", p("m.txt")}), 3);
  std::ofstream(dir_ / "junk.txt") << "not a model\n";
  EXPECT_EQ(run({"transform", "--model", p("junk.txt"), "--data", p("test.csv"), "--out", p("o.csv")}), 3);
}

TEST_F(Cli, NumericalErrorsExitFour) {
  // Every sample identical within each class and across features: the
  // constraint matrix is zero and cannot be factorized.
  std::ofstream(dir_ / "flat.csv") << "1,1,1\n1,1,1\n1,1,2\n1,1,2\n";
  EXPECT_EQ(run({"fit", "--data", p("flat.csv"), "--method", "lpp", "--k", "1", "--d", "1", "--out", p("m.txt")}), 4)
      << err_.str();
}

TEST_F(Cli, HelpAndVersionExitZero) {
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_EQ(run({"--version"}), 0);
}

}  // namespace
