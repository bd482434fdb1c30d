#include <gtest/gtest.h>

#include <filesystem>
#include <unistd.h>

#include "dsep/cli.hpp"
#include "dsep/io.hpp"
#include "dsep/qpat.hpp"

using namespace dsep;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dsep_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

int quiet(const std::vector<std::string>& args) {
  ::testing::internal::CaptureStdout();
  ::testing::internal::CaptureStderr();
  const int rc = run(args);
  ::testing::internal::GetCapturedStdout();
  ::testing::internal::GetCapturedStderr();
  return rc;
}

}  // namespace

TEST_F(CliTest, PhantomWritesGrid) {
  ASSERT_EQ(quiet({"phantom", "--kind", "shepp_logan", "--d", "32", "--out", path("p.rg2")}), 0);
  const auto g = read_rg2(path("p.rg2"));
  EXPECT_EQ(g.vector(), shepp_logan(32).vector());
}

TEST_F(CliTest, DictInfo) {
  ::testing::internal::CaptureStdout();
  const int rc = run({"dict", "info", "--kind", "haar2d", "--J", "3"});
  const auto out = ::testing::internal::GetCapturedStdout();
  EXPECT_EQ(rc, 0);
  EXPECT_NE(out.find("n: 64"), std::string::npos);
  EXPECT_NE(out.find("m: 64"), std::string::npos);
}

TEST_F(CliTest, ConvertRoundTrip) {
  ASSERT_EQ(quiet({"phantom", "--kind", "convex_inclusions", "--d", "16", "--out", path("a.rg2")}), 0);
  ASSERT_EQ(quiet({"convert", "--in", path("a.rg2"), "--out", path("a.csv")}), 0);
  ASSERT_EQ(quiet({"convert", "--in", path("a.csv"), "--out", path("b.rg2")}), 0);
  EXPECT_EQ(read_file(path("a.rg2")), read_file(path("b.rg2")));
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  EXPECT_EQ(quiet({"phantom", "--kind", "nope", "--out", path("x.rg2")}), 1);
  EXPECT_EQ(quiet({"tv", "--in", path("missing.rg2"), "--out", path("y.rg2")}), 1);
  EXPECT_EQ(quiet({"no-such-command"}), 1);
  write_file_atomic(path("bad.cfg"), "phantom = shepp_logan\nunknown_key = 3\n");
  EXPECT_EQ(quiet({"qpat-gamma1", path("bad.cfg"), "--out", path("o")}), 1);
}

TEST_F(CliTest, NumericalFailureExitsTwo) {
  write_rg2(path("D.rg2"), Grid2(16, 1.0));
  write_rg2(path("mu.rg2"), Grid2(16, 1.0));
  EXPECT_EQ(quiet({"solve", "--D", path("D.rg2"), "--mu", path("mu.rg2"), "--family", "gamma1", "--index", "2",
                   "--tolerance", "1e-300", "--out", path("u.rg2")}),
            2);
  EXPECT_FALSE(fs::exists(path("u.rg2")));
}

TEST_F(CliTest, Gamma1MetricsAndDeterminism) {
  write_file_atomic(path("run.cfg"),
                    "phantom = convex_inclusions\nd = 16\nJ = 4\nL = 2\nN = 2\nnoise_level = 0.05\nseed = 3\n"
                    "iterations = 60\n");
  ASSERT_EQ(quiet({"qpat-gamma1", path("run.cfg"), "--out", path("a")}), 0);
  ASSERT_EQ(quiet({"qpat-gamma1", path("run.cfg"), "--out", path("b")}), 0);
  const auto m = parse_csv(read_file(path("a/metrics.csv")));
  EXPECT_EQ(m.header, (std::vector<std::string>{"stage", "N", "error", "residual"}));
  EXPECT_FALSE(m.rows.empty());
  for (const auto& e : fs::directory_iterator(path("a"))) {
    const auto name = e.path().filename().string();
    EXPECT_EQ(read_file(e.path().string()), read_file(path("b/" + name))) << name;
  }
}
