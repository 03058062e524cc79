#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "h2dfo/cli.hpp"
#include "h2dfo/profiles.hpp"

namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "h2dfo");
  std::ostringstream out, err;
  Invocation r;
  r.code = h2dfo::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("h2dfo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SolveWritesOneRecord) {
  const Invocation r = invoke({"solve", "--problem", "ROSENBROCK", "--n", "2", "--model", "h2", "--m", "4", "--delta0", "1",
                     "--seed", "0", "--out", path("run.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("run.jsonl"));
  const std::vector<h2dfo::RunRecord> recs = h2dfo::read_records(in);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].problem_id, "ROSENBROCK");
  EXPECT_EQ(recs[0].dim, 2u);
  EXPECT_FALSE(recs[0].history.empty());
  EXPECT_NE(r.out.find("best f"), std::string::npos);
}

TEST_F(CliTest, ProfileFromComparedRecords) {
  ASSERT_EQ(invoke({"compare", "--problem", "SPHERE,VARDIM,ARGLINA", "--n", "3", "--max-nf", "80", "--out",
                 path("runs.jsonl")})
                .code,
            0);
  const Invocation r = invoke({"profile", "--tau", "1e-3", "--records", path("runs.jsonl"), "--out", path("prof.csv"),
                     "--plot", path("prof.gp")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* file : {"prof.csv", "prof_data.csv"}) {
    std::istringstream in(slurp(path(file)));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("abscissa,", 0), 0u);
    std::vector<double> last;
    while (std::getline(in, line)) {
      std::vector<double> row;
      std::stringstream cells(line);
      std::string cell;
      std::getline(cells, cell, ',');
      while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
      ASSERT_EQ(row.size(), 3u);
      for (std::size_t i = 0; i < row.size(); ++i) {
        EXPECT_GE(row[i], 0.0);
        EXPECT_LE(row[i], 1.0);
        if (!last.empty()) {
          EXPECT_GE(row[i], last[i]);
        }
      }
      last = row;
    }
    EXPECT_FALSE(last.empty());
  }
  EXPECT_TRUE(fs::exists(path("prof.gp")));
}

TEST_F(CliTest, ReproTable2PrintsFrobeniusModel) {
  const Invocation r = invoke({"repro-table2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("(-2.0000, -62.0000)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("76.0000"), std::string::npos) << r.out;
}

TEST_F(CliTest, ReproExample1Runs) {
  const Invocation r = invoke({"repro-example1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.out.empty());
}

TEST_F(CliTest, ErrorsExitNonzeroWithOneLine) {
  const std::vector<std::vector<std::string>> bad = {
      {"solve", "--problem", "NOPE", "--n", "2"},
      {"solve", "--problem", "ROSENBROCK", "--n", "2", "--bogus"},
      {"solve", "--problem", "ROSENBROCK", "--n", "two"},
      {"profile", "--records", path("missing.jsonl")},
      {"frobnicate"},
      {},
  };
  for (const auto& args : bad) {
    const Invocation r = invoke(args);
    EXPECT_NE(r.code, 0);
    EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  }
}

TEST_F(CliTest, UnknownProblemListsTheRegistry) {
  const Invocation r = invoke({"solve", "--problem", "NOPE", "--n", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ROSENBROCK"), std::string::npos);
}

TEST_F(CliTest, IdenticalInvocationsGiveIdenticalFiles) {
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    ASSERT_EQ(invoke({"compare", "--problem", "ROSENBROCK,TRIGONOMETRIC", "--n", "4", "--max-nf", "120", "--seed", "3",
                   "--out", path(name)})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
  for (const char* name : {"a.csv", "b.csv"}) {
    ASSERT_EQ(invoke({"profile", "--records", path("a.jsonl"), "--out", path(name)}).code, 0);
  }
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a_data.csv")), slurp(path("b_data.csv")));
}
