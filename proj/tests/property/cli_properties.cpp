#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "commands.hpp"
#include "test_support.hpp"

namespace pwahier::cli {
namespace {

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, std::string* header = nullptr) {
  std::istringstream in(test::read_file(path));
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

TEST(CliProperty, RepeatedRunsAreByteIdentical) {
  for (const char* name : {"case1.model", "case2.model"}) {
    RunOptions a;
    a.out_dir = test::scratch_dir(std::string("det_a_") + name);
    RunOptions b;
    b.out_dir = test::scratch_dir(std::string("det_b_") + name);
    ASSERT_EQ(cmd_run(test::model_path(name), a).exit_code, kExitOk);
    ASSERT_EQ(cmd_run(test::model_path(name), b).exit_code, kExitOk);
    for (const char* f : {"trajectory.csv", "bounds.csv", "certified.model"}) {
      EXPECT_EQ(test::read_file(a.out_dir / f), test::read_file(b.out_dir / f)) << name << " " << f;
    }
  }
}

TEST(CliProperty, ReportIsRecomputableFromCsv) {
  for (const char* name : {"case1.model", "case2.model"}) {
    RunOptions opts;
    opts.out_dir = test::scratch_dir(std::string("recompute_") + name);
    const RunReport r = cmd_run(test::model_path(name), opts);
    ASSERT_EQ(r.exit_code, kExitOk);
    const auto bounds = read_csv(opts.out_dir / "bounds.csv");
    std::string header;
    const auto traj = read_csv(opts.out_dir / "trajectory.csv", &header);
    ASSERT_EQ(bounds.size(), r.samples);
    ASSERT_EQ(traj.size(), r.samples);
    double max_err = 0, max_delta = 0, max_v = 0;
    std::size_t violations = 0;
    for (const auto& row : bounds) {
      max_err = std::max(max_err, row[1]);
      max_delta = std::max(max_delta, row[3]);
      if (!(row[1] <= row[2] + kBoundChainSlack) || !(row[2] <= row[3] + kBoundChainSlack)) ++violations;
    }
    for (const auto& row : traj) max_v = std::max(max_v, row[row.size() - 3]);
    EXPECT_EQ(max_err, r.max_err);
    EXPECT_EQ(max_delta, r.max_delta);
    EXPECT_EQ(max_v, r.max_v);
    EXPECT_EQ(violations, r.violations);
    const std::size_t n = r.terminal_x1.size();
    for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(traj.back()[1 + k], r.terminal_x1[k]);
  }
}

}  // namespace
}  // namespace pwahier::cli
