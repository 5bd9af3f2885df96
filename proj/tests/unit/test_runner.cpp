#include "qotto/runner.hpp"

#include "qotto/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qotto;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qotto_runner_tests" / name;
  fs::remove_all(dir);
  return dir;
}

// A cheap cycles run: small space, short cycle, few N.
config::RunConfig small_cycles() {
  auto c = config::preset("fig2");
  c.params.tau = 12.0;
  c.fock = {6, 5};
  c.sweep.cycles = {1, 2, 3};
  c.expected_n_bar.reset();
  return c;
}

}  // namespace

TEST(ParallelMap, ResultsOrderedByIndexForAnyWorkerCount) {
  std::function<int(int)> square = [](int i) { return i * i; };
  const auto a = runner::parallel_map<int>(17, 1, square);
  const auto b = runner::parallel_map<int>(17, 4, square);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[16], 256);
  std::function<int(int)> boom = [](int i) -> int {
    if (i == 3 || i == 7) throw std::runtime_error("task " + std::to_string(i));
    return i;
  };
  try {
    runner::parallel_map<int>(10, 3, boom);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "task 3");
  }
}

TEST(Run, CyclesWritesDocumentedFiles) {
  const auto dir = scratch("cycles");
  const auto out = runner::run(small_cycles(), dir.string());
  for (const char* f : {"n_bar_vs_cycles.csv", "metrics.csv", "schema.json", "manifest.json", "cost_ratios.json",
                        "points/point_0000.json"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_TRUE(fs::exists(dir / "run_info.json"));
  const auto table = io::CsvTable::read((dir / "n_bar_vs_cycles.csv").string());
  ASSERT_EQ(table.rows().size(), 3u);
  EXPECT_EQ(table.header().front(), "N");
  const auto schema = io::read_json((dir / "schema.json").string());
  for (const auto& col : schema["files"]["n_bar_vs_cycles.csv"]["columns"]) EXPECT_FALSE(col["description"].get<std::string>().empty());
  const auto manifest = io::read_json((dir / "manifest.json").string());
  EXPECT_EQ(manifest["seed"], 1);
  EXPECT_FALSE(manifest["version"].get<std::string>().empty());
  EXPECT_EQ(manifest["config"]["preset"], "fig2");
}

TEST(Run, ByteIdenticalAcrossRunsAndWorkerCounts) {
  auto c = small_cycles();
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  runner::run(c, a.string());
  c.jobs = 3;
  runner::run(c, b.string());
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file() || entry.path().filename() == "run_info.json") continue;
    const auto rel = fs::relative(entry.path(), a);
    EXPECT_EQ(slurp(entry.path()), slurp(b / rel)) << rel;
    ++compared;
  }
  EXPECT_GT(compared, 5);
}

TEST(Run, EmitModesSelectOutputs) {
  auto c = config::preset("figS3");
  c.emit = config::Emit::json;
  const auto dir = scratch("emit_json");
  runner::run(c, dir.string());
  EXPECT_FALSE(fs::exists(dir / "cd_profile.csv"));
  EXPECT_TRUE(fs::exists(dir / "cost_ratios.json"));
}

TEST(Run, InvalidConfigIsRejectedBeforeWork) {
  auto c = small_cycles();
  c.params.tau = -1.0;
  EXPECT_THROW(runner::run(c, scratch("bad").string()), config::ConfigError);
}

TEST(Run, LeakageSurfacesAsNumericalError) {
  auto c = small_cycles();
  c.params.eta = 0.6;
  c.params.tau = 119.0;
  c.fock = {1, 1};
  c.sweep.cycles = {6};
  EXPECT_THROW(runner::run(c, scratch("leak").string()), NumericalError);
}

TEST(Run, ThermometryEmitsFitsAndSignal) {
  auto c = config::preset("figS5");
  c.thermometry->bootstrap_resamples = 20;
  c.thermometry->compare_cutoffs = {8};
  const auto dir = scratch("thermo");
  const auto out = runner::run(c, dir.string());
  EXPECT_TRUE(fs::exists(dir / "signal.csv"));
  const auto table = io::CsvTable::read((dir / "signal.csv").string());
  EXPECT_EQ(table.header(), (std::vector<std::string>{"time_us", "p_down", "shots"}));
  const auto fit = io::read_json((dir / "fit_selected.json").string());
  EXPECT_TRUE(fit.contains("bootstrap"));
  EXPECT_TRUE(fs::exists(dir / "fit_n_max_08.json"));
  EXPECT_TRUE(fs::exists(dir / "populations.csv"));
}
