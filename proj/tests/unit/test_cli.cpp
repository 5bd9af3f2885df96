#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "qotto_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int qottoctl(const std::string& args) {
  const std::string cmd = std::string(QOTTOCTL_PATH) + " " + args + " > " + (workdir() / "stdout.txt").string() +
                          " 2> " + (workdir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_config(const std::string& name, const std::string& body) {
  const auto path = workdir() / name;
  std::ofstream(path) << body;
  return path.string();
}

nlohmann::json stderr_json() {
  std::ifstream in(workdir() / "stderr.txt");
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty() && line.front() == '{') last = line;
  return nlohmann::json::parse(last);
}

}  // namespace

TEST(Cli, ListPresets) {
  EXPECT_EQ(qottoctl("list-presets"), 0);
  std::ifstream in(workdir() / "stdout.txt");
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  for (const char* name : {"fig2", "fig3", "fig4", "fig5", "figS3", "figS5", "figS6", "figS7", "rwa-check"})
    EXPECT_NE(text.find(name), std::string::npos) << name;
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(qottoctl("validate --config " + write_config("ok.json", R"({"preset": "fig2"})")), 0);
  EXPECT_EQ(qottoctl("validate --config " + write_config("neg.json", R"({"preset": "fig2", "params": {"tau_us": -3}})")), 2);
  EXPECT_EQ(qottoctl("validate --config " + write_config("broken.json", "{\"seed\": 1,,}")), 2);
  EXPECT_EQ(stderr_json()["error"], "config");
  EXPECT_EQ(qottoctl("validate --config " + (workdir() / "missing.json").string()), 2);
}

TEST(Cli, ValidateReportsWarnings) {
  EXPECT_EQ(qottoctl("validate --config " + write_config("eta0.json", R"({"preset": "fig2", "params": {"eta": 0}})")), 0);
  std::ifstream in(workdir() / "stdout.txt");
  const auto diags = nlohmann::json::parse(in);
  ASSERT_TRUE(diags.is_array());
  bool decoupled = false;
  for (const auto& d : diags) decoupled |= d["severity"] == "warning" && d["field"] == "params.eta";
  EXPECT_TRUE(decoupled);
}

TEST(Cli, RunPresetWritesOutputs) {
  const auto out = workdir() / "s3";
  EXPECT_EQ(qottoctl("run --preset figS3 --seed 9 --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "cd_profile.csv"));
  std::ifstream in(out / "manifest.json");
  const auto manifest = nlohmann::json::parse(in);
  EXPECT_EQ(manifest["seed"], 9);
}

TEST(Cli, RunErrors) {
  EXPECT_EQ(qottoctl("run --preset fig9"), 2);
  EXPECT_EQ(stderr_json()["field"], "preset");
  EXPECT_EQ(qottoctl("run"), 2);
  EXPECT_EQ(qottoctl("run --preset figS3 --jobs 0"), 2);
  const auto leaky = write_config("leak.json", R"({"preset": "fig2", "params": {"eta": 0.6, "tau_us": 119},
      "fock": {"n_max": 1, "guard_levels": 1}, "sweep": {"cycles": [6]}, "expected_n_bar": null,
      "include_dephased": false})");
  EXPECT_EQ(qottoctl("run --config " + leaky + " --out " + (workdir() / "leak").string()), 3);
  EXPECT_EQ(stderr_json()["error"], "numerical");
}
