// qottoctl: run presets or config files, validate configs, list presets.
#include "qotto/config.hpp"
#include "qotto/runner.hpp"
#include "qotto/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

using qotto::config::ConfigError;
using qotto::config::RunConfig;

int fail(int code, const nlohmann::json& error) {
  std::cerr << error.dump() << "\n";
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The preset named on the command line is the base; a config file overrides
// it. A config file may also name its own preset when --preset is absent.
RunConfig assemble(const std::string& preset_name, const std::string& config_path) {
  if (config_path.empty()) return qotto::config::preset(preset_name);
  const std::string text = slurp(config_path);
  if (preset_name.empty()) return qotto::config::parse_config(text, config_path);
  const RunConfig from_file = qotto::config::parse_config(text, config_path);
  if (from_file.preset != "custom" && from_file.preset != preset_name)
    throw ConfigError("preset", "config file names preset '" + from_file.preset + "' but --preset is '" +
                                    preset_name + "'");
  RunConfig c = qotto::config::preset(preset_name);
  qotto::config::apply_overrides(c, nlohmann::json::parse(text));
  return c;
}

void print_warnings(const std::vector<qotto::config::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    if (d.severity == qotto::config::Diagnostic::Severity::warning)
      std::cerr << "warning: " << d.field << ": " << d.message << "\n";
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return fail(kExitConfig, e.to_json());
  } catch (const qotto::NumericalError& e) {
    return fail(kExitNumerical, {{"error", "numerical"}, {"message", e.what()}});
  } catch (const qotto::thermometry::FitError& e) {
    return fail(kExitNumerical, {{"error", "fit"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    return fail(1, {{"error", "internal"}, {"message", e.what()}});
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Otto engine simulator and phonon thermometry"};
  app.set_version_flag("--version", std::string(qotto::version()));
  app.require_subcommand(1);

  std::string preset_name, config_path, out_dir;
  std::uint64_t seed = 0;
  int jobs = 0;
  auto* run = app.add_subcommand("run", "run a preset or config file and write its outputs");
  run->add_option("--preset", preset_name, "preset name (see list-presets)");
  run->add_option("--config", config_path, "JSON config file overriding the preset");
  auto* out_opt = run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "master seed for stochastic stages");
  auto* jobs_opt = run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a config file and list diagnostics");
  validate->add_option("--config", validate_path, "JSON config file")->required();

  auto* list = app.add_subcommand("list-presets", "print the available presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitConfig, {{"error", "usage"}, {"message", e.what()}});
  }

  if (*list) {
    for (const auto& name : qotto::config::preset_names())
      std::cout << name << "\t" << qotto::config::preset_description(name) << "\n";
    std::cout << "note: every preset uses eta = " << qotto::drive::EngineParams{}.eta
              << ", an assumed Lamb-Dicke parameter rather than a measured one\n";
    return 0;
  }

  if (*validate) {
    return guarded([&] {
      const RunConfig c = qotto::config::load_config(validate_path);
      const auto diagnostics = qotto::config::validate(c);
      std::cout << qotto::config::to_json(diagnostics).dump(2) << "\n";
      return qotto::config::has_errors(diagnostics) ? kExitConfig : 0;
    });
  }

  return guarded([&] {
    if (preset_name.empty() && config_path.empty()) throw ConfigError("preset", "run needs --preset or --config");
    RunConfig c = assemble(preset_name, config_path);
    if (*seed_opt) c.seed = seed;
    if (*jobs_opt) c.jobs = jobs;
    if (*out_opt) c.output = out_dir;
    const auto diagnostics = qotto::config::validate(c);
    if (qotto::config::has_errors(diagnostics)) {
      for (const auto& d : diagnostics)
        if (d.severity == qotto::config::Diagnostic::Severity::error) throw ConfigError(d.field, d.message);
    }
    print_warnings(diagnostics);
    const auto result = qotto::runner::run(c, c.output);
    std::cout << nlohmann::json{{"output", c.output}, {"files", result.files}, {"summary", result.summary}}.dump(2)
              << "\n";
    return 0;
  });
}
