// Run configuration: JSON document <-> RunConfig, presets, and validation.
//
// Frequencies in the document carry their unit in the key name:
//   "<name>_MHz"        cyclic frequency, converted with the 2 pi factor to rad/us
//   "<name>_rad_per_us" angular frequency, taken as is
// Giving both spellings of the same quantity is a configuration error.
#pragma once

#include "qotto/drive.hpp"
#include "qotto/engine.hpp"
#include "qotto/hilbert.hpp"
#include "qotto/thermometry.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qotto::config {

// Invalid or unparseable configuration. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message);
  const std::string& field() const { return field_; }
  nlohmann::json to_json() const;

 private:
  std::string field_;
};

// What a run computes and which curves it writes.
enum class RunKind {
  cycles,       // n_bar after each cycle, N sweep
  tau_sweep,    // power after a fixed number of cycles, tau sweep
  cd_profile,   // counterdiabatic amplitude over one cycle
  thermometry,  // synthetic sideband scan and population fits
  sigma_y,      // <sigma_y> along both strokes of one cycle
  rwa_check,    // lab-frame vs interaction-frame fidelity over one stroke
};
RunKind parse_kind(std::string_view name);
std::string_view to_string(RunKind kind);

enum class Emit { csv, json, both };
Emit parse_emit(std::string_view name);
std::string_view to_string(Emit e);

struct SweepSpec {
  enum class Axis { none, cycles, tau };
  Axis axis = Axis::none;
  std::vector<int> cycles;    // axis == cycles
  std::vector<double> taus;   // axis == tau, us
  int n_cycles = 1;           // fixed N for tau sweeps
};

struct ThermometryConfig {
  double omega_bsb = drive::kTwoPi * 0.02;
  std::optional<double> eta;  // defaults to the engine eta
  int points = 60;
  double periods = 3.0;
  int shots = 200;
  double source_n_bar = 2.9;
  int source_levels = 200;
  thermometry::FitPolicy policy{};
  std::vector<int> compare_cutoffs{8, 9, 19};
  int bootstrap_resamples = 200;
};

struct RunConfig {
  std::string preset = "custom";
  RunKind kind = RunKind::cycles;
  drive::EngineParams params{};
  hilbert::FockSpace fock{};
  int max_dimension = hilbert::kDefaultMaxDimension;
  engine::CycleOptions options{};
  std::vector<bool> variants{false, true};  // with_cd per variant: NA, STA
  bool include_dephased = false;
  SweepSpec sweep{};
  std::optional<ThermometryConfig> thermometry;
  std::optional<double> expected_n_bar;
  std::uint64_t seed = 1;
  std::string output = "out";
  Emit emit = Emit::both;
  int jobs = 1;
};

struct Diagnostic {
  enum class Severity { warning, error };
  Severity severity = Severity::warning;
  std::string field;
  std::string message;
};
nlohmann::json to_json(const std::vector<Diagnostic>& diagnostics);

// Preset registry.
std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);
RunConfig preset(const std::string& name);  // throws ConfigError

// Parses a document. A "preset" key selects the base configuration; every
// other key overrides it. Parse errors carry line and column.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);
// Applies document overrides on top of an existing configuration.
void apply_overrides(RunConfig& config, const nlohmann::json& doc);

// Normalized echo (all frequencies in rad/us).
nlohmann::json to_json(const RunConfig& config);

std::vector<Diagnostic> validate(const RunConfig& config);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace qotto::config
