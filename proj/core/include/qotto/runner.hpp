// Executes a RunConfig: simulations per run kind, then deterministic output.
#pragma once

#include "qotto/analysis.hpp"
#include "qotto/config.hpp"
#include "qotto/thermometry.hpp"

#include <nlohmann/json.hpp>

#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace qotto::runner {

// Runs fn(0..n-1) on up to `jobs` threads. Results are stored by index, so the
// outcome never depends on scheduling; the lowest-index exception is rethrown.
template <class T>
std::vector<T> parallel_map(int n, int jobs, const std::function<T(int)>& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](int worker, int stride) {
    for (int i = worker; i < n; i += stride) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w, jobs);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct VariantCurve {
  bool with_cd = false;
  std::vector<double> n_bar;          // coherent run, index N-1
  std::vector<double> n_bar_dephased; // classical baseline run (optional)
  engine::CycleRecord record;
};

struct CyclesResult {
  std::vector<int> cycles;
  std::vector<VariantCurve> variants;
  analysis::CostRatios cost;
};
CyclesResult simulate_cycles(const config::RunConfig& config);

struct TauPoint {
  double tau = 0.0;
  std::vector<double> n_bar;  // per variant
  std::vector<double> power;
  std::vector<double> power_subtracted;
  analysis::CostRatios cost;
};
struct TauSweepResult {
  int n_cycles = 1;
  std::vector<bool> variants;
  std::vector<TauPoint> points;
};
TauSweepResult simulate_tau_sweep(const config::RunConfig& config);

struct SigmaYResult {
  std::vector<bool> variants;
  std::vector<std::vector<engine::StrokeTrace>> traces;  // per variant: expansion, compression
};
SigmaYResult simulate_sigma_y(const config::RunConfig& config);

struct RwaCheckResult {
  std::vector<double> time_us;
  std::vector<double> fidelity;
  std::vector<double> n_bar_lab, n_bar_rwa;
  std::vector<double> up_lab, up_rwa;
  double min_fidelity = 1.0;
};
RwaCheckResult simulate_rwa_check(const config::RunConfig& config);

struct ThermometryFitEntry {
  std::string label;  // "selected" or "n_max_<k>"
  thermometry::PhononFit fit;
  std::optional<thermometry::BootstrapResult> bootstrap;
};
struct ThermometryResult {
  thermometry::ThermometryScan scan;
  std::vector<double> source;
  thermometry::Signal signal;
  std::vector<ThermometryFitEntry> fits;
};
ThermometryResult simulate_thermometry(const config::RunConfig& config);

// Full run: validates (throws ConfigError on errors), simulates, and writes
// data files, the schema sidecar and the manifest into out_dir. The wall-clock
// timestamp goes to run_info.json so every other file is reproducible.
struct RunOutput {
  std::vector<std::string> files;  // relative to out_dir, sorted
  nlohmann::json summary;
};
RunOutput run(const config::RunConfig& config, const std::string& out_dir);

}  // namespace qotto::runner
