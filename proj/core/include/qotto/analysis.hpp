// Scalar figures of merit derived from engine runs.
#pragma once

#include "qotto/drive.hpp"
#include "qotto/engine.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qotto::analysis {

// Phonons per us: (n_bar - [Gamma N tau]) / (N tau). Gamma in phonons/s.
double power(double n_bar, int n_cycles, double tau_us, double heating_rate_per_s, bool subtract_heating);

// (x_sta - x_na) / x_na. Throws std::domain_error when |x_na| < 1e-12.
double enhancement_ratio(double x_sta, double x_na);

struct CostRatios {
  double amplitude = 0.0;  // (1/(tau Omega)) integral |Omega_cd| dt
  double intensity = 0.0;  // (1/tau) integral (Omega_cd/Omega)^2 dt
};
// Both ratios by composite Gauss-Legendre quadrature over the cycle.
CostRatios cost_ratios(const drive::EngineParams& params, const drive::DriveProfile& profile, int panels = 2000);

std::vector<double> classical_line(double n_bar_single_cycle, std::span<const int> cycles);

struct SigmaYSummary {
  double start_value = 0.0;
  double end_of_stroke_value = 0.0;
  double max_abs = 0.0;
};
// Throws std::invalid_argument for an empty trace.
SigmaYSummary sigma_y_summary(const engine::StrokeTrace& trace);

inline double work_energy(double n_bar, double battery_freq) { return n_bar * battery_freq; }

// One flat metrics record, keyed by (preset, N, tau, with_cd, seed).
struct Metrics {
  std::string preset;
  int n_cycles = 0;
  double tau_us = 0.0;
  bool with_cd = false;
  std::uint64_t seed = 0;
  double n_bar_final = 0.0;
  double work = 0.0;  // omega * n_bar
  double power = 0.0;
  double power_heating_subtracted = 0.0;
  std::optional<double> enhancement_ratio;
  double cost_ratio_amplitude = 0.0;
  double cost_ratio_intensity = 0.0;
  std::vector<double> classical_line;

  nlohmann::json to_json() const;
};

Metrics make_metrics(const std::string& preset, const drive::EngineParams& params, int n_cycles, bool with_cd,
                     std::uint64_t seed, double n_bar_final);

}  // namespace qotto::analysis
