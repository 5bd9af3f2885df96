#include "qotto/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qotto::analysis {

double power(double n_bar, int n_cycles, double tau_us, double heating_rate_per_s, bool subtract_heating) {
  if (n_cycles < 1) throw std::invalid_argument("power: N must be >= 1");
  if (!(tau_us > 0.0)) throw std::invalid_argument("power: tau must be > 0");
  const double elapsed = n_cycles * tau_us;
  const double heating = subtract_heating ? heating_rate_per_s * 1e-6 * elapsed : 0.0;
  return (n_bar - heating) / elapsed;
}

double enhancement_ratio(double x_sta, double x_na) {
  if (std::abs(x_na) < 1e-12) throw std::domain_error("enhancement_ratio: reference value is zero");
  return (x_sta - x_na) / x_na;
}

CostRatios cost_ratios(const drive::EngineParams& params, const drive::DriveProfile& profile, int panels) {
  if (panels < 2) throw std::invalid_argument("cost_ratios: need at least 2 panels");
  panels += panels % 2;  // keep tau/2 on a panel boundary (kink of |Omega_cd|)
  static const double x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static const double w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  const double h = profile.tau / panels;
  double amp = 0.0, inten = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int q = 0; q < 4; ++q) {
      const double cd = drive::omega_cd(params, profile, mid + 0.5 * h * x[q]);
      amp += w[q] * std::abs(cd);
      inten += w[q] * cd * cd;
    }
  }
  amp *= 0.5 * h;
  inten *= 0.5 * h;
  return {amp / (profile.tau * params.rabi), inten / (profile.tau * params.rabi * params.rabi)};
}

std::vector<double> classical_line(double n_bar_single_cycle, std::span<const int> cycles) {
  std::vector<double> out;
  out.reserve(cycles.size());
  for (int n : cycles) out.push_back(n * n_bar_single_cycle);
  return out;
}

SigmaYSummary sigma_y_summary(const engine::StrokeTrace& trace) {
  if (trace.sigma_y.empty()) throw std::invalid_argument("sigma_y_summary: missing trace");
  SigmaYSummary s;
  s.start_value = trace.sigma_y.front();
  s.end_of_stroke_value = trace.sigma_y.back();
  for (double v : trace.sigma_y) s.max_abs = std::max(s.max_abs, std::abs(v));
  return s;
}

nlohmann::json Metrics::to_json() const {
  nlohmann::json j{{"preset", preset},
                   {"N", n_cycles},
                   {"tau_us", tau_us},
                   {"with_cd", with_cd},
                   {"seed", seed},
                   {"n_bar_final", n_bar_final},
                   {"work", work},
                   {"power", power},
                   {"power_heating_subtracted", power_heating_subtracted},
                   {"cost_ratio_amplitude", cost_ratio_amplitude},
                   {"cost_ratio_intensity", cost_ratio_intensity},
                   {"classical_line", classical_line}};
  j["enhancement_ratio"] = enhancement_ratio ? nlohmann::json(*enhancement_ratio) : nlohmann::json(nullptr);
  return j;
}

Metrics make_metrics(const std::string& preset, const drive::EngineParams& params, int n_cycles, bool with_cd,
                     std::uint64_t seed, double n_bar_final) {
  Metrics m;
  m.preset = preset;
  m.n_cycles = n_cycles;
  m.tau_us = params.tau;
  m.with_cd = with_cd;
  m.seed = seed;
  m.n_bar_final = n_bar_final;
  m.work = work_energy(n_bar_final, params.battery_freq);
  if (n_cycles >= 1) {
    m.power = power(n_bar_final, n_cycles, params.tau, params.heating_rate_per_s, false);
    m.power_heating_subtracted = power(n_bar_final, n_cycles, params.tau, params.heating_rate_per_s, true);
  }
  if (with_cd) {
    const auto c = cost_ratios(params, drive::DriveProfile::from(params));
    m.cost_ratio_amplitude = c.amplitude;
    m.cost_ratio_intensity = c.intensity;
  }
  return m;
}

}  // namespace qotto::analysis
