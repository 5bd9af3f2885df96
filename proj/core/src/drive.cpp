#include "qotto/drive.hpp"

#include <cmath>
#include <stdexcept>

namespace qotto::drive {

void EngineParams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(name) + " must be > 0");
  };
  positive(rabi, "rabi");
  positive(tau, "tau");
  positive(battery_freq, "battery_freq");
  positive(trap_freq, "trap_freq");
  if (!(v0 >= 0.0) || !std::isfinite(v0)) throw std::invalid_argument("v0 must be >= 0");
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in [0, 1)");
  if (!(heating_rate_per_s >= 0.0) || !std::isfinite(heating_rate_per_s))
    throw std::invalid_argument("heating_rate must be >= 0");
  if (!(trap_freq > battery_freq)) throw std::invalid_argument("trap_freq must exceed battery_freq");
}

std::string_view to_string(Stroke s) { return s == Stroke::expansion ? "expansion" : "compression"; }

double v_of_t(const DriveProfile& profile, double t) {
  const double half = 0.5 * profile.tau;
  if (t < 0.0 || t > half * (1.0 + 1e-12)) throw std::out_of_range("v_of_t: t outside the expansion stroke");
  const double s = std::min(t / half, 1.0);
  return profile.v0 * s * s * (3.0 - 2.0 * s);
}

double v_dot_of_t(const DriveProfile& profile, double t) {
  const double half = 0.5 * profile.tau;
  if (t < 0.0 || t > half * (1.0 + 1e-12)) throw std::out_of_range("v_dot_of_t: t outside the expansion stroke");
  const double s = std::min(t / half, 1.0);
  return profile.v0 * 6.0 * s * (1.0 - s) / half;
}

DetuningSample detuning(const DriveProfile& profile, double t_cycle) {
  const double half = 0.5 * profile.tau;
  if (t_cycle < 0.0 || t_cycle > profile.tau * (1.0 + 1e-12))
    throw std::out_of_range("detuning: t outside the cycle");
  if (t_cycle <= half) return {v_of_t(profile, t_cycle), v_dot_of_t(profile, t_cycle)};
  const double r = std::max(profile.tau - t_cycle, 0.0);
  return {v_of_t(profile, r), -v_dot_of_t(profile, r)};
}

double omega_cd(const EngineParams& params, const DriveProfile& profile, double t_cycle) {
  const auto [v, vd] = detuning(profile, t_cycle);
  return -params.rabi * vd / (params.rabi * params.rabi + v * v);
}

double cd_cost_closed_form(const EngineParams& params, const DriveProfile& profile) {
  // v is monotonic on each stroke, so each stroke contributes arctan(v0/Omega).
  return 2.0 * std::atan(profile.v0 / params.rabi) / (profile.tau * params.rabi);
}

HamiltonianTerms::HamiltonianTerms(const hilbert::FockSpace& s)
    : space(s), ops(hilbert::make_operators(s)), coupling(ops.pauli_y * (ops.a + ops.a_dagger)) {}

Matrix interaction_hamiltonian(const HamiltonianTerms& terms, const EngineParams& params,
                               const DriveProfile& profile, double t_cycle, bool with_cd,
                               double t_waveform) {
  const auto& o = terms.ops;
  const auto [v, vd] = detuning(profile, t_cycle);
  Matrix h = (0.5 * params.rabi) * o.pauli_x + (0.5 * v) * o.pauli_z + params.battery_freq * o.number;
  h -= (0.5 * params.eta * params.rabi * std::sin(params.battery_freq * t_waveform)) * terms.coupling;
  if (with_cd) {
    const double cd = -params.rabi * vd / (params.rabi * params.rabi + v * v);
    h += (0.5 * cd) * o.pauli_y;
  }
  return h;
}

Matrix interaction_hamiltonian(const HamiltonianTerms& terms, const EngineParams& params,
                               const DriveProfile& profile, double t_cycle, bool with_cd) {
  return interaction_hamiltonian(terms, params, profile, t_cycle, with_cd, t_cycle);
}

ToneRole parse_tone_role(std::string_view name) {
  if (name == "carrier") return ToneRole::carrier;
  if (name == "blue") return ToneRole::blue;
  if (name == "red") return ToneRole::red;
  if (name == "cd") return ToneRole::cd;
  throw std::invalid_argument("unknown tone role '" + std::string(name) + "'");
}

std::string_view to_string(ToneRole role) {
  switch (role) {
    case ToneRole::carrier: return "carrier";
    case ToneRole::blue: return "blue";
    case ToneRole::red: return "red";
    case ToneRole::cd: return "cd";
  }
  return "?";
}

double ToneSpec::amplitude(const EngineParams& params, const DriveProfile& profile, double t_cycle,
                           double t_waveform) const {
  switch (envelope) {
    case Envelope::constant: return params.rabi;
    case Envelope::sideband: return params.rabi * std::sin(params.battery_freq * t_waveform);
    // A -pi/2 tone of amplitude -Omega_cd reproduces +(Omega_cd/2) sigma_y.
    case Envelope::counterdiabatic: return -omega_cd(params, profile, t_cycle);
  }
  return 0.0;
}

std::vector<ToneSpec> three_tone_field(const EngineParams& params, bool with_cd) {
  const double w = params.sideband_offset();
  std::vector<ToneSpec> tones{
      {ToneRole::carrier, 0.0, 0.0, Envelope::constant},
      {ToneRole::blue, +w, 0.0, Envelope::sideband},
      {ToneRole::red, -w, 0.0, Envelope::sideband},
  };
  if (with_cd) tones.push_back({ToneRole::cd, 0.0, -0.5 * M_PI, Envelope::counterdiabatic});
  return tones;
}

void validate_tones(const EngineParams& params, const std::vector<ToneSpec>& tones) {
  const double w = params.sideband_offset();
  const double tol = 1e-9 * std::max(1.0, w);
  for (const auto& tone : tones) {
    const std::string role(to_string(tone.role));
    double want = 0.0;
    Envelope env = Envelope::constant;
    switch (tone.role) {
      case ToneRole::carrier: break;
      case ToneRole::blue: want = +w; env = Envelope::sideband; break;
      case ToneRole::red: want = -w; env = Envelope::sideband; break;
      case ToneRole::cd: env = Envelope::counterdiabatic; break;
    }
    if (std::abs(tone.detuning - want) > tol)
      throw std::invalid_argument("tone '" + role + "': detuning does not match its role");
    if (tone.envelope != env) throw std::invalid_argument("tone '" + role + "': envelope does not match its role");
  }
}

Matrix lab_frame_hamiltonian(const HamiltonianTerms& terms, const EngineParams& params,
                             const DriveProfile& profile, const std::vector<ToneSpec>& tones,
                             double t_cycle, LambDickeOrder order, double t_waveform) {
  const auto& o = terms.ops;
  const auto [v, vd] = detuning(profile, t_cycle);
  (void)vd;
  Matrix h = (0.5 * v) * o.pauli_z + params.battery_freq * o.number;

  const cplx i(0.0, 1.0);
  const double t = t_waveform;
  Matrix motion = o.identity;
  if (order == LambDickeOrder::first) {
    const cplx rot = std::exp(-i * params.sideband_offset() * t);
    motion += (i * params.eta) * (rot * o.a + std::conj(rot) * o.a_dagger);
  }
  const Matrix raising = o.sigma_plus * motion;

  cplx weight = 0.0;
  for (const auto& tone : tones) {
    const double amp = tone.amplitude(params, profile, t_cycle, t_waveform);
    weight += 0.5 * amp * std::exp(-i * (tone.detuning * t + tone.phase));
  }
  const Matrix x = weight * raising;
  h += x + x.adjoint();
  return h;
}

Matrix lab_frame_hamiltonian(const HamiltonianTerms& terms, const EngineParams& params,
                             const DriveProfile& profile, const std::vector<ToneSpec>& tones,
                             double t_cycle, LambDickeOrder order) {
  return lab_frame_hamiltonian(terms, params, profile, tones, t_cycle, order, t_cycle);
}

}  // namespace qotto::drive
