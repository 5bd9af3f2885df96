// Drive waveforms and Hamiltonians of the spin engine and its oscillator
// battery. Angular frequencies are in rad/us and times in us throughout.
#pragma once

#include "qotto/hilbert.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qotto::drive {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct EngineParams {
  double rabi = kTwoPi * 0.159;          // carrier Rabi frequency Omega
  double v0 = kTwoPi * 0.075;            // peak detuning sweep amplitude
  double tau = 119.0;                    // full cycle time
  double battery_freq = kTwoPi * 0.075;  // battery frequency omega
  double eta = 0.05;                     // Lamb-Dicke factor (calibration input)
  double trap_freq = kTwoPi * 2.0338;    // trap motional frequency, lab frame only
  double heating_rate_per_s = 240.0;     // phonons per second

  double sideband_offset() const { return trap_freq - battery_freq; }
  double heating_rate_per_us() const { return heating_rate_per_s * 1e-6; }

  // Hard errors (non-positive frequencies, eta outside [0, 1), ...).
  void validate() const;
};

enum class Stroke { expansion, compression };
std::string_view to_string(Stroke s);

// Smoothstep detuning profile for one cycle of length tau.
struct DriveProfile {
  double v0 = 0.0;
  double tau = 1.0;

  static DriveProfile from(const EngineParams& p) { return {p.v0, p.tau}; }
};

// v(t) on the expansion range 0 <= t <= tau/2. Throws std::out_of_range.
double v_of_t(const DriveProfile& profile, double t);
double v_dot_of_t(const DriveProfile& profile, double t);

// Detuning and its time derivative at cycle time t in [0, tau]: the
// expansion profile on the first half, the reversed profile v(tau - t) with a
// flipped derivative on the second.
struct DetuningSample {
  double v;
  double v_dot;
};
DetuningSample detuning(const DriveProfile& profile, double t_cycle);

// Counterdiabatic amplitude -Omega v_dot / (Omega^2 + v^2) at cycle time t.
double omega_cd(const EngineParams& params, const DriveProfile& profile, double t_cycle);

// (1/(tau Omega)) * integral over one cycle of |omega_cd|.
double cd_cost_closed_form(const EngineParams& params, const DriveProfile& profile);

// Operators reused by every Hamiltonian evaluation on one Fock space.
struct HamiltonianTerms {
  hilbert::FockSpace space;
  hilbert::Operators ops;
  Matrix coupling;  // sigma_y (a + a^dag)

  explicit HamiltonianTerms(const hilbert::FockSpace& space);
};

// Interaction-frame Hamiltonian
//   (Omega/2) sx + (v/2) sz + omega a^dag a - (eta Omega/2) sin(omega t_w) sy (a + a^dag)
//   [+ (Omega_cd/2) sy]
// t_cycle selects the detuning sample; t_waveform is the time argument of the
// sin(omega t) modulation (equal to t_cycle unless the caller runs a
// continuous waveform across cycles).
Matrix interaction_hamiltonian(const HamiltonianTerms& terms, const EngineParams& params,
                               const DriveProfile& profile, double t_cycle, bool with_cd,
                               double t_waveform);
Matrix interaction_hamiltonian(const HamiltonianTerms& terms, const EngineParams& params,
                               const DriveProfile& profile, double t_cycle, bool with_cd);

enum class ToneRole { carrier, blue, red, cd };
enum class Envelope { constant, sideband, counterdiabatic };

ToneRole parse_tone_role(std::string_view name);  // throws std::invalid_argument
std::string_view to_string(ToneRole role);

struct ToneSpec {
  ToneRole role = ToneRole::carrier;
  double detuning = 0.0;  // relative to the shifted carrier
  double phase = 0.0;
  Envelope envelope = Envelope::constant;

  // Rabi amplitude at cycle time t (t_waveform drives the sideband envelope).
  double amplitude(const EngineParams& params, const DriveProfile& profile, double t_cycle,
                   double t_waveform) const;
};

// Carrier, blue and red sidebands, plus the counterdiabatic tone if requested.
std::vector<ToneSpec> three_tone_field(const EngineParams& params, bool with_cd);

// Throws std::invalid_argument when a tone's detuning or envelope does not
// match its role.
void validate_tones(const EngineParams& params, const std::vector<ToneSpec>& tones);

enum class LambDickeOrder { zeroth = 0, first = 1 };

// Lab-frame (pre-RWA) Hamiltonian
//   (v/2) sz + omega a^dag a
//   + sum_j (A_j/2) [ e^{-i(d_j t + phi_j)} s+ (1 + i eta (a e^{-i w' t} + a^dag e^{i w' t})) + h.c. ]
// where w' = omega_z - omega. Terms rotating at w' are kept.
Matrix lab_frame_hamiltonian(const HamiltonianTerms& terms, const EngineParams& params,
                             const DriveProfile& profile, const std::vector<ToneSpec>& tones,
                             double t_cycle, LambDickeOrder order, double t_waveform);
Matrix lab_frame_hamiltonian(const HamiltonianTerms& terms, const EngineParams& params,
                             const DriveProfile& profile, const std::vector<ToneSpec>& tones,
                             double t_cycle, LambDickeOrder order);

}  // namespace qotto::drive
