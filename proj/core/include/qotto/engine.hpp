// Four-stroke Otto cycle of the spin engine: expansion, hot reset to spin up,
// compression, cold reset to spin down. Isochores take zero time.
#pragma once

#include "qotto/drive.hpp"
#include "qotto/dynamics.hpp"
#include "qotto/hilbert.hpp"

#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace qotto::engine {

using drive::Stroke;
using hilbert::QuantumState;
using hilbert::Spin;

enum class ResetVariant { pump, project };

struct ResetMode {
  ResetVariant variant = ResetVariant::pump;
  Spin target = Spin::down;
};

// How the sin(omega t) coupling waveform is timed across cycles. per_cycle
// replays the same waveform every cycle; continuous runs it on global time.
enum class CouplingPhase { per_cycle, continuous };

// rwa: effective interaction Hamiltonian. lab: three-tone field, first-order
// Lamb-Dicke expansion, no final rotating-wave approximation.
enum class Frame { rwa, lab };

ResetVariant parse_reset(std::string_view name);
CouplingPhase parse_coupling_phase(std::string_view name);
Frame parse_frame(std::string_view name);
std::string_view to_string(ResetVariant v);
std::string_view to_string(CouplingPhase p);
std::string_view to_string(Frame f);

struct CycleOptions {
  bool with_cd = false;
  ResetVariant reset = ResetVariant::pump;
  bool classical_baseline = false;
  bool heating = false;
  bool record_traces = false;
  int trace_points = 100;  // samples per stroke when recording
  CouplingPhase coupling_phase = CouplingPhase::per_cycle;
  Frame frame = Frame::rwa;
  dynamics::StepPolicy step{};
  dynamics::Guards guards{};

  ResetMode hot_reset() const { return {reset, Spin::up}; }
  ResetMode cold_reset() const { return {reset, Spin::down}; }
  void validate() const;
};

struct StrokeTrace {
  int cycle = 0;
  Stroke stroke = Stroke::expansion;
  std::vector<double> time_us;  // cycle time
  std::vector<double> sigma_y;
};

struct CycleRecord {
  std::vector<double> n_bar;                 // after each full cycle
  std::vector<double> up_after_expansion;    // spin-up population before the hot reset
  std::vector<double> up_after_compression;  // spin-up population before the cold reset
  std::vector<double> sigma_y_end_expansion;
  std::vector<double> sigma_y_end_compression;
  std::vector<double> hot_success;   // projection probabilities (project mode)
  std::vector<double> cold_success;
  std::vector<StrokeTrace> traces;
  double cd_cost = 0.0;  // cumulative (1/(tau Omega)) * integral |Omega_cd| dt
  double max_trace_deviation = 0.0;
  double min_eigenvalue = 0.0;
  double max_top_level = 0.0;
};

// Post-reset state. For project mode, success receives the branch probability;
// a probability below 1e-12 throws NumericalError.
QuantumState spin_reset(const QuantumState& state, const ResetMode& mode, double* success = nullptr);

// Removes every Fock off-diagonal element, across and within spin blocks.
QuantumState dephase_battery(const QuantumState& state);

// Ground state |down, 0>.
QuantumState initial_state(const hilbert::FockSpace& space);

class Engine {
 public:
  Engine(const hilbert::FockSpace& space, const drive::EngineParams& params, const CycleOptions& options);

  const drive::EngineParams& params() const { return params_; }
  const CycleOptions& options() const { return options_; }
  const drive::HamiltonianTerms& terms() const { return terms_; }

  // Hamiltonian used for the strokes, as a function of cycle time, for the
  // given cycle index (only matters for continuous waveform timing).
  dynamics::TimeDependentHamiltonian hamiltonian(int cycle) const;

  QuantumState run_stroke(const QuantumState& state, Stroke which, int cycle = 0,
                          StrokeTrace* trace = nullptr);
  CycleRecord run_cycles(const QuantumState& initial, int n_cycles);

  // Single-substep-grid unitary of a full stroke (no heating), for analysis.
  Matrix stroke_unitary(Stroke which, int cycle = 0);

 private:
  const std::vector<dynamics::Chunk>& chunks(Stroke which, int cycle);
  double chunk_length() const;

  drive::EngineParams params_;
  drive::DriveProfile profile_;
  CycleOptions options_;
  drive::HamiltonianTerms terms_;
  std::vector<drive::ToneSpec> tones_;
  std::map<std::pair<int, int>, std::vector<dynamics::Chunk>> cache_;
};

QuantumState run_stroke(const QuantumState& state, Stroke which, const drive::EngineParams& params,
                        const CycleOptions& options, StrokeTrace* trace = nullptr);
CycleRecord run_cycles(const QuantumState& initial, int n_cycles, const drive::EngineParams& params,
                       const CycleOptions& options);

}  // namespace qotto::engine
