#include "qotto/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qotto::engine {

ResetVariant parse_reset(std::string_view name) {
  if (name == "pump") return ResetVariant::pump;
  if (name == "project") return ResetVariant::project;
  throw std::invalid_argument("unknown reset mode '" + std::string(name) + "'");
}

CouplingPhase parse_coupling_phase(std::string_view name) {
  if (name == "per_cycle") return CouplingPhase::per_cycle;
  if (name == "continuous") return CouplingPhase::continuous;
  throw std::invalid_argument("unknown coupling phase '" + std::string(name) + "'");
}

Frame parse_frame(std::string_view name) {
  if (name == "rwa") return Frame::rwa;
  if (name == "lab") return Frame::lab;
  throw std::invalid_argument("unknown frame '" + std::string(name) + "'");
}

std::string_view to_string(ResetVariant v) { return v == ResetVariant::pump ? "pump" : "project"; }
std::string_view to_string(CouplingPhase p) { return p == CouplingPhase::per_cycle ? "per_cycle" : "continuous"; }
std::string_view to_string(Frame f) { return f == Frame::rwa ? "rwa" : "lab"; }

void CycleOptions::validate() const {
  step.validate();
  if (record_traces && trace_points < 2) throw std::invalid_argument("trace_points must be >= 2");
  if (!(guards.leakage_tolerance > 0.0)) throw std::invalid_argument("leakage tolerance must be > 0");
}

QuantumState spin_reset(const QuantumState& state, const ResetMode& mode, double* success) {
  if (mode.variant == ResetVariant::pump) {
    QuantumState out = QuantumState::from_parts(state.space, mode.target, hilbert::partial_trace_spin(state));
    out.time_us = state.time_us;
    if (success) *success = 1.0;
    return out;
  }
  const Matrix block = hilbert::spin_block(state, mode.target, mode.target);
  const double p = block.trace().real();
  if (!(p >= 1e-12)) throw NumericalError("projective reset: empty branch (success probability < 1e-12)");
  QuantumState out = QuantumState::from_parts(state.space, mode.target, block / p);
  out.time_us = state.time_us;
  if (success) *success = p;
  return out;
}

QuantumState dephase_battery(const QuantumState& state) {
  QuantumState out = state;
  const int nf = state.space.fock_dim();
  for (Eigen::Index j = 0; j < out.rho.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rho.rows(); ++i)
      if (i % nf != j % nf) out.rho(i, j) = 0.0;
  return out;
}

QuantumState initial_state(const hilbert::FockSpace& space) {
  return QuantumState::product(space, Spin::down, 0);
}

Engine::Engine(const hilbert::FockSpace& space, const drive::EngineParams& params, const CycleOptions& options)
    : params_(params), profile_(drive::DriveProfile::from(params)), options_(options), terms_(space) {
  params_.validate();
  options_.validate();
  if (options_.frame == Frame::lab) tones_ = drive::three_tone_field(params_, options_.with_cd);
}

dynamics::TimeDependentHamiltonian Engine::hamiltonian(int cycle) const {
  const double offset = options_.coupling_phase == CouplingPhase::continuous ? cycle * params_.tau : 0.0;
  // The detuning ramp changes on the scale of the stroke; resolve it like a
  // periodic term of period tau.
  const double ramp = drive::kTwoPi / params_.tau;
  if (options_.frame == Frame::rwa) {
    return {[this, offset](double t) {
              return drive::interaction_hamiltonian(terms_, params_, profile_, t, options_.with_cd, t + offset);
            },
            std::max(params_.battery_freq, ramp)};
  }
  // Products of tone and motional phases rotate at up to twice the sideband offset.
  const double fast = 2.0 * params_.sideband_offset() + params_.battery_freq;
  return {[this, offset](double t) {
            return drive::lab_frame_hamiltonian(terms_, params_, profile_, tones_, t, drive::LambDickeOrder::first,
                                                t + offset);
          },
          std::max(fast, ramp)};
}

double Engine::chunk_length() const {
  double len = 0.0;
  if (options_.heating) len = options_.step.dissipation_chunk;
  if (options_.record_traces) {
    const double sample = 0.5 * params_.tau / (options_.trace_points - 1);
    len = len > 0.0 ? std::min(len, sample) : sample;
  }
  return len;
}

const std::vector<dynamics::Chunk>& Engine::chunks(Stroke which, int cycle) {
  const int key_cycle = options_.coupling_phase == CouplingPhase::continuous ? cycle : 0;
  const auto key = std::make_pair(static_cast<int>(which), key_cycle);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  if (options_.coupling_phase == CouplingPhase::continuous) {
    // Earlier cycles are never revisited.
    std::erase_if(cache_, [&](const auto& kv) { return kv.first.second < key_cycle; });
  }
  const double half = 0.5 * params_.tau;
  const double t0 = which == Stroke::expansion ? 0.0 : half;
  auto built = dynamics::build_chunks(hamiltonian(cycle), t0, t0 + half, options_.step, chunk_length(), options_.guards);
  return cache_.emplace(key, std::move(built)).first->second;
}

Matrix Engine::stroke_unitary(Stroke which, int cycle) {
  const auto& cs = chunks(which, cycle);
  Matrix u = Matrix::Identity(terms_.space.dim(), terms_.space.dim());
  for (const auto& c : cs) u = c.unitary * u;
  return u;
}

QuantumState Engine::run_stroke(const QuantumState& state, Stroke which, int cycle, StrokeTrace* trace) {
  if (!(state.space == terms_.space)) throw std::invalid_argument("run_stroke: state space does not match engine");
  std::optional<dynamics::HeatingChannel> channel;
  if (options_.heating) channel = dynamics::HeatingChannel::symmetric(params_.heating_rate_per_s);

  const double t_start = which == Stroke::expansion ? 0.0 : 0.5 * params_.tau;
  dynamics::ChunkObserver observer;
  if (trace) {
    trace->cycle = cycle;
    trace->stroke = which;
    trace->time_us.assign(1, t_start);
    trace->sigma_y.assign(1, dynamics::expectation(state, terms_.ops.pauli_y));
    observer = [this, trace](const QuantumState& s, const dynamics::Chunk& c) {
      trace->time_us.push_back(c.t_end);
      trace->sigma_y.push_back(dynamics::expectation(s, terms_.ops.pauli_y));
    };
  }
  return dynamics::apply_chunks(state, chunks(which, cycle), channel, options_.guards, observer);
}

CycleRecord Engine::run_cycles(const QuantumState& initial, int n_cycles) {
  if (n_cycles < 0) throw std::invalid_argument("run_cycles: N must be >= 0");
  if (!(initial.space == terms_.space)) throw std::invalid_argument("run_cycles: state space does not match engine");
  initial.check();

  CycleRecord rec;
  rec.min_eigenvalue = initial.min_eigenvalue();
  rec.max_trace_deviation = initial.trace_deviation();
  rec.max_top_level = initial.top_level_population();
  auto audit = [&rec](const QuantumState& s) {
    rec.max_trace_deviation = std::max(rec.max_trace_deviation, s.trace_deviation());
    rec.min_eigenvalue = std::min(rec.min_eigenvalue, s.min_eigenvalue());
    rec.max_top_level = std::max(rec.max_top_level, s.top_level_population());
  };
  const auto& ops = terms_.ops;
  const double cost_per_cycle = options_.with_cd ? drive::cd_cost_closed_form(params_, profile_) : 0.0;

  QuantumState state = initial;
  for (int cycle = 0; cycle < n_cycles; ++cycle) {
    StrokeTrace* tr = nullptr;
    if (options_.record_traces) tr = &rec.traces.emplace_back();
    state = run_stroke(state, Stroke::expansion, cycle, tr);
    audit(state);
    rec.up_after_expansion.push_back(hilbert::spin_block(state, Spin::up, Spin::up).trace().real());
    rec.sigma_y_end_expansion.push_back(dynamics::expectation(state, ops.pauli_y));
    double p_hot = 1.0;
    state = spin_reset(state, options_.hot_reset(), &p_hot);

    tr = nullptr;
    if (options_.record_traces) tr = &rec.traces.emplace_back();
    state = run_stroke(state, Stroke::compression, cycle, tr);
    audit(state);
    rec.up_after_compression.push_back(hilbert::spin_block(state, Spin::up, Spin::up).trace().real());
    rec.sigma_y_end_compression.push_back(dynamics::expectation(state, ops.pauli_y));
    double p_cold = 1.0;
    state = spin_reset(state, options_.cold_reset(), &p_cold);

    if (options_.reset == ResetVariant::project) {
      rec.hot_success.push_back(p_hot);
      rec.cold_success.push_back(p_cold);
    }
    if (options_.classical_baseline) state = dephase_battery(state);
    audit(state);
    rec.n_bar.push_back(dynamics::expectation(state, ops.number));
    rec.cd_cost += cost_per_cycle;
  }
  state.check();
  return rec;
}

QuantumState run_stroke(const QuantumState& state, Stroke which, const drive::EngineParams& params,
                        const CycleOptions& options, StrokeTrace* trace) {
  Engine engine(state.space, params, options);
  return engine.run_stroke(state, which, 0, trace);
}

CycleRecord run_cycles(const QuantumState& initial, int n_cycles, const drive::EngineParams& params,
                       const CycleOptions& options) {
  Engine engine(initial.space, params, options);
  return engine.run_cycles(initial, n_cycles);
}

}  // namespace qotto::engine
