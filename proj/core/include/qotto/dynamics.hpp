// Time propagation of density matrices under a time-dependent Hamiltonian,
// optionally with symmetric phonon heating (Lindblad damping on a, a^dag).
#pragma once

#include "qotto/hilbert.hpp"

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace qotto::dynamics {

enum class Method {
  exponential_midpoint,  // exp(-i H(t + h/2) h) per substep
  magnus4,               // fourth-order commutator-free exponential pair
  rk4,                   // classical Runge-Kutta on the propagator
};

Method parse_method(std::string_view name);
std::string_view to_string(Method m);

struct StepPolicy {
  double dt_max = 0.01;
  int substeps_per_fastest_period = 20;
  Method method = Method::exponential_midpoint;
  // Longest unitary chunk between two applications of the heating map.
  double dissipation_chunk = 1.0;

  void validate() const;
  // Substep length for a generator whose explicit time dependence has the
  // given fastest angular frequency (the static part is integrated exactly).
  double step_for(double fastest_frequency) const;
};

struct HeatingChannel {
  double gamma_up_per_s = 0.0;
  double gamma_down_per_s = 0.0;

  static HeatingChannel symmetric(double rate_per_s) { return {rate_per_s, rate_per_s}; }
  void validate() const;
};

struct TimeDependentHamiltonian {
  std::function<Matrix(double)> at;
  double fastest_frequency = 0.0;  // rad/us of the explicit time dependence
};

struct Guards {
  double leakage_tolerance = hilbert::kDefaultLeakageTolerance;
  double hermiticity_tolerance = 1e-10;
};

// One propagation segment: the product of substep propagators over
// [t_end - duration, t_end].
struct Chunk {
  Matrix unitary;
  double duration = 0.0;
  double t_end = 0.0;
};

// Splits [t0, t1] into chunks no longer than chunk_length (or a single chunk
// when chunk_length <= 0) and builds each chunk's propagator.
std::vector<Chunk> build_chunks(const TimeDependentHamiltonian& h, double t0, double t1,
                                const StepPolicy& policy, double chunk_length, const Guards& guards = {});

using ChunkObserver = std::function<void(const hilbert::QuantumState&, const Chunk&)>;

// Applies chunks in order: rho -> U rho U^dag, then the heating map over the
// chunk's duration. Checks leakage after every chunk.
hilbert::QuantumState apply_chunks(hilbert::QuantumState state, const std::vector<Chunk>& chunks,
                                   const std::optional<HeatingChannel>& channel, const Guards& guards = {},
                                   const ChunkObserver& observer = {});

hilbert::QuantumState propagate(hilbert::QuantumState state, const TimeDependentHamiltonian& h, double t0,
                                double t1, const StepPolicy& policy,
                                const std::optional<HeatingChannel>& channel = std::nullopt,
                                const Guards& guards = {});

// exp(-i H h) for Hermitian H via eigendecomposition.
Matrix hermitian_exponential(const Matrix& h, double duration);

// Heating generator L(rho) with rates in 1/us, acting on the Fock factor.
Matrix heating_generator(const Matrix& rho, int fock_dim, double up_per_us, double down_per_us);
// Integrates d rho/dt = L(rho) over the given duration (RK4, adaptive substep count).
void apply_heating(Matrix& rho, int fock_dim, const HeatingChannel& channel, double duration_us);

// Tr(rho op) for Hermitian op. Throws std::invalid_argument on dimension
// mismatch or non-Hermitian op.
double expectation(const hilbert::QuantumState& state, const Matrix& op);

}  // namespace qotto::dynamics
