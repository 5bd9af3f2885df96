#include "qotto/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qotto::dynamics {

using hilbert::QuantumState;

Method parse_method(std::string_view name) {
  if (name == "exponential" || name == "exponential_midpoint") return Method::exponential_midpoint;
  if (name == "magnus4") return Method::magnus4;
  if (name == "rk4") return Method::rk4;
  throw std::invalid_argument("unknown integration method '" + std::string(name) + "'");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::exponential_midpoint: return "exponential_midpoint";
    case Method::magnus4: return "magnus4";
    case Method::rk4: return "rk4";
  }
  return "?";
}

void StepPolicy::validate() const {
  if (!(dt_max > 0.0)) throw std::invalid_argument("step policy: dt_max must be > 0");
  if (substeps_per_fastest_period < 10)
    throw std::invalid_argument("step policy: substeps_per_fastest_period must be >= 10");
  if (!(dissipation_chunk > 0.0)) throw std::invalid_argument("step policy: dissipation_chunk must be > 0");
}

double StepPolicy::step_for(double fastest_frequency) const {
  if (fastest_frequency <= 0.0) return dt_max;
  return std::min(dt_max, 1.0 / (fastest_frequency * substeps_per_fastest_period));
}

void HeatingChannel::validate() const {
  if (!(gamma_up_per_s >= 0.0) || !(gamma_down_per_s >= 0.0))
    throw std::invalid_argument("heating channel: rates must be >= 0");
}

Matrix hermitian_exponential(const Matrix& h, double duration) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd& lambda = es.eigenvalues();
  Vector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) phases(k) = std::polar(1.0, -lambda(k) * duration);
  const Matrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

namespace {

Matrix sample(const TimeDependentHamiltonian& h, double t, const Guards& guards) {
  Matrix m = h.at(t);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hilbert::hermitian_defect(m) > guards.hermiticity_tolerance * scale)
    throw NumericalError("non-Hermitian Hamiltonian at t = " + std::to_string(t) + " us");
  return m;
}

// Propagator of a single substep [t, t + dt].
Matrix substep(const TimeDependentHamiltonian& h, double t, double dt, Method method, const Guards& guards) {
  switch (method) {
    case Method::exponential_midpoint:
      return hermitian_exponential(sample(h, t + 0.5 * dt, guards), dt);
    case Method::magnus4: {
      static const double r = std::sqrt(3.0) / 6.0;
      static const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
      static const double a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
      const Matrix h1 = sample(h, t + (0.5 - r) * dt, guards);
      const Matrix h2 = sample(h, t + (0.5 + r) * dt, guards);
      // exp(-i h (a1 H1 + a2 H2)) exp(-i h (a2 H1 + a1 H2)); each factor spans half the weight.
      return hermitian_exponential(2.0 * (a1 * h1 + a2 * h2), 0.5 * dt) *
             hermitian_exponential(2.0 * (a2 * h1 + a1 * h2), 0.5 * dt);
    }
    case Method::rk4: {
      const cplx mi(0.0, -1.0);
      const Matrix ha = sample(h, t, guards);
      const Matrix hm = sample(h, t + 0.5 * dt, guards);
      const Matrix hb = sample(h, t + dt, guards);
      const Eigen::Index d = ha.rows();
      const Matrix id = Matrix::Identity(d, d);
      const Matrix k1 = mi * ha;
      const Matrix k2 = mi * hm * (id + 0.5 * dt * k1);
      const Matrix k3 = mi * hm * (id + 0.5 * dt * k2);
      const Matrix k4 = mi * hb * (id + dt * k3);
      return id + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  throw std::logic_error("unhandled integration method");
}

// Polar factor of m: removes the rounding drift accumulated over long
// substep products without touching the method's own error.
Matrix nearest_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

void check_leakage(const QuantumState& state, const Guards& guards) {
  const double top = state.top_level_population();
  if (top > guards.leakage_tolerance) {
    throw NumericalError("Fock truncation leakage: top-level population " + std::to_string(top) +
                         " exceeds tolerance " + std::to_string(guards.leakage_tolerance) + " at t = " +
                         std::to_string(state.time_us) + " us");
  }
}

}  // namespace

std::vector<Chunk> build_chunks(const TimeDependentHamiltonian& h, double t0, double t1,
                                const StepPolicy& policy, double chunk_length, const Guards& guards) {
  policy.validate();
  if (!(t1 > t0)) throw std::invalid_argument("propagation interval must satisfy t1 > t0");
  const double span = t1 - t0;
  const int n_chunks = chunk_length > 0.0 ? std::max(1, static_cast<int>(std::ceil(span / chunk_length - 1e-9))) : 1;
  const double chunk_span = span / n_chunks;
  const int n_sub = std::max(1, static_cast<int>(std::ceil(chunk_span / policy.step_for(h.fastest_frequency) - 1e-9)));
  const double dt = chunk_span / n_sub;

  std::vector<Chunk> chunks;
  chunks.reserve(n_chunks);
  for (int c = 0; c < n_chunks; ++c) {
    const double start = t0 + c * chunk_span;
    Matrix u = substep(h, start, dt, policy.method, guards);
    for (int k = 1; k < n_sub; ++k) u = substep(h, start + k * dt, dt, policy.method, guards) * u;
    if (policy.method != Method::rk4) u = nearest_unitary(u);
    chunks.push_back({std::move(u), chunk_span, start + chunk_span});
  }
  return chunks;
}

QuantumState apply_chunks(QuantumState state, const std::vector<Chunk>& chunks,
                          const std::optional<HeatingChannel>& channel, const Guards& guards,
                          const ChunkObserver& observer) {
  for (const auto& chunk : chunks) {
    if (chunk.unitary.rows() != state.rho.rows())
      throw std::invalid_argument("propagator dimension does not match the state");
    state.rho = chunk.unitary * state.rho * chunk.unitary.adjoint();
    if (channel) apply_heating(state.rho, state.space.fock_dim(), *channel, chunk.duration);
    state.time_us += chunk.duration;
    check_leakage(state, guards);
    if (observer) observer(state, chunk);
  }
  return state;
}

QuantumState propagate(QuantumState state, const TimeDependentHamiltonian& h, double t0, double t1,
                       const StepPolicy& policy, const std::optional<HeatingChannel>& channel,
                       const Guards& guards) {
  if (channel) channel->validate();
  const double chunk = channel ? policy.dissipation_chunk : 0.0;
  return apply_chunks(std::move(state), build_chunks(h, t0, t1, policy, chunk, guards), channel, guards);
}

Matrix heating_generator(const Matrix& rho, int fock_dim, double up, double down) {
  const Eigen::Index d = rho.rows();
  Matrix out(d, d);
  const int nf = fock_dim;
  auto raise_weight = [nf](int n) { return n < nf - 1 ? n + 1.0 : 0.0; };  // diag of truncated a a^dag
  for (Eigen::Index j = 0; j < d; ++j) {
    const int nj = static_cast<int>(j % nf);
    for (Eigen::Index i = 0; i < d; ++i) {
      const int ni = static_cast<int>(i % nf);
      cplx v = -0.5 * (down * (ni + nj) + up * (raise_weight(ni) + raise_weight(nj))) * rho(i, j);
      if (ni + 1 < nf && nj + 1 < nf) v += down * std::sqrt((ni + 1.0) * (nj + 1.0)) * rho(i + 1, j + 1);
      if (ni > 0 && nj > 0) v += up * std::sqrt(static_cast<double>(ni) * nj) * rho(i - 1, j - 1);
      out(i, j) = v;
    }
  }
  return out;
}

void apply_heating(Matrix& rho, int fock_dim, const HeatingChannel& channel, double duration_us) {
  const double up = channel.gamma_up_per_s * 1e-6;
  const double down = channel.gamma_down_per_s * 1e-6;
  if (duration_us <= 0.0 || (up == 0.0 && down == 0.0)) return;
  // Fastest decay rate of the generator is about (up + down) * fock_dim.
  const double stiffness = (up + down) * fock_dim * duration_us;
  const int n = std::max(1, static_cast<int>(std::ceil(stiffness / 0.05)));
  const double h = duration_us / n;
  for (int k = 0; k < n; ++k) {
    const Matrix k1 = heating_generator(rho, fock_dim, up, down);
    const Matrix k2 = heating_generator(rho + 0.5 * h * k1, fock_dim, up, down);
    const Matrix k3 = heating_generator(rho + 0.5 * h * k2, fock_dim, up, down);
    const Matrix k4 = heating_generator(rho + h * k3, fock_dim, up, down);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

double expectation(const QuantumState& state, const Matrix& op) {
  if (op.rows() != state.rho.rows() || op.cols() != state.rho.cols())
    throw std::invalid_argument("expectation: operator dimension does not match the state");
  if (hilbert::hermitian_defect(op) > 1e-10 * std::max(1.0, op.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("expectation: operator is not Hermitian");
  // Tr(rho op) = sum_ij rho_ij op_ji
  return state.rho.cwiseProduct(op.transpose()).sum().real();
}

}  // namespace qotto::dynamics
