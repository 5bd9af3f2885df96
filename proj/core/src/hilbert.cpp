#include "qotto/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace qotto::hilbert {

void FockSpace::validate(int max_dimension) const {
  if (n_max < 1) throw std::invalid_argument("FockSpace: n_max must be >= 1, got " + std::to_string(n_max));
  if (guard_levels < 0) throw std::invalid_argument("FockSpace: guard_levels must be >= 0");
  if (dim() > max_dimension) {
    throw std::invalid_argument("FockSpace: dimension " + std::to_string(dim()) +
                                " exceeds the configured maximum " + std::to_string(max_dimension));
  }
}

bool operator==(const FockSpace& a, const FockSpace& b) {
  return a.n_max == b.n_max && a.guard_levels == b.guard_levels;
}

Matrix ladder(int fock_dim) {
  Matrix a = Matrix::Zero(fock_dim, fock_dim);
  for (int n = 1; n < fock_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix pauli(char axis) {
  Matrix p(2, 2);
  const cplx i(0.0, 1.0);
  switch (axis) {
    case 'x': p << 0.0, 1.0, 1.0, 0.0; break;
    case 'y': p << 0.0, -i, i, 0.0; break;
    case 'z': p << 1.0, 0.0, 0.0, -1.0; break;
    default: throw std::invalid_argument(std::string("pauli: unknown axis ") + axis);
  }
  return p;
}

Matrix kron(const Matrix& left, const Matrix& right) {
  Matrix out(left.rows() * right.rows(), left.cols() * right.cols());
  for (Eigen::Index r = 0; r < left.rows(); ++r)
    for (Eigen::Index c = 0; c < left.cols(); ++c)
      out.block(r * right.rows(), c * right.cols(), right.rows(), right.cols()) = left(r, c) * right;
  return out;
}

Operators make_operators(const FockSpace& space, int max_dimension) {
  space.validate(max_dimension);
  const int nf = space.fock_dim();
  const Matrix id_spin = Matrix::Identity(2, 2);
  const Matrix id_fock = Matrix::Identity(nf, nf);
  const Matrix a = ladder(nf);
  Matrix sp = Matrix::Zero(2, 2);
  sp(0, 1) = 1.0;

  Operators ops;
  ops.a = kron(id_spin, a);
  ops.a_dagger = ops.a.adjoint();
  ops.number = kron(id_spin, a.adjoint() * a);
  ops.pauli_x = kron(pauli('x'), id_fock);
  ops.pauli_y = kron(pauli('y'), id_fock);
  ops.pauli_z = kron(pauli('z'), id_fock);
  ops.sigma_plus = kron(sp, id_fock);
  ops.identity = Matrix::Identity(space.dim(), space.dim());
  return ops;
}

double hermitian_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

QuantumState QuantumState::product(const FockSpace& space, Spin s, int n) {
  space.validate();
  if (n < 0 || n >= space.fock_dim()) throw std::invalid_argument("QuantumState::product: Fock level out of range");
  QuantumState st{Matrix::Zero(space.dim(), space.dim()), space, 0.0};
  const int k = space.index(s, n);
  st.rho(k, k) = 1.0;
  return st;
}

QuantumState QuantumState::pure(const FockSpace& space, const Vector& psi) {
  space.validate();
  if (psi.size() != space.dim()) throw std::invalid_argument("QuantumState::pure: vector dimension mismatch");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("QuantumState::pure: vector is not normalized");
  return QuantumState{psi * psi.adjoint(), space, 0.0};
}

QuantumState QuantumState::from_parts(const FockSpace& space, Spin s, const Matrix& fock_rho) {
  space.validate();
  const int nf = space.fock_dim();
  if (fock_rho.rows() != nf || fock_rho.cols() != nf)
    throw std::invalid_argument("QuantumState::from_parts: Fock matrix dimension mismatch");
  QuantumState st{Matrix::Zero(space.dim(), space.dim()), space, 0.0};
  const int off = static_cast<int>(s) * nf;
  st.rho.block(off, off, nf, nf) = fock_rho;
  return st;
}

double QuantumState::trace_deviation() const { return std::abs(rho.trace() - cplx(1.0, 0.0)); }

double QuantumState::min_eigenvalue() const {
  const Matrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double QuantumState::top_level_population() const {
  const int nf = space.fock_dim();
  return rho(nf - 1, nf - 1).real() + rho(2 * nf - 1, 2 * nf - 1).real();
}

void QuantumState::check(double tolerance) const {
  if (rho.rows() != space.dim() || rho.cols() != space.dim())
    throw NumericalError("state: density matrix does not match its Fock space");
  if (trace_deviation() > tolerance) throw NumericalError("state: trace deviates from 1");
  if (hermitian_defect(rho) > tolerance) throw NumericalError("state: density matrix not Hermitian");
  if (min_eigenvalue() < -tolerance) throw NumericalError("state: negative eigenvalue");
}

Matrix spin_block(const QuantumState& state, Spin row, Spin col) {
  const int nf = state.space.fock_dim();
  return state.rho.block(static_cast<int>(row) * nf, static_cast<int>(col) * nf, nf, nf);
}

Matrix partial_trace_spin(const QuantumState& state) {
  return spin_block(state, Spin::up, Spin::up) + spin_block(state, Spin::down, Spin::down);
}

double laguerre(int n, int alpha, double x) {
  if (n < 0) throw std::invalid_argument("laguerre: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

cplx displacement_element(int n_row, int n_col, double eta) {
  if (n_row < 0 || n_col < 0) throw std::invalid_argument("displacement_element: negative Fock index");
  if (eta < 0.0) throw std::invalid_argument("displacement_element: eta must be >= 0");
  const int lo = std::min(n_row, n_col);
  const int hi = std::max(n_row, n_col);
  const int k = hi - lo;
  if (eta == 0.0) return k == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);

  // Magnitude in logs so that large n never overflows the factorial ratio.
  const double log_mag = -0.5 * eta * eta + k * std::log(eta) +
                         0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0));
  const double value = std::exp(log_mag) * laguerre(lo, k, eta * eta);
  static constexpr cplx kPhase[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return value * kPhase[k % 4];
}

}  // namespace qotto::hilbert
