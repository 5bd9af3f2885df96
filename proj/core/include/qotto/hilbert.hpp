// Operator algebra on the spin (x) Fock tensor space.
//
// Basis ordering is spin (x) Fock with spin as the slow index: the full index
// of |s, n> is s * fock_dim + n, where s = 0 is spin up and s = 1 is spin down.
// sigma_z = diag(+1, -1) in that spin basis and sigma_plus = |up><down|.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace qotto {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Raised when a numerical guard fails during a run (leakage, non-Hermitian
// generator, invalid state). The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace hilbert {

inline constexpr int kDefaultGuardLevels = 5;
inline constexpr double kDefaultLeakageTolerance = 1e-4;
inline constexpr int kDefaultMaxDimension = 1024;

enum class Spin { up = 0, down = 1 };

// Truncated oscillator. Levels 0..n_max are observable; guard levels above
// n_max are propagated but treated as numerical headroom.
struct FockSpace {
  int n_max = 20;
  int guard_levels = kDefaultGuardLevels;

  int fock_dim() const { return n_max + guard_levels + 1; }
  int dim() const { return 2 * fock_dim(); }
  int index(Spin s, int n) const { return static_cast<int>(s) * fock_dim() + n; }

  // Throws std::invalid_argument on n_max < 1, negative guards, or a total
  // dimension above max_dimension.
  void validate(int max_dimension = kDefaultMaxDimension) const;
};

bool operator==(const FockSpace& a, const FockSpace& b);

struct Operators {
  Matrix a;
  Matrix a_dagger;
  Matrix number;
  Matrix pauli_x;
  Matrix pauli_y;
  Matrix pauli_z;
  Matrix sigma_plus;
  Matrix identity;
};

// Single-factor building blocks.
Matrix ladder(int fock_dim);
Matrix pauli(char axis);
Matrix kron(const Matrix& left, const Matrix& right);

Operators make_operators(const FockSpace& space, int max_dimension = kDefaultMaxDimension);

double hermitian_defect(const Matrix& m);

struct QuantumState {
  Matrix rho;
  FockSpace space;
  double time_us = 0.0;

  // |s><s| (x) |n><n|.
  static QuantumState product(const FockSpace& space, Spin s, int n);
  // |psi><psi| for a normalized vector on the full space.
  static QuantumState pure(const FockSpace& space, const Vector& psi);
  // spin projector (x) given Fock-space density matrix.
  static QuantumState from_parts(const FockSpace& space, Spin s, const Matrix& fock_rho);

  double trace_deviation() const;
  double min_eigenvalue() const;
  // Population of the highest simulated Fock level (summed over spin).
  double top_level_population() const;
  // Throws NumericalError if trace, Hermiticity, or positivity tolerances fail.
  void check(double tolerance = 1e-9) const;
};

Matrix partial_trace_spin(const QuantumState& state);
Matrix spin_block(const QuantumState& state, Spin row, Spin col);

// <n_row| exp(i eta (a + a^dag)) |n_col> via the associated Laguerre closed form.
cplx displacement_element(int n_row, int n_col, double eta);

// Generalized Laguerre polynomial L_n^(alpha)(x), three-term recurrence.
double laguerre(int n, int alpha, double x);

}  // namespace hilbert
}  // namespace qotto
