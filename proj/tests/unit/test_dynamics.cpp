#include "qotto/dynamics.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qotto;
using namespace qotto::dynamics;
using qotto::hilbert::FockSpace;
using qotto::hilbert::QuantumState;
using qotto::hilbert::Spin;

namespace {

Matrix random_hermitian(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

// Non-commuting two-level drive: H(t) = cos(t) sigma_x + 0.7 t sigma_z.
TimeDependentHamiltonian qubit_drive() {
  return {[](double t) -> Matrix { return std::cos(t) * oracle::sx() + 0.7 * t * oracle::sz(); }, 0.0};
}

double propagator_error(Method method, double dt, const Matrix& exact) {
  StepPolicy policy;
  policy.method = method;
  policy.dt_max = dt;
  const auto chunks = build_chunks(qubit_drive(), 0.0, 2.0, policy, 0.0);
  EXPECT_EQ(chunks.size(), 1u);
  return (chunks.front().unitary - exact).norm();
}

}  // namespace

TEST(HermitianExponential, MatchesDenseExponential) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Matrix h = random_hermitian(9, seed);
    const Matrix want = oracle::expm(cplx(0, -0.37) * h);
    EXPECT_LT((hermitian_exponential(h, 0.37) - want).norm(), 1e-12);
  }
}

TEST(StepPolicy, StepRule) {
  StepPolicy p;
  p.dt_max = 0.5;
  p.substeps_per_fastest_period = 20;
  EXPECT_DOUBLE_EQ(p.step_for(0.0), 0.5);
  EXPECT_DOUBLE_EQ(p.step_for(10.0), 1.0 / 200.0);
  p.substeps_per_fastest_period = 5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW(parse_method("leapfrog"), std::invalid_argument);
  EXPECT_EQ(parse_method(to_string(Method::magnus4)), Method::magnus4);
}

TEST(Propagation, CarrierRabiOscillation) {
  const FockSpace space{2, 1};
  const double rabi = 1.7;
  const Matrix h = 0.5 * rabi * oracle::tensor(oracle::sx(), Matrix::Identity(space.fock_dim(), space.fock_dim()));
  const TimeDependentHamiltonian ham{[h](double) { return h; }, 0.0};
  StepPolicy policy;
  policy.dt_max = 0.05;
  for (double t : {0.3, 1.0, 2.5}) {
    const auto out = propagate(QuantumState::product(space, Spin::down, 1), ham, 0.0, t, policy);
    const double up = out.rho(space.index(Spin::up, 1), space.index(Spin::up, 1)).real();
    EXPECT_NEAR(up, std::pow(std::sin(0.5 * rabi * t), 2), 1e-12);
    EXPECT_NEAR(out.time_us, t, 1e-12);
  }
}

TEST(Propagation, FreeOscillatorPhase) {
  const FockSpace space{3, 0};
  const double w = 0.9;
  const Matrix a = oracle::annihilation(space.fock_dim());
  const Matrix h = w * oracle::tensor(Matrix::Identity(2, 2), a.adjoint() * a);
  Vector psi = Vector::Zero(space.dim());
  psi(space.index(Spin::up, 0)) = M_SQRT1_2;
  psi(space.index(Spin::up, 2)) = M_SQRT1_2;
  const auto out = propagate(QuantumState::pure(space, psi), {[h](double) { return h; }, 0.0}, 0.0, 1.3, StepPolicy{});
  const cplx coherence = out.rho(space.index(Spin::up, 0), space.index(Spin::up, 2));
  EXPECT_NEAR(std::abs(coherence - 0.5 * std::exp(cplx(0, 2 * w * 1.3))), 0.0, 1e-12);
}

TEST(Integrators, ConvergenceOrders) {
  const Matrix exact = oracle::time_ordered([](double t) -> Matrix { return qubit_drive().at(t); }, 0.0, 2.0, 40000);
  const double mid_h = propagator_error(Method::exponential_midpoint, 0.02, exact);
  const double mid_h2 = propagator_error(Method::exponential_midpoint, 0.01, exact);
  EXPECT_NEAR(mid_h / mid_h2, 4.0, 0.4);
  const double m4_h = propagator_error(Method::magnus4, 0.2, exact);
  const double m4_h2 = propagator_error(Method::magnus4, 0.1, exact);
  EXPECT_GT(m4_h / m4_h2, 12.0);
  EXPECT_LT(m4_h2, 1e-5);
  const double rk_h = propagator_error(Method::rk4, 0.1, exact);
  const double rk_h2 = propagator_error(Method::rk4, 0.05, exact);
  EXPECT_GT(rk_h / rk_h2, 12.0);
}

TEST(Integrators, ChunksAreUnitaryAndCoverTheInterval) {
  StepPolicy policy;
  policy.method = Method::magnus4;
  const auto chunks = build_chunks(qubit_drive(), 0.5, 3.0, policy, 0.3);
  ASSERT_EQ(chunks.size(), 9u);
  double covered = 0.0;
  for (const auto& c : chunks) {
    covered += c.duration;
    EXPECT_LT((c.unitary.adjoint() * c.unitary - Matrix::Identity(2, 2)).norm(), 1e-13);
  }
  EXPECT_NEAR(covered, 2.5, 1e-12);
  EXPECT_NEAR(chunks.back().t_end, 3.0, 1e-12);
}

TEST(Integrators, RejectsNonHermitianHamiltonian) {
  const TimeDependentHamiltonian bad{[](double) { Matrix m = Matrix::Zero(2, 2); m(0, 1) = 1.0; return m; }, 0.0};
  EXPECT_THROW(build_chunks(bad, 0.0, 1.0, StepPolicy{}, 0.0), NumericalError);
}

TEST(Heating, SymmetricChannelDriftsLinearly) {
  const FockSpace space{40, 5};
  const double gamma = 240.0;
  auto state = hilbert::QuantumState::product(space, Spin::down, 2);
  const double t = 200.0;
  apply_heating(state.rho, space.fock_dim(), HeatingChannel::symmetric(gamma), t);
  const auto ops = hilbert::make_operators(space);
  const double n = (state.rho * ops.number).trace().real();
  EXPECT_NEAR(n, 2.0 + gamma * 1e-6 * t, 1e-10);
  EXPECT_NEAR(state.rho.trace().real(), 1.0, 1e-14);
  EXPECT_LT(hilbert::hermitian_defect(state.rho), 1e-15);
}

TEST(Heating, GeneratorMatchesLindbladForm) {
  const int fd = 6;
  const FockSpace space{fd - 1, 0};
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Matrix psi(space.dim(), 1);
  for (int i = 0; i < space.dim(); ++i) psi(i) = cplx(g(rng), g(rng));
  psi.normalize();
  const Matrix rho = psi * psi.adjoint();
  const double up = 0.3, down = 0.8;
  // Dissipator with the raising operator truncated so that a a^dag stays
  // consistent with the finite basis.
  const Matrix a = oracle::tensor(Matrix::Identity(2, 2), oracle::annihilation(fd));
  const Matrix ad = a.adjoint();
  auto d = [&](const Matrix& l) {
    return Matrix(l * rho * l.adjoint() - 0.5 * (l.adjoint() * l * rho + rho * l.adjoint() * l));
  };
  const Matrix want = up * d(ad) + down * d(a);
  const Matrix got = heating_generator(rho, fd, up, down);
  EXPECT_NEAR(got.trace().real(), 0.0, 1e-14);
  // Away from the top level the generator equals the textbook dissipator.
  Matrix diff = got - want;
  diff.row(fd - 1).setZero();
  diff.col(fd - 1).setZero();
  diff.row(2 * fd - 1).setZero();
  diff.col(2 * fd - 1).setZero();
  EXPECT_LT(diff.norm(), 1e-13);
}

TEST(Guards, LeakageIntoTopLevelThrows) {
  const FockSpace space{2, 1};
  const int fd = space.fock_dim();
  const Matrix a = oracle::annihilation(fd);
  const Matrix h = oracle::tensor(Matrix::Identity(2, 2), a + a.adjoint());
  const auto chunks = build_chunks({[h](double) { return h; }, 0.0}, 0.0, 2.0, StepPolicy{}, 0.5);
  EXPECT_THROW(apply_chunks(QuantumState::product(space, Spin::up, 0), chunks, std::nullopt), NumericalError);
}

TEST(Expectation, RequiresHermitianOperator) {
  const FockSpace space{1, 0};
  const auto st = QuantumState::product(space, Spin::up, 0);
  EXPECT_NEAR(expectation(st, oracle::tensor(oracle::sz(), Matrix::Identity(2, 2))), 1.0, 1e-15);
  Matrix bad = Matrix::Zero(4, 4);
  bad(0, 1) = 1.0;
  EXPECT_THROW(expectation(st, bad), std::invalid_argument);
}
