#include "qotto/analysis.hpp"
#include "qotto/drive.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qotto;
using namespace qotto::drive;
using qotto::hilbert::FockSpace;
using qotto::hilbert::Spin;

namespace {

EngineParams default_params() { return EngineParams{}; }

}  // namespace

TEST(EngineParams, ValidationRejectsNonsense) {
  EXPECT_NO_THROW(default_params().validate());
  auto p = default_params();
  p.tau = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = default_params();
  p.eta = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = default_params();
  p.trap_freq = p.battery_freq / 2;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(DetuningProfile, MatchesSmoothstepDefinition) {
  const auto p = default_params();
  const auto prof = DriveProfile::from(p);
  for (int i = 0; i <= 200; ++i) {
    const double t = p.tau * i / 200.0;
    const auto d = detuning(prof, t);
    EXPECT_NEAR(d.v, oracle::detuning(p.v0, p.tau, t), 1e-12);
    EXPECT_NEAR(d.v_dot, oracle::detuning_rate(p.v0, p.tau, t), 1e-12);
  }
  EXPECT_NEAR(detuning(prof, 0.0).v, 0.0, 1e-15);
  EXPECT_NEAR(detuning(prof, p.tau / 2).v, p.v0, 1e-12);
  EXPECT_NEAR(detuning(prof, p.tau).v, 0.0, 1e-12);
  EXPECT_THROW(detuning(prof, 1.5 * p.tau), std::out_of_range);
}

TEST(DetuningProfile, RateIsDerivativeOfDetuning) {
  const auto prof = DriveProfile{2.0, 10.0};
  const double h = 1e-6;
  for (double t : {0.3, 2.1, 4.9, 5.7, 8.8}) {
    const double fd = (detuning(prof, t + h).v - detuning(prof, t - h).v) / (2 * h);
    EXPECT_NEAR(detuning(prof, t).v_dot, fd, 1e-7);
  }
}

TEST(CounterdiabaticAmplitude, IsMinusMixingAngleRate) {
  const auto p = default_params();
  const auto prof = DriveProfile::from(p);
  const double h = 1e-5;
  for (double t : {5.0, 30.0, 59.0, 61.0, 100.0}) {
    auto angle = [&](double s) { return std::atan(detuning(prof, s).v / p.rabi); };
    const double fd = -(angle(t + h) - angle(t - h)) / (2 * h);
    EXPECT_NEAR(omega_cd(p, prof, t), fd, 1e-9);
    EXPECT_NEAR(omega_cd(p, prof, t), oracle::cd_amplitude(p.rabi, p.v0, p.tau, t), 1e-14);
  }
}

TEST(CounterdiabaticCost, ClosedFormMatchesQuadratureOverRandomTuples) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> rabi(0.1, 3.0), v0(0.0, 3.0), tau(0.05, 200.0);
  for (int k = 0; k < 100; ++k) {
    EngineParams p;
    p.rabi = rabi(rng);
    p.v0 = v0(rng);
    p.tau = tau(rng);
    const auto prof = DriveProfile::from(p);
    const double integral = oracle::simpson(
        [&](double t) { return std::abs(oracle::cd_amplitude(p.rabi, p.v0, p.tau, t)); }, 0.0, p.tau, 20000);
    const double numeric = integral / (p.tau * p.rabi);
    const double closed = cd_cost_closed_form(p, prof);
    if (closed == 0.0) {
      EXPECT_NEAR(numeric, 0.0, 1e-14);
      continue;
    }
    EXPECT_NEAR(numeric / closed, 1.0, 1e-6) << "tuple " << k;
    EXPECT_NEAR(analysis::cost_ratios(p, prof).amplitude / closed, 1.0, 1e-6) << "tuple " << k;
  }
}

TEST(InteractionHamiltonian, HandAssembledTwoLevelBattery) {
  const FockSpace space{1, 0};
  const HamiltonianTerms terms(space);
  EngineParams p;
  p.rabi = 1.3;
  p.v0 = 0.7;
  p.tau = 4.0;
  p.battery_freq = 0.9;
  p.eta = 0.2;
  const auto prof = DriveProfile::from(p);
  const double t = 1.1;
  const double v = oracle::detuning(p.v0, p.tau, t);
  const double g = -0.5 * p.eta * p.rabi * std::sin(p.battery_freq * t);
  const double cd = oracle::cd_amplitude(p.rabi, p.v0, p.tau, t);
  const cplx i(0, 1);

  // Basis order: |up,0>, |up,1>, |down,0>, |down,1>.
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = 0.5 * v;
  want(1, 1) = 0.5 * v + p.battery_freq;
  want(2, 2) = -0.5 * v;
  want(3, 3) = -0.5 * v + p.battery_freq;
  want(0, 2) = want(2, 0) = want(1, 3) = want(3, 1) = 0.5 * p.rabi;
  want(0, 3) += -i * g;
  want(1, 2) += -i * g;
  want(3, 0) += i * g;
  want(2, 1) += i * g;
  EXPECT_LT((interaction_hamiltonian(terms, p, prof, t, false) - want).norm(), 1e-14);

  want(0, 2) += -i * 0.5 * cd;
  want(1, 3) += -i * 0.5 * cd;
  want(2, 0) += i * 0.5 * cd;
  want(3, 1) += i * 0.5 * cd;
  EXPECT_LT((interaction_hamiltonian(terms, p, prof, t, true) - want).norm(), 1e-14);
}

TEST(InteractionHamiltonian, MatchesIndependentAssemblyOnLargerSpace) {
  const FockSpace space{6, 3};
  const HamiltonianTerms terms(space);
  const auto p = default_params();
  const auto prof = DriveProfile::from(p);
  const oracle::Drive d{p.rabi, p.v0, p.tau, p.battery_freq, p.eta, true};
  for (double t : {0.0, 13.0, 59.5, 77.0, 119.0}) {
    EXPECT_LT((interaction_hamiltonian(terms, p, prof, t, true) - oracle::interaction_h(d, space.fock_dim(), t)).norm(),
              1e-12);
  }
}

TEST(LabFrame, ReducesToCarrierWhenDecoupled) {
  const FockSpace space{3, 1};
  const HamiltonianTerms terms(space);
  auto p = default_params();
  p.eta = 0.0;
  const auto prof = DriveProfile::from(p);
  // Sideband tones would still drive the carrier off-resonantly, so keep only
  // the carrier tone for this reduction.
  std::vector<ToneSpec> tones;
  for (const auto& tone : three_tone_field(p, false))
    if (tone.role == ToneRole::carrier) tones.push_back(tone);
  const double t = 17.3;
  const Matrix h = lab_frame_hamiltonian(terms, p, prof, tones, t, LambDickeOrder::first);
  const int fd = space.fock_dim();
  const Matrix id = Matrix::Identity(fd, fd);
  const Matrix a = oracle::annihilation(fd);
  const Matrix want = 0.5 * oracle::detuning(p.v0, p.tau, t) * oracle::tensor(oracle::sz(), id) +
                      p.battery_freq * oracle::tensor(Matrix::Identity(2, 2), a.adjoint() * a) +
                      0.5 * p.rabi * oracle::tensor(oracle::sx(), id);
  EXPECT_LT((h - want).norm(), 1e-12);
}

TEST(LabFrame, BlueToneProducesResonantSidebandCoupling) {
  const FockSpace space{4, 1};
  const HamiltonianTerms terms(space);
  const auto p = default_params();
  const auto prof = DriveProfile::from(p);
  std::vector<ToneSpec> blue;
  for (const auto& tone : three_tone_field(p, false))
    if (tone.role == ToneRole::blue) blue.push_back(tone);
  ASSERT_EQ(blue.size(), 1u);
  const double t = 3.7;
  const Matrix h = lab_frame_hamiltonian(terms, p, prof, blue, t, LambDickeOrder::first);
  EXPECT_LT(hilbert::hermitian_defect(h), 1e-14);
  const double amp = p.rabi * std::sin(p.battery_freq * t);
  const double w = p.sideband_offset();
  for (int n = 0; n < 3; ++n) {
    // |down,n> -> |up,n+1> is stationary, |down,n+1> -> |up,n> rotates at 2 w.
    const cplx stationary = h(space.index(Spin::up, n + 1), space.index(Spin::down, n));
    EXPECT_NEAR(std::abs(stationary - cplx(0, 0.5 * p.eta * amp * std::sqrt(n + 1.0))), 0.0, 1e-12);
    const cplx rotating = h(space.index(Spin::up, n), space.index(Spin::down, n + 1));
    const cplx want = cplx(0, 0.5 * p.eta * amp * std::sqrt(n + 1.0)) * std::exp(cplx(0, -2.0 * w * t));
    EXPECT_NEAR(std::abs(rotating - want), 0.0, 1e-12);
  }
}

TEST(LabFrame, ToneValidation) {
  const auto p = default_params();
  auto tones = three_tone_field(p, true);
  EXPECT_NO_THROW(validate_tones(p, tones));
  tones[1].detuning *= 1.01;
  EXPECT_THROW(validate_tones(p, tones), std::invalid_argument);
  EXPECT_THROW(parse_tone_role("green"), std::invalid_argument);
  EXPECT_EQ(parse_tone_role("cd"), ToneRole::cd);
}
