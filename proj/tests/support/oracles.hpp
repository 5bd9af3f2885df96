// Independent reference computations shared by unit and acceptance tests.
// Nothing here calls into the library's physics code: operators, profiles and
// propagators are rebuilt from their definitions with dense Eigen algebra.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline Mat expm(const Mat& m) { return m.exp(); }

inline Mat annihilation(int dim) {
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Mat tensor(const Mat& left, const Mat& right) {
  Mat out(left.rows() * right.rows(), left.cols() * right.cols());
  for (int i = 0; i < left.rows(); ++i)
    for (int j = 0; j < left.cols(); ++j)
      out.block(i * right.rows(), j * right.cols(), right.rows(), right.cols()) = left(i, j) * right;
  return out;
}

// Spin first, up = row 0.
inline Mat sx() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat sy() { Mat m(2, 2); m << 0, cplx(0, -1), cplx(0, 1), 0; return m; }
inline Mat sz() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }

// Smoothstep detuning over one cycle: rises 0 -> v0 on [0, tau/2], mirrors back.
inline double detuning(double v0, double tau, double t) {
  const double half = 0.5 * tau;
  const double u = t <= half ? t : tau - t;
  const double s = u / half;
  return v0 * s * s * (3.0 - 2.0 * s);
}

inline double detuning_rate(double v0, double tau, double t) {
  const double half = 0.5 * tau;
  const bool rising = t <= half;
  const double s = (rising ? t : tau - t) / half;
  const double d = v0 * 6.0 * s * (1.0 - s) / half;
  return rising ? d : -d;
}

inline double cd_amplitude(double rabi, double v0, double tau, double t) {
  const double v = detuning(v0, tau, t);
  return -rabi * detuning_rate(v0, tau, t) / (rabi * rabi + v * v);
}

// Composite Simpson rule on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

struct Drive {
  double rabi, v0, tau, omega, eta;
  bool with_cd;
};

// Interaction-picture engine Hamiltonian on spin (x) Fock(fock_dim), cycle time t.
inline Mat interaction_h(const Drive& d, int fock_dim, double t) {
  const Mat a = annihilation(fock_dim);
  const Mat id_f = Mat::Identity(fock_dim, fock_dim);
  const Mat id_s = Mat::Identity(2, 2);
  const double v = detuning(d.v0, d.tau, t);
  Mat h = 0.5 * d.rabi * tensor(sx(), id_f) + 0.5 * v * tensor(sz(), id_f) +
          d.omega * tensor(id_s, a.adjoint() * a) -
          0.5 * d.eta * d.rabi * std::sin(d.omega * t) * tensor(sy(), a + a.adjoint());
  if (d.with_cd) h += 0.5 * cd_amplitude(d.rabi, d.v0, d.tau, t) * tensor(sy(), id_f);
  return h;
}

// Time-ordered exp(-i int H dt) on [t0, t1] by midpoint dense exponentials.
inline Mat time_ordered(const std::function<Mat(double)>& h, double t0, double t1, int steps) {
  const double dt = (t1 - t0) / steps;
  Mat u = Mat::Identity(h(t0).rows(), h(t0).cols());
  for (int k = 0; k < steps; ++k) {
    const Mat step = expm(cplx(0, -dt) * h(t0 + (k + 0.5) * dt));
    u = step * u;
  }
  return u;
}

// <m| exp(i eta (a + a^dag)) |n> on a generously truncated oscillator.
inline cplx displacement(int m, int n, double eta, int truncation = 90) {
  const Mat a = annihilation(truncation);
  const Mat d = expm(cplx(0, eta) * (a + a.adjoint()));
  return d(m, n);
}

}  // namespace oracle
