// Blue-sideband phonon thermometry: forward model, shot-noise synthesis, and
// constrained inversion of the signal into Fock populations.
#pragma once

#include "qotto/hilbert.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qotto::thermometry {

enum class RabiModel { exact, lamb_dicke };
// How the fit treats population above the cutoff. dephased: it contributes a
// flat 1/2 to p_down (many incommensurate frequencies average out); none: it
// is ignored.
enum class RemainderModel { none, dephased };

RabiModel parse_rabi_model(std::string_view name);
RemainderModel parse_remainder_model(std::string_view name);
std::string_view to_string(RabiModel m);
std::string_view to_string(RemainderModel m);

// Rabi frequency of |down, n> <-> |up, n+1|.
double bsb_rabi_frequency(double omega_bsb, double eta, int n, RabiModel model = RabiModel::exact);

struct ThermometryScan {
  double omega_bsb = 6.283185307179586 * 0.02;
  double eta = 0.05;
  std::vector<double> times;
  int shots_per_point = 200;
  std::uint64_t seed = 1;

  void validate() const;
  // Uniform grid over [0, periods * 2 pi / (eta omega_bsb)].
  static ThermometryScan default_grid(double omega_bsb, double eta, int points = 60, double periods = 3.0,
                                      int shots = 200, std::uint64_t seed = 1);
};

struct SignalPoint {
  double time_us = 0.0;
  double p_down = 0.0;
  int shots = 0;  // 0 marks a noiseless (exact) point
};
using Signal = std::vector<SignalPoint>;

// (1/(n+1)) (n/(n+1))^k for k = 0..levels-1.
std::vector<double> thermal_distribution(double n_bar, int levels);

// Ideal p_down(t) = sum_n p_n cos^2(Omega_{n+1,n} t). Any missing mass 1 - sum p
// is spread evenly over the ten levels above the given support.
std::vector<double> ideal_signal(std::span<const double> populations, const ThermometryScan& scan,
                                 RabiModel model = RabiModel::exact);

// Binomial sampling with scan.shots_per_point and scan.seed.
Signal synthesize_signal(std::span<const double> populations, const ThermometryScan& scan,
                         RabiModel model = RabiModel::exact);
Signal noiseless_signal(std::span<const double> populations, const ThermometryScan& scan,
                        RabiModel model = RabiModel::exact);

// min ||A x - b|| subject to x >= 0 and weights . x <= 1 (weights >= 0).
struct ConstrainedSolution {
  Eigen::VectorXd x;
  int iterations = 0;
  bool sum_active = false;
};
ConstrainedSolution constrained_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                              const Eigen::VectorXd& weights, int max_iterations = 0);

struct TailParams {
  int n0 = 0;
  double amplitude = 0.0;
  double decay = 0.0;
  double offset = 0.0;
};

struct FitPolicy {
  double occupation_floor = 0.95;
  int min_n_max = 1;
  int n_max_ceiling = 30;
  std::optional<int> forced_n_max;
  std::optional<int> tail_n0;  // p_{n > n0} = A exp(-B (n - n0)) + C
  RemainderModel remainder = RemainderModel::dephased;
  RabiModel model = RabiModel::exact;

  void validate() const;
};

struct PhononFit {
  std::vector<double> p_n;
  std::vector<double> sigma_p_n;
  int n_max = 0;
  double n_bar = 0.0;
  double n_bar_error = 0.0;
  double total_occupation = 0.0;
  std::optional<TailParams> tail;
  double residual_norm = 0.0;
  int iterations = 0;
  // Fitted total occupation at each cutoff tried by the selection policy,
  // starting at policy.min_n_max.
  std::vector<double> totals_by_cutoff;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fit at a single cutoff.
PhononFit fit_at_cutoff(const Signal& signal, const ThermometryScan& scan, int n_max, const FitPolicy& policy);
// Lowest cutoff whose fitted total reaches the occupation floor (or the
// forced cutoff). Throws FitError if the ceiling is reached first.
PhononFit fit_populations(const Signal& signal, const ThermometryScan& scan, const FitPolicy& policy = {});

struct BootstrapResult {
  std::vector<double> sigma_p_n;
  double sigma_n_bar = 0.0;
  int resamples = 0;
  int failures = 0;
};

// Normal-approximation resampling of every point (variance p(1-p)/shots),
// refit at the fit's cutoff. Resample i uses a seed derived from seed and i.
BootstrapResult bootstrap_errors(const Signal& signal, const ThermometryScan& scan, const PhononFit& fit,
                                 const FitPolicy& policy, int resamples = 200, std::uint64_t seed = 1,
                                 int jobs = 1);

// Model curve the fit describes at the scan times, remainder term included.
std::vector<double> fitted_signal(const PhononFit& fit, const ThermometryScan& scan, const FitPolicy& policy);

nlohmann::json to_json(const PhononFit& fit);
nlohmann::json to_json(const BootstrapResult& result);

void write_signal_csv(const std::string& path, const Signal& signal);
Signal read_signal_csv(const std::string& path);

}  // namespace qotto::thermometry
