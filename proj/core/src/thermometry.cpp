#include "qotto/thermometry.hpp"

#include "qotto/io.hpp"
#include "qotto/seeding.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace qotto::thermometry {

RabiModel parse_rabi_model(std::string_view name) {
  if (name == "exact") return RabiModel::exact;
  if (name == "lamb_dicke") return RabiModel::lamb_dicke;
  throw std::invalid_argument("unknown Rabi model '" + std::string(name) + "'");
}

RemainderModel parse_remainder_model(std::string_view name) {
  if (name == "none") return RemainderModel::none;
  if (name == "dephased") return RemainderModel::dephased;
  throw std::invalid_argument("unknown remainder model '" + std::string(name) + "'");
}

std::string_view to_string(RabiModel m) { return m == RabiModel::exact ? "exact" : "lamb_dicke"; }
std::string_view to_string(RemainderModel m) { return m == RemainderModel::none ? "none" : "dephased"; }

double bsb_rabi_frequency(double omega_bsb, double eta, int n, RabiModel model) {
  if (n < 0) throw std::invalid_argument("bsb_rabi_frequency: n must be >= 0");
  if (model == RabiModel::lamb_dicke) return omega_bsb * eta * std::sqrt(n + 1.0);
  return omega_bsb * std::abs(hilbert::displacement_element(n + 1, n, eta));
}

void ThermometryScan::validate() const {
  if (!(omega_bsb > 0.0)) throw std::invalid_argument("thermometry: omega_bsb must be > 0");
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("thermometry: eta must lie in [0, 1)");
  if (shots_per_point < 1) throw std::invalid_argument("thermometry: shots_per_point must be >= 1");
  if (times.empty()) throw std::invalid_argument("thermometry: empty time grid");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("thermometry: times must be strictly increasing");
}

ThermometryScan ThermometryScan::default_grid(double omega_bsb, double eta, int points, double periods, int shots,
                                              std::uint64_t seed) {
  if (points < 2) throw std::invalid_argument("thermometry: grid needs at least 2 points");
  if (!(eta > 0.0)) throw std::invalid_argument("thermometry: default grid needs eta > 0");
  ThermometryScan scan{omega_bsb, eta, {}, shots, seed};
  const double span = periods * 2.0 * M_PI / (eta * omega_bsb);
  scan.times.resize(points);
  for (int i = 0; i < points; ++i) scan.times[i] = span * i / (points - 1);
  scan.validate();
  return scan;
}

std::vector<double> thermal_distribution(double n_bar, int levels) {
  if (!(n_bar >= 0.0)) throw std::invalid_argument("thermal_distribution: n_bar must be >= 0");
  std::vector<double> p(levels);
  const double q = n_bar / (n_bar + 1.0);
  for (int k = 0; k < levels; ++k) p[k] = std::pow(q, k) / (n_bar + 1.0);
  return p;
}

namespace {

std::vector<double> rabi_table(const ThermometryScan& scan, int levels, RabiModel model) {
  std::vector<double> w(levels);
  for (int n = 0; n < levels; ++n) w[n] = bsb_rabi_frequency(scan.omega_bsb, scan.eta, n, model);
  return w;
}

// cos^2(Omega_n t) for every time and n = 0..levels-1.
Eigen::MatrixXd cosine_basis(std::span<const double> times, const ThermometryScan& scan, int levels,
                             RabiModel model) {
  const auto w = rabi_table(scan, levels, model);
  Eigen::MatrixXd c(static_cast<Eigen::Index>(times.size()), levels);
  for (std::size_t i = 0; i < times.size(); ++i)
    for (int n = 0; n < levels; ++n) {
      const double x = std::cos(w[n] * times[i]);
      c(static_cast<Eigen::Index>(i), n) = x * x;
    }
  return c;
}

constexpr int kRemainderSpread = 10;

}  // namespace

std::vector<double> ideal_signal(std::span<const double> populations, const ThermometryScan& scan,
                                 RabiModel model) {
  double total = 0.0;
  for (double p : populations) {
    if (!(p >= 0.0)) throw std::invalid_argument("ideal_signal: populations must be >= 0");
    total += p;
  }
  if (total > 1.0 + 1e-9) throw std::invalid_argument("ideal_signal: populations sum above 1");
  std::vector<double> dist(populations.begin(), populations.end());
  const double missing = std::max(0.0, 1.0 - total);
  if (missing > 0.0) dist.insert(dist.end(), kRemainderSpread, missing / kRemainderSpread);

  const int levels = static_cast<int>(dist.size());
  const auto basis = cosine_basis(scan.times, scan, levels, model);
  const Eigen::VectorXd y = basis * Eigen::Map<const Eigen::VectorXd>(dist.data(), levels);
  std::vector<double> out(y.data(), y.data() + y.size());
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return out;
}

Signal noiseless_signal(std::span<const double> populations, const ThermometryScan& scan, RabiModel model) {
  scan.validate();
  const auto y = ideal_signal(populations, scan, model);
  Signal s(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) s[i] = {scan.times[i], y[i], 0};
  return s;
}

Signal synthesize_signal(std::span<const double> populations, const ThermometryScan& scan, RabiModel model) {
  scan.validate();
  const auto y = ideal_signal(populations, scan, model);
  std::mt19937_64 rng(scan.seed);
  Signal s(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::binomial_distribution<int> draw(scan.shots_per_point, y[i]);
    s[i] = {scan.times[i], static_cast<double>(draw(rng)) / scan.shots_per_point, scan.shots_per_point};
  }
  return s;
}

namespace {

Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  return a.completeOrthogonalDecomposition().solve(b);
}

// Lawson-Hanson non-negative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iter, int& iterations) {
  const Eigen::Index k = a.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  std::vector<bool> passive(k, false);
  const double tol = 1e-13 * std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.cwiseAbs().maxCoeff()) *
                     static_cast<double>(a.rows());

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < k; ++j)
      if (passive[j]) idx.push_back(j);
    Eigen::MatrixXd ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) ap.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
    const Eigen::VectorXd zp = least_squares(ap, b);
    z.setZero(k);
    for (std::size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zp(static_cast<Eigen::Index>(c));
  };

  while (iterations < max_iter) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < k; ++j)
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    if (best < 0) break;
    passive[best] = true;
    Eigen::VectorXd z;
    while (true) {
      ++iterations;
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < k; ++j)
        if (passive[j] && z(j) <= 0.0) feasible = false;
      if (feasible || iterations >= max_iter) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < k; ++j)
        if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < k; ++j)
        if (passive[j] && x(j) <= 1e-15) {
          passive[j] = false;
          x(j) = 0.0;
        }
    }
    x = z;
    for (Eigen::Index j = 0; j < k; ++j)
      if (!passive[j]) x(j) = 0.0;
  }
  return x;
}

// Least squares on the face weights . x = 1 restricted to the free indices,
// by eliminating the free variable with the largest weight.
Eigen::VectorXd face_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& s,
                           const std::vector<bool>& free) {
  const Eigen::Index k = a.cols();
  Eigen::Index pivot = -1;
  for (Eigen::Index j = 0; j < k; ++j)
    if (free[j] && (pivot < 0 || s(j) > s(pivot))) pivot = j;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  if (pivot < 0 || s(pivot) <= 0.0) return x;
  std::vector<Eigen::Index> others;
  for (Eigen::Index j = 0; j < k; ++j)
    if (free[j] && j != pivot) others.push_back(j);
  const Eigen::VectorXd ap = a.col(pivot) / s(pivot);
  Eigen::MatrixXd reduced(a.rows(), static_cast<Eigen::Index>(others.size()));
  for (std::size_t c = 0; c < others.size(); ++c)
    reduced.col(static_cast<Eigen::Index>(c)) = a.col(others[c]) - ap * s(others[c]);
  Eigen::VectorXd xr;
  if (!others.empty()) xr = least_squares(reduced, b - ap);
  double rest = 0.0;
  for (std::size_t c = 0; c < others.size(); ++c) {
    x(others[c]) = xr(static_cast<Eigen::Index>(c));
    rest += s(others[c]) * x(others[c]);
  }
  x(pivot) = (1.0 - rest) / s(pivot);
  return x;
}

}  // namespace

ConstrainedSolution constrained_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                              const Eigen::VectorXd& weights, int max_iterations) {
  const Eigen::Index k = a.cols();
  if (b.size() != a.rows() || weights.size() != k)
    throw std::invalid_argument("constrained_least_squares: dimension mismatch");
  if ((weights.array() < 0.0).any()) throw std::invalid_argument("constrained_least_squares: negative weight");
  if (max_iterations <= 0) max_iterations = 30 * static_cast<int>(k) + 30;

  ConstrainedSolution sol;
  sol.x = nnls(a, b, max_iterations, sol.iterations);
  const double sum = weights.dot(sol.x);
  if (sum <= 1.0 + 1e-12) return sol;

  // The unconstrained-sum optimum leaves the simplex: run a primal active set
  // on the face weights . x = 1, starting from the rescaled NNLS point.
  sol.sum_active = true;
  Eigen::VectorXd x = sol.x / sum;
  std::vector<bool> free(k);
  for (Eigen::Index j = 0; j < k; ++j) free[j] = x(j) > 0.0;
  const double tol = 1e-12 * std::max(1.0, (a.transpose() * b).cwiseAbs().maxCoeff());

  for (int it = 0; it < max_iterations; ++it) {
    ++sol.iterations;
    const Eigen::VectorXd z = face_solve(a, b, weights, free);
    bool feasible = true;
    for (Eigen::Index j = 0; j < k; ++j)
      if (free[j] && z(j) < 0.0) feasible = false;
    if (feasible) {
      x = z;
      // Multipliers: gradient g + mu s = lambda with lambda >= 0 on bound indices.
      const Eigen::VectorXd g = a.transpose() * (a * x - b);
      Eigen::Index pivot = -1;
      for (Eigen::Index j = 0; j < k; ++j)
        if (free[j] && (pivot < 0 || weights(j) > weights(pivot))) pivot = j;
      const double mu = -g(pivot) / weights(pivot);
      Eigen::Index release = -1;
      double most_negative = -tol;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (free[j]) continue;
        const double lambda = g(j) + mu * weights(j);
        if (lambda < most_negative) {
          most_negative = lambda;
          release = j;
        }
      }
      if (release < 0) {
        sol.x = x;
        return sol;
      }
      free[release] = true;
      continue;
    }
    double alpha = 1.0;
    Eigen::Index block = -1;
    for (Eigen::Index j = 0; j < k; ++j)
      if (free[j] && z(j) < 0.0) {
        const double step = x(j) / (x(j) - z(j));
        if (step < alpha) {
          alpha = step;
          block = j;
        }
      }
    x += alpha * (z - x);
    if (block >= 0) {
      free[block] = false;
      x(block) = 0.0;
    }
    for (Eigen::Index j = 0; j < k; ++j)
      if (free[j] && x(j) <= 0.0) {
        free[j] = false;
        x(j) = 0.0;
      }
  }
  throw FitError("constrained least squares did not converge");
}

void FitPolicy::validate() const {
  if (!(occupation_floor > 0.0 && occupation_floor <= 1.0))
    throw std::invalid_argument("fit policy: occupation_floor must lie in (0, 1]");
  if (min_n_max < 0) throw std::invalid_argument("fit policy: min_n_max must be >= 0");
  if (n_max_ceiling < min_n_max) throw std::invalid_argument("fit policy: ceiling below min_n_max");
  if (forced_n_max && *forced_n_max < 0) throw std::invalid_argument("fit policy: forced n_max must be >= 0");
  if (tail_n0 && *tail_n0 < 0) throw std::invalid_argument("fit policy: tail n0 must be >= 0");
}

namespace {

struct Parameterization {
  Eigen::MatrixXd design;    // m x k, columns act on the parameters
  Eigen::VectorXd weights;   // sum constraint weights
  Eigen::MatrixXd dp;        // dp/dtheta, (n_max+1) x k_full
  Eigen::VectorXd p;         // populations
};

struct LinearFit {
  Eigen::VectorXd theta;
  double rss = 0.0;
  int iterations = 0;
};

LinearFit solve_linear(const Eigen::MatrixXd& design, const Eigen::VectorXd& target, const Eigen::VectorXd& w) {
  auto sol = constrained_least_squares(design, target, w);
  LinearFit f;
  f.theta = sol.x;
  f.rss = (design * sol.x - target).squaredNorm();
  f.iterations = sol.iterations;
  return f;
}

// Tail columns for decay B over levels n0+1..n_max.
void tail_design(const Eigen::MatrixXd& basis, int n0, double decay, Eigen::MatrixXd& design, Eigen::VectorXd& w) {
  const int n_max = static_cast<int>(basis.cols()) - 1;
  const Eigen::Index m = basis.rows();
  design.resize(m, n0 + 3);
  w.resize(n0 + 3);
  design.leftCols(n0 + 1) = basis.leftCols(n0 + 1);
  w.head(n0 + 1).setOnes();
  Eigen::VectorXd col_a = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd col_c = Eigen::VectorXd::Zero(m);
  double wa = 0.0;
  for (int n = n0 + 1; n <= n_max; ++n) {
    const double e = std::exp(-decay * (n - n0));
    col_a += e * basis.col(n);
    col_c += basis.col(n);
    wa += e;
  }
  design.col(n0 + 1) = col_a;
  design.col(n0 + 2) = col_c;
  w(n0 + 1) = wa;
  w(n0 + 2) = n_max - n0;
}

}  // namespace

PhononFit fit_at_cutoff(const Signal& signal, const ThermometryScan& scan, int n_max, const FitPolicy& policy) {
  policy.validate();
  if (n_max < 0) throw std::invalid_argument("fit: n_max must be >= 0");
  const auto m = static_cast<Eigen::Index>(signal.size());
  if (m < 2 * (n_max + 1))
    throw std::invalid_argument("fit: need at least 2*(n_max+1) = " + std::to_string(2 * (n_max + 1)) +
                                " samples, have " + std::to_string(m));
  const double w10 = bsb_rabi_frequency(scan.omega_bsb, scan.eta, 0, policy.model);
  if (!(w10 > 0.0)) throw std::invalid_argument("fit: vanishing sideband Rabi frequency (eta = 0?)");
  const double span = signal.back().time_us - signal.front().time_us;
  if (span < 2.0 * M_PI / w10 * (1.0 - 1e-9))
    throw std::invalid_argument("fit: samples must span at least one Omega_{1,0} period");

  std::vector<double> times(signal.size());
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    times[i] = signal[i].time_us;
    y(i) = signal[i].p_down;
  }
  Eigen::MatrixXd basis = cosine_basis(times, scan, n_max + 1, policy.model);
  if (policy.remainder == RemainderModel::dephased) {
    basis.array() -= 0.5;
    y.array() -= 0.5;
  }

  const int levels = n_max + 1;
  PhononFit fit;
  fit.n_max = n_max;
  Eigen::VectorXd p;
  Eigen::MatrixXd dp;  // levels x k
  double rss = 0.0;
  const bool use_tail = policy.tail_n0 && *policy.tail_n0 < n_max;

  if (!use_tail) {
    const LinearFit lf = solve_linear(basis, y, Eigen::VectorXd::Ones(levels));
    p = lf.theta;
    dp = Eigen::MatrixXd::Identity(levels, levels);
    rss = lf.rss;
    fit.iterations = lf.iterations;
  } else {
    const int n0 = *policy.tail_n0;
    Eigen::MatrixXd design;
    Eigen::VectorXd w;
    auto objective = [&](double log_b, LinearFit* out) {
      tail_design(basis, n0, std::exp(log_b), design, w);
      LinearFit lf = solve_linear(design, y, w);
      fit.iterations += lf.iterations;
      if (out) *out = lf;
      return lf.rss;
    };
    // Coarse log grid over the decay constant, then golden-section refinement.
    const double lo = std::log(1e-3), hi = std::log(20.0);
    const int grid = 48;
    int best = 0;
    double best_val = INFINITY;
    for (int g = 0; g <= grid; ++g) {
      const double v = objective(lo + (hi - lo) * g / grid, nullptr);
      if (v < best_val) {
        best_val = v;
        best = g;
      }
    }
    double a = lo + (hi - lo) * std::max(best - 1, 0) / grid;
    double b = lo + (hi - lo) * std::min(best + 1, grid) / grid;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = objective(c, nullptr), fd = objective(d, nullptr);
    for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
      if (fc < fd) {
        b = d; d = c; fd = fc;
        c = b - phi * (b - a); fc = objective(c, nullptr);
      } else {
        a = c; c = d; fc = fd;
        d = a + phi * (b - a); fd = objective(d, nullptr);
      }
    }
    const double log_b = 0.5 * (a + b);
    LinearFit lf;
    objective(log_b, &lf);
    const double decay = std::exp(log_b);
    const double amp = lf.theta(n0 + 1), off = lf.theta(n0 + 2);
    p.resize(levels);
    dp = Eigen::MatrixXd::Zero(levels, n0 + 4);  // p_0..p_n0, A, B, C
    for (int n = 0; n <= n0; ++n) {
      p(n) = lf.theta(n);
      dp(n, n) = 1.0;
    }
    for (int n = n0 + 1; n <= n_max; ++n) {
      const double e = std::exp(-decay * (n - n0));
      p(n) = amp * e + off;
      dp(n, n0 + 1) = e;
      dp(n, n0 + 2) = -amp * (n - n0) * e;
      dp(n, n0 + 3) = 1.0;
    }
    rss = lf.rss;
    fit.tail = TailParams{n0, amp, decay, off};
  }

  // Propagated error with iid residuals: Cov = s^2 (J^T J)^+, s^2 = RSS/(m - k).
  const Eigen::MatrixXd jac = basis * dp;
  const Eigen::Index k = jac.cols();
  const double s2 = rss / static_cast<double>(std::max<Eigen::Index>(m - k, 1));
  const Eigen::MatrixXd normal = jac.transpose() * jac;
  const Eigen::MatrixXd cov_theta = s2 * normal.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::MatrixXd cov_p = dp * cov_theta * dp.transpose();
  const Eigen::VectorXd levels_vec = Eigen::VectorXd::LinSpaced(levels, 0.0, static_cast<double>(n_max));

  fit.p_n.assign(p.data(), p.data() + levels);
  fit.sigma_p_n.resize(levels);
  for (int n = 0; n < levels; ++n) fit.sigma_p_n[n] = std::sqrt(std::max(cov_p(n, n), 0.0));
  fit.total_occupation = p.sum();
  fit.n_bar = levels_vec.dot(p);
  fit.n_bar_error = std::sqrt(std::max(levels_vec.dot(cov_p * levels_vec), 0.0));
  fit.residual_norm = std::sqrt(rss);
  return fit;
}

PhononFit fit_populations(const Signal& signal, const ThermometryScan& scan, const FitPolicy& policy) {
  policy.validate();
  if (policy.forced_n_max) return fit_at_cutoff(signal, scan, *policy.forced_n_max, policy);
  std::vector<double> totals;
  const int sample_limit = static_cast<int>(signal.size()) / 2 - 1;
  const int ceiling = std::min(policy.n_max_ceiling, sample_limit);
  for (int n = policy.min_n_max; n <= ceiling; ++n) {
    PhononFit fit = fit_at_cutoff(signal, scan, n, policy);
    totals.push_back(fit.total_occupation);
    if (fit.total_occupation >= policy.occupation_floor) {
      fit.totals_by_cutoff = std::move(totals);
      return fit;
    }
  }
  const double best = totals.empty() ? 0.0 : *std::max_element(totals.begin(), totals.end());
  throw FitError("occupation floor " + std::to_string(policy.occupation_floor) + " unreachable up to n_max = " +
                 std::to_string(ceiling) + " (best total " + std::to_string(best) + ")");
}

BootstrapResult bootstrap_errors(const Signal& signal, const ThermometryScan& scan, const PhononFit& fit,
                                 const FitPolicy& policy, int resamples, std::uint64_t seed, int jobs) {
  if (resamples < 2) throw std::invalid_argument("bootstrap: need at least 2 resamples");
  FitPolicy fixed = policy;
  fixed.forced_n_max = fit.n_max;
  if (fit.tail) fixed.tail_n0 = fit.tail->n0;

  const int levels = fit.n_max + 1;
  std::vector<std::optional<PhononFit>> results(resamples);
  auto work = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      Signal resampled = signal;
      for (auto& pt : resampled) {
        const double z = gauss(rng);
        if (pt.shots <= 0) continue;
        const double sd = std::sqrt(pt.p_down * (1.0 - pt.p_down) / pt.shots);
        pt.p_down = std::clamp(pt.p_down + sd * z, 0.0, 1.0);
      }
      try {
        results[r] = fit_at_cutoff(resampled, scan, fit.n_max, fixed);
      } catch (const FitError&) {
        results[r].reset();
      }
    }
  };
  jobs = std::clamp(jobs, 1, resamples);
  if (jobs == 1) {
    work(0, resamples);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, resamples * j / jobs, resamples * (j + 1) / jobs);
    for (auto& t : pool) t.join();
  }

  BootstrapResult out;
  out.resamples = resamples;
  std::vector<Eigen::VectorXd> ps;
  std::vector<double> nbars;
  for (const auto& r : results) {
    if (!r) {
      ++out.failures;
      continue;
    }
    ps.emplace_back(Eigen::Map<const Eigen::VectorXd>(r->p_n.data(), levels));
    nbars.push_back(r->n_bar);
  }
  const auto ok = ps.size();
  out.sigma_p_n.assign(levels, 0.0);
  if (ok < 2) return out;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(levels);
  for (const auto& p : ps) mean += p;
  mean /= static_cast<double>(ok);
  Eigen::VectorXd var = Eigen::VectorXd::Zero(levels);
  for (const auto& p : ps) var += (p - mean).cwiseAbs2();
  var /= static_cast<double>(ok - 1);
  for (int n = 0; n < levels; ++n) out.sigma_p_n[n] = std::sqrt(var(n));
  const double nb_mean = std::accumulate(nbars.begin(), nbars.end(), 0.0) / static_cast<double>(ok);
  double nb_var = 0.0;
  for (double v : nbars) nb_var += (v - nb_mean) * (v - nb_mean);
  out.sigma_n_bar = std::sqrt(nb_var / static_cast<double>(ok - 1));
  return out;
}

nlohmann::json to_json(const PhononFit& fit) {
  nlohmann::json j;
  j["p_n"] = fit.p_n;
  j["sigma_p_n"] = fit.sigma_p_n;
  j["n_max"] = fit.n_max;
  j["n_bar"] = fit.n_bar;
  j["n_bar_error"] = fit.n_bar_error;
  j["total_occupation"] = fit.total_occupation;
  if (fit.tail) {
    j["tail_model"] = {{"kind", "exponential"},
                       {"n0", fit.tail->n0},
                       {"A", fit.tail->amplitude},
                       {"B", fit.tail->decay},
                       {"C", fit.tail->offset}};
  } else {
    j["tail_model"] = {{"kind", "none"}};
  }
  j["diagnostics"] = {{"residual_norm", fit.residual_norm},
                      {"iterations", fit.iterations},
                      {"totals_by_cutoff", fit.totals_by_cutoff}};
  return j;
}

nlohmann::json to_json(const BootstrapResult& r) {
  return {{"sigma_p_n", r.sigma_p_n}, {"sigma_n_bar", r.sigma_n_bar}, {"resamples", r.resamples},
          {"failures", r.failures}};
}

void write_signal_csv(const std::string& path, const Signal& signal) {
  io::CsvTable table({"time_us", "p_down", "shots"});
  for (const auto& pt : signal) table.add_row({io::format_number(pt.time_us), io::format_number(pt.p_down), std::to_string(pt.shots)});
  table.write(path);
}

Signal read_signal_csv(const std::string& path) {
  const io::CsvTable table = io::CsvTable::read(path);
  const std::vector<std::string> want{"time_us", "p_down", "shots"};
  if (table.header() != want) throw std::invalid_argument(path + ": expected header time_us,p_down,shots");
  Signal s;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const auto& row = table.rows()[r];
    try {
      s.push_back({std::stod(row[0]), std::stod(row[1]), std::stoi(row[2])});
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ": malformed number on data row " + std::to_string(r + 1));
    }
  }
  return s;
}

std::vector<double> fitted_signal(const PhononFit& fit, const ThermometryScan& scan, const FitPolicy& policy) {
  const Eigen::MatrixXd basis =
      cosine_basis(scan.times, scan, static_cast<int>(fit.p_n.size()), policy.model);
  const Eigen::Map<const Eigen::VectorXd> p(fit.p_n.data(), static_cast<Eigen::Index>(fit.p_n.size()));
  Eigen::VectorXd y = basis * p;
  if (policy.remainder == RemainderModel::dephased) y.array() += 0.5 * (1.0 - p.sum());
  return {y.data(), y.data() + y.size()};
}

}  // namespace qotto::thermometry
