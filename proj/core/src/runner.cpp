#include "qotto/runner.hpp"

#include "qotto/io.hpp"
#include "qotto/seeding.hpp"
#include "qotto/version.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>

namespace qotto::runner {

using config::RunConfig;
using config::RunKind;
using nlohmann::json;

namespace {

std::string tag(bool with_cd) { return with_cd ? "sta" : "na"; }

engine::CycleOptions options_for(const RunConfig& c, bool with_cd, bool dephased) {
  engine::CycleOptions o = c.options;
  o.with_cd = with_cd;
  o.classical_baseline = dephased;
  return o;
}

void require_valid(const RunConfig& c) {
  for (const auto& d : config::validate(c))
    if (d.severity == config::Diagnostic::Severity::error) throw config::ConfigError(d.field, d.message);
}

int variant_index(const std::vector<bool>& variants, bool with_cd) {
  for (std::size_t i = 0; i < variants.size(); ++i)
    if (variants[i] == with_cd) return static_cast<int>(i);
  return -1;
}

}  // namespace

CyclesResult simulate_cycles(const RunConfig& c) {
  require_valid(c);
  CyclesResult res;
  res.cycles = c.sweep.cycles;
  const int n_max = *std::max_element(res.cycles.begin(), res.cycles.end());
  const int per_variant = c.include_dephased ? 2 : 1;
  const int tasks = static_cast<int>(c.variants.size()) * per_variant;

  auto records = parallel_map<engine::CycleRecord>(tasks, c.jobs, [&](int i) {
    const bool cd = c.variants[i / per_variant];
    const bool dephased = (i % per_variant) == 1;
    engine::Engine eng(c.fock, c.params, options_for(c, cd, dephased));
    return eng.run_cycles(engine::initial_state(c.fock), n_max);
  });
  for (std::size_t v = 0; v < c.variants.size(); ++v) {
    VariantCurve curve;
    curve.with_cd = c.variants[v];
    curve.record = records[v * per_variant];
    curve.n_bar = curve.record.n_bar;
    if (c.include_dephased) curve.n_bar_dephased = records[v * per_variant + 1].n_bar;
    res.variants.push_back(std::move(curve));
  }
  res.cost = analysis::cost_ratios(c.params, drive::DriveProfile::from(c.params));
  return res;
}

TauSweepResult simulate_tau_sweep(const RunConfig& c) {
  require_valid(c);
  TauSweepResult res;
  res.n_cycles = c.sweep.n_cycles;
  res.variants = c.variants;
  const int nv = static_cast<int>(c.variants.size());
  const int tasks = static_cast<int>(c.sweep.taus.size()) * nv;
  auto finals = parallel_map<double>(tasks, c.jobs, [&](int i) {
    drive::EngineParams p = c.params;
    p.tau = c.sweep.taus[i / nv];
    engine::Engine eng(c.fock, p, options_for(c, c.variants[i % nv], false));
    return eng.run_cycles(engine::initial_state(c.fock), res.n_cycles).n_bar.back();
  });
  for (std::size_t t = 0; t < c.sweep.taus.size(); ++t) {
    TauPoint pt;
    pt.tau = c.sweep.taus[t];
    drive::EngineParams p = c.params;
    p.tau = pt.tau;
    for (int v = 0; v < nv; ++v) {
      const double nb = finals[t * nv + v];
      pt.n_bar.push_back(nb);
      pt.power.push_back(analysis::power(nb, res.n_cycles, pt.tau, p.heating_rate_per_s, false));
      // Subtraction only applies when the heating channel was simulated.
      pt.power_subtracted.push_back(
          analysis::power(nb, res.n_cycles, pt.tau, p.heating_rate_per_s, c.options.heating));
    }
    pt.cost = analysis::cost_ratios(p, drive::DriveProfile::from(p));
    res.points.push_back(std::move(pt));
  }
  return res;
}

SigmaYResult simulate_sigma_y(const RunConfig& c) {
  require_valid(c);
  SigmaYResult res;
  res.variants = c.variants;
  res.traces = parallel_map<std::vector<engine::StrokeTrace>>(
      static_cast<int>(c.variants.size()), c.jobs, [&](int i) {
        engine::CycleOptions o = options_for(c, c.variants[i], false);
        o.record_traces = true;
        engine::Engine eng(c.fock, c.params, o);
        return eng.run_cycles(engine::initial_state(c.fock), 1).traces;
      });
  return res;
}

RwaCheckResult simulate_rwa_check(const RunConfig& c) {
  require_valid(c);
  const bool cd = c.variants.front();
  engine::CycleOptions o_rwa = options_for(c, cd, false);
  o_rwa.frame = engine::Frame::rwa;
  o_rwa.heating = false;
  engine::CycleOptions o_lab = o_rwa;
  o_lab.frame = engine::Frame::lab;
  engine::Engine rwa(c.fock, c.params, o_rwa);
  engine::Engine lab(c.fock, c.params, o_lab);

  const double half = 0.5 * c.params.tau;
  const double chunk = half / (std::max(c.options.trace_points, 2) - 1);
  std::vector<hilbert::QuantumState> states_rwa, states_lab;
  auto collect = [](std::vector<hilbert::QuantumState>& out) {
    return [&out](const hilbert::QuantumState& s, const dynamics::Chunk&) { out.push_back(s); };
  };
  const auto start = engine::initial_state(c.fock);
  states_rwa.push_back(start);
  states_lab.push_back(start);
  dynamics::apply_chunks(start, dynamics::build_chunks(rwa.hamiltonian(0), 0.0, half, c.options.step, chunk, c.options.guards),
                         std::nullopt, c.options.guards, collect(states_rwa));
  dynamics::apply_chunks(start, dynamics::build_chunks(lab.hamiltonian(0), 0.0, half, c.options.step, chunk, c.options.guards),
                         std::nullopt, c.options.guards, collect(states_lab));

  RwaCheckResult res;
  const auto& ops = rwa.terms().ops;
  for (std::size_t k = 0; k < states_rwa.size(); ++k) {
    const auto& a = states_lab[k];
    const auto& b = states_rwa[k];
    res.time_us.push_back(b.time_us);
    // Both states stay pure (no dissipation), so Tr(rho sigma) is the fidelity.
    const double f = (a.rho * b.rho).trace().real();
    res.fidelity.push_back(f);
    res.min_fidelity = std::min(res.min_fidelity, f);
    res.n_bar_lab.push_back(dynamics::expectation(a, ops.number));
    res.n_bar_rwa.push_back(dynamics::expectation(b, ops.number));
    res.up_lab.push_back(hilbert::spin_block(a, hilbert::Spin::up, hilbert::Spin::up).trace().real());
    res.up_rwa.push_back(hilbert::spin_block(b, hilbert::Spin::up, hilbert::Spin::up).trace().real());
  }
  return res;
}

ThermometryResult simulate_thermometry(const RunConfig& c) {
  require_valid(c);
  const auto& t = *c.thermometry;
  ThermometryResult res;
  res.scan = thermometry::ThermometryScan::default_grid(t.omega_bsb, t.eta.value_or(c.params.eta), t.points,
                                                        t.periods, t.shots, c.seed);
  res.source = thermometry::thermal_distribution(t.source_n_bar, t.source_levels);
  res.signal = thermometry::synthesize_signal(res.source, res.scan, t.policy.model);

  std::vector<std::pair<std::string, thermometry::FitPolicy>> plans;
  plans.emplace_back("selected", t.policy);
  for (int n : t.compare_cutoffs) {
    thermometry::FitPolicy p = t.policy;
    p.forced_n_max = n;
    char label[32];
    std::snprintf(label, sizeof(label), "n_max_%02d", n);
    plans.emplace_back(label, p);
  }
  for (std::size_t k = 0; k < plans.size(); ++k) {
    ThermometryFitEntry e;
    e.label = plans[k].first;
    e.fit = thermometry::fit_populations(res.signal, res.scan, plans[k].second);
    e.bootstrap = thermometry::bootstrap_errors(res.signal, res.scan, e.fit, plans[k].second, t.bootstrap_resamples,
                                                derive_seed(c.seed, 1000 + k), c.jobs);
    res.fits.push_back(std::move(e));
  }
  return res;
}

namespace {

// Collects files and their column documentation while a run is emitted.
class Emitter {
 public:
  Emitter(const RunConfig& c, std::string dir) : config_(c), dir_(std::move(dir)) {}

  bool csv() const { return config_.emit != config::Emit::json; }
  bool json_points() const { return config_.emit != config::Emit::csv; }

  void table(const std::string& name, const io::CsvTable& t, const std::string& description,
             const std::map<std::string, std::string>& columns) {
    t.write(path(name));
    json cols = json::array();
    for (const auto& h : t.header()) {
      auto it = columns.find(h);
      cols.push_back({{"name", h}, {"description", it == columns.end() ? describe(h) : it->second}});
    }
    schema_[name] = {{"description", description}, {"columns", cols}};
    files_.push_back(name);
  }

  void document(const std::string& name, const json& value) {
    io::write_json(path(name), value);
    files_.push_back(name);
  }

  RunOutput finish(const json& summary) {
    json schema;
    schema["conventions"] = {
        {"encoding", "UTF-8, comma separated, header row, '.' decimal separator"},
        {"angular_frequency", "rad/us; a frequency f in MHz corresponds to 2*pi*f rad/us"},
        {"time", "us"},
        {"power", "phonons per us"},
        {"empty_cell", "value undefined (e.g. ratio with a zero reference)"}};
    schema["files"] = schema_;
    io::write_json(path("schema.json"), schema);
    files_.push_back("schema.json");
    std::sort(files_.begin(), files_.end());

    json manifest;
    manifest["tool"] = "qottoctl";
    manifest["version"] = std::string(version());
    manifest["preset"] = config_.preset;
    manifest["seed"] = config_.seed;
    manifest["config"] = config::to_json(config_);
    manifest["files"] = files_;
    manifest["summary"] = summary;
    io::write_json(path("manifest.json"), manifest);
    files_.push_back("manifest.json");
    std::sort(files_.begin(), files_.end());
    return {files_, summary};
  }

 private:
  std::string path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

  static std::string describe(const std::string& col) {
    static const std::map<std::string, std::string> known{
        {"N", "number of completed engine cycles"},
        {"tau_us", "cycle time, us"},
        {"time_us", "time within the cycle, us"},
        {"n_bar_na", "mean phonon number, no counterdiabatic drive"},
        {"n_bar_sta", "mean phonon number, counterdiabatic drive"},
        {"n_bar_dephased_na", "mean phonon number with the battery dephased after every cycle, no CD drive"},
        {"n_bar_dephased_sta", "mean phonon number with the battery dephased after every cycle, CD drive"},
        {"classical_line_na", "N times the single-cycle n_bar, no CD drive"},
        {"classical_line_sta", "N times the single-cycle n_bar, CD drive"},
        {"enhancement_ratio", "(x_sta - x_na) / x_na; empty when x_na is zero"},
        {"power_na", "n_bar/(N tau), phonons per us, no CD drive"},
        {"power_sta", "n_bar/(N tau), phonons per us, CD drive"},
        {"power_subtracted_na", "(n_bar - Gamma N tau)/(N tau) when heating is simulated, else equal to power_na"},
        {"power_subtracted_sta", "(n_bar - Gamma N tau)/(N tau) when heating is simulated, else equal to power_sta"},
        {"cost_ratio_amplitude", "(1/(tau Omega)) integral |Omega_cd| dt"},
        {"cost_ratio_intensity", "(1/tau) integral (Omega_cd/Omega)^2 dt"},
        {"sigma_y_na", "<sigma_y>, no CD drive"},
        {"sigma_y_sta", "<sigma_y>, CD drive"},
        {"stroke", "expansion or compression"},
        {"p_down", "spin-down probability"},
        {"shots", "detections per point (0 = exact)"},
    };
    auto it = known.find(col);
    return it == known.end() ? col : it->second;
  }

  const RunConfig& config_;
  std::string dir_;
  json schema_ = json::object();
  std::vector<std::string> files_;
};

std::string cell(double v) { return io::format_number(v); }

std::optional<double> safe_ratio(double sta, double na) {
  if (std::abs(na) < 1e-12) return std::nullopt;
  return analysis::enhancement_ratio(sta, na);
}

std::string cell(const std::optional<double>& v) { return v ? io::format_number(*v) : std::string(); }

std::string point_name(std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "points/point_%04zu.json", i);
  return buf;
}

std::vector<std::string> metrics_header() {
  return {"preset", "N", "tau_us", "with_cd", "seed", "n_bar_final", "work", "power", "power_heating_subtracted",
          "enhancement_ratio", "cost_ratio_amplitude", "cost_ratio_intensity"};
}

std::vector<std::string> metrics_row(const analysis::Metrics& m) {
  return {m.preset, std::to_string(m.n_cycles), cell(m.tau_us), m.with_cd ? "true" : "false",
          std::to_string(m.seed), cell(m.n_bar_final), cell(m.work), cell(m.power),
          cell(m.power_heating_subtracted), cell(m.enhancement_ratio), cell(m.cost_ratio_amplitude),
          cell(m.cost_ratio_intensity)};
}

json emit_cycles(const RunConfig& c, Emitter& em) {
  const auto res = simulate_cycles(c);
  const int na = variant_index(c.variants, false), sta = variant_index(c.variants, true);

  std::vector<std::string> header{"N"};
  for (const auto& v : res.variants) {
    header.push_back("n_bar_" + tag(v.with_cd));
    header.push_back("classical_line_" + tag(v.with_cd));
    if (c.include_dephased) header.push_back("n_bar_dephased_" + tag(v.with_cd));
  }
  if (na >= 0 && sta >= 0) header.push_back("enhancement_ratio");
  io::CsvTable curve(header);
  io::CsvTable metrics(metrics_header());
  json summary;
  for (std::size_t k = 0; k < res.cycles.size(); ++k) {
    const int n = res.cycles[k];
    std::vector<std::string> row{std::to_string(n)};
    json point{{"sweep_index", k}, {"N", n}, {"records", json::array()}};
    std::optional<double> ratio;
    if (na >= 0 && sta >= 0) ratio = safe_ratio(res.variants[sta].n_bar[n - 1], res.variants[na].n_bar[n - 1]);
    for (const auto& v : res.variants) {
      const double nb = v.n_bar[n - 1];
      const double line = n * v.n_bar.front();
      row.push_back(cell(nb));
      row.push_back(cell(line));
      if (c.include_dephased) row.push_back(cell(v.n_bar_dephased[n - 1]));
      drive::EngineParams p = c.params;
      auto m = analysis::make_metrics(c.preset, p, n, v.with_cd, c.seed, nb);
      m.classical_line = {line};
      if (v.with_cd) m.enhancement_ratio = ratio;
      point["records"].push_back(m.to_json());
      metrics.add_row(metrics_row(m));
    }
    if (na >= 0 && sta >= 0) row.push_back(cell(ratio));
    curve.add_row(row);
    if (em.json_points()) em.document(point_name(k), point);
  }
  if (em.csv()) {
    em.table("n_bar_vs_cycles.csv", curve, "stroboscopic mean phonon number after N cycles", {});
    em.table("metrics.csv", metrics, "one metrics row per (N, variant)", {});
  }
  if (sta >= 0) {
    em.document("cost_ratios.json", {{"amplitude", res.cost.amplitude},
                                      {"intensity", res.cost.intensity},
                                      {"closed_form_amplitude", drive::cd_cost_closed_form(c.params, drive::DriveProfile::from(c.params))},
                                      {"reference_measured_ratio", 0.026}});
  }
  for (const auto& v : res.variants) {
    summary[tag(v.with_cd)] = {{"n_bar_final", v.n_bar.back()},
                               {"max_trace_deviation", v.record.max_trace_deviation},
                               {"min_eigenvalue", v.record.min_eigenvalue},
                               {"max_top_level_population", v.record.max_top_level}};
  }
  return summary;
}

json emit_tau_sweep(const RunConfig& c, Emitter& em) {
  const auto res = simulate_tau_sweep(c);
  const int na = variant_index(c.variants, false), sta = variant_index(c.variants, true);
  std::vector<std::string> header{"tau_us"};
  for (bool v : res.variants) header.push_back("n_bar_" + tag(v));
  for (bool v : res.variants) header.push_back("power_" + tag(v));
  for (bool v : res.variants) header.push_back("power_subtracted_" + tag(v));
  if (na >= 0 && sta >= 0) header.push_back("enhancement_ratio");
  header.push_back("cost_ratio_amplitude");
  header.push_back("cost_ratio_intensity");
  io::CsvTable curve(header);
  io::CsvTable metrics(metrics_header());
  json summary = json::array();
  for (std::size_t k = 0; k < res.points.size(); ++k) {
    const auto& pt = res.points[k];
    std::vector<std::string> row{cell(pt.tau)};
    for (double x : pt.n_bar) row.push_back(cell(x));
    for (double x : pt.power) row.push_back(cell(x));
    for (double x : pt.power_subtracted) row.push_back(cell(x));
    std::optional<double> ratio;
    if (na >= 0 && sta >= 0) {
      ratio = safe_ratio(pt.power_subtracted[sta], pt.power_subtracted[na]);
      row.push_back(cell(ratio));
    }
    row.push_back(cell(pt.cost.amplitude));
    row.push_back(cell(pt.cost.intensity));
    curve.add_row(row);

    json point{{"sweep_index", k}, {"tau_us", pt.tau}, {"records", json::array()}};
    for (std::size_t v = 0; v < res.variants.size(); ++v) {
      drive::EngineParams p = c.params;
      p.tau = pt.tau;
      auto m = analysis::make_metrics(c.preset, p, res.n_cycles, res.variants[v], c.seed, pt.n_bar[v]);
      m.power_heating_subtracted = pt.power_subtracted[v];
      if (res.variants[v]) m.enhancement_ratio = ratio;
      point["records"].push_back(m.to_json());
      metrics.add_row(metrics_row(m));
    }
    if (em.json_points()) em.document(point_name(k), point);
    summary.push_back({{"tau_us", pt.tau}, {"power_subtracted", pt.power_subtracted}});
  }
  if (em.csv()) {
    em.table("power_vs_tau.csv", curve, "power after a fixed number of cycles versus cycle time", {});
    em.table("metrics.csv", metrics, "one metrics row per (tau, variant)", {});
  }
  return {{"n_cycles", res.n_cycles}, {"points", summary}};
}

json emit_cd_profile(const RunConfig& c, Emitter& em) {
  const auto profile = drive::DriveProfile::from(c.params);
  io::CsvTable t({"time_us", "v_rad_per_us", "omega_cd_rad_per_us", "cd_to_carrier_ratio"});
  const int samples = 1001;
  for (int i = 0; i < samples; ++i) {
    const double time = c.params.tau * i / (samples - 1);
    const auto d = drive::detuning(profile, time);
    const double cd = drive::omega_cd(c.params, profile, time);
    t.add_numeric_row({time, d.v, cd, std::abs(cd) / c.params.rabi});
  }
  if (em.csv())
    em.table("cd_profile.csv", t, "counterdiabatic amplitude over one cycle",
             {{"v_rad_per_us", "detuning v(t), rad/us"},
              {"omega_cd_rad_per_us", "signed counterdiabatic amplitude, rad/us"},
              {"cd_to_carrier_ratio", "|Omega_cd| / Omega"}});
  const auto cost = analysis::cost_ratios(c.params, profile);
  json summary{{"amplitude", cost.amplitude},
               {"intensity", cost.intensity},
               {"closed_form_amplitude", drive::cd_cost_closed_form(c.params, profile)},
               {"reference_measured_ratio", 0.026}};
  em.document("cost_ratios.json", summary);
  return summary;
}

json emit_thermometry(const RunConfig& c, Emitter& em) {
  const auto res = simulate_thermometry(c);
  json summary = json::object();
  std::vector<std::string> header{"time_us", "p_down"};
  for (const auto& f : res.fits) header.push_back("model_" + f.label);
  io::CsvTable curves(header);
  std::vector<std::vector<double>> models;
  for (const auto& f : res.fits) models.push_back(thermometry::fitted_signal(f.fit, res.scan, c.thermometry->policy));
  for (std::size_t i = 0; i < res.signal.size(); ++i) {
    std::vector<double> row{res.signal[i].time_us, res.signal[i].p_down};
    for (const auto& m : models) row.push_back(m[i]);
    curves.add_numeric_row(row);
  }

  int levels = 0;
  for (const auto& f : res.fits) levels = std::max(levels, f.fit.n_max + 1);
  std::vector<std::string> pheader{"n", "p_source"};
  for (const auto& f : res.fits) {
    pheader.push_back("p_" + f.label);
    pheader.push_back("sigma_" + f.label);
  }
  io::CsvTable pops(pheader);
  for (int n = 0; n < levels; ++n) {
    std::vector<std::string> row{std::to_string(n), cell(n < static_cast<int>(res.source.size()) ? res.source[n] : 0.0)};
    for (const auto& f : res.fits) {
      const bool in = n <= f.fit.n_max;
      row.push_back(in ? cell(f.fit.p_n[n]) : std::string());
      row.push_back(in ? cell(f.fit.sigma_p_n[n]) : std::string());
    }
    pops.add_row(row);
  }

  if (em.csv()) {
    io::CsvTable sig({"time_us", "p_down", "shots"});
    for (const auto& pt : res.signal) sig.add_row({cell(pt.time_us), cell(pt.p_down), std::to_string(pt.shots)});
    em.table("signal.csv", sig, "synthetic blue-sideband scan",
             {{"time_us", "probe duration, us"}, {"p_down", "measured spin-down fraction"}});
    em.table("fit_curves.csv", curves, "scan data and fitted model curves", {});
    em.table("populations.csv", pops, "source and fitted Fock populations (empty above a fit's cutoff)", {});
  }
  for (std::size_t k = 0; k < res.fits.size(); ++k) {
    const auto& f = res.fits[k];
    json j = thermometry::to_json(f.fit);
    if (f.bootstrap) j["bootstrap"] = thermometry::to_json(*f.bootstrap);
    em.document("fit_" + f.label + ".json", j);
    summary[f.label] = {{"n_max", f.fit.n_max},
                        {"n_bar", f.fit.n_bar},
                        {"n_bar_error", f.fit.n_bar_error},
                        {"total_occupation", f.fit.total_occupation},
                        {"bootstrap_n_bar_error", f.bootstrap ? f.bootstrap->sigma_n_bar : 0.0}};
  }
  summary["source_n_bar"] = c.thermometry->source_n_bar;
  return summary;
}

json emit_sigma_y(const RunConfig& c, Emitter& em) {
  const auto res = simulate_sigma_y(c);
  std::vector<std::string> header{"stroke", "time_us"};
  for (bool v : res.variants) header.push_back("sigma_y_" + tag(v));
  io::CsvTable t(header);
  json summary = json::object();
  for (std::size_t s = 0; s < 2; ++s) {
    const auto& ref = res.traces.front()[s];
    for (std::size_t i = 0; i < ref.time_us.size(); ++i) {
      std::vector<std::string> row{std::string(drive::to_string(ref.stroke)), cell(ref.time_us[i])};
      for (const auto& tr : res.traces) row.push_back(cell(tr[s].sigma_y[i]));
      t.add_row(row);
    }
  }
  for (std::size_t v = 0; v < res.variants.size(); ++v) {
    json per = json::object();
    for (const auto& tr : res.traces[v]) {
      const auto s = analysis::sigma_y_summary(tr);
      per[std::string(drive::to_string(tr.stroke))] = {
          {"start_value", s.start_value}, {"end_of_stroke_value", s.end_of_stroke_value}, {"max_abs", s.max_abs}};
    }
    summary[tag(res.variants[v])] = per;
  }
  if (em.csv()) em.table("sigma_y_traces.csv", t, "<sigma_y> along the expansion and compression strokes", {});
  em.document("sigma_y_summary.json", summary);
  return summary;
}

json emit_rwa_check(const RunConfig& c, Emitter& em) {
  const auto res = simulate_rwa_check(c);
  io::CsvTable t({"time_us", "fidelity", "n_bar_lab", "n_bar_rwa", "p_up_lab", "p_up_rwa"});
  for (std::size_t i = 0; i < res.time_us.size(); ++i)
    t.add_numeric_row({res.time_us[i], res.fidelity[i], res.n_bar_lab[i], res.n_bar_rwa[i], res.up_lab[i], res.up_rwa[i]});
  if (em.csv())
    em.table("fidelity_vs_time.csv", t, "state fidelity of lab-frame and interaction-frame propagation",
             {{"fidelity", "Tr(rho_lab rho_rwa) for the two pure states"},
              {"n_bar_lab", "mean phonon number, lab-frame propagation"},
              {"n_bar_rwa", "mean phonon number, interaction-frame propagation"},
              {"p_up_lab", "spin-up population, lab frame"},
              {"p_up_rwa", "spin-up population, interaction frame"}});
  json summary{{"min_fidelity", res.min_fidelity}, {"final_fidelity", res.fidelity.back()}};
  em.document("rwa_summary.json", summary);
  return summary;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunOutput run(const RunConfig& config, const std::string& out_dir) {
  require_valid(config);
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  RunConfig c = config;
  c.output = out_dir;
  Emitter em(c, out_dir);
  json summary;
  switch (c.kind) {
    case RunKind::cycles: summary = emit_cycles(c, em); break;
    case RunKind::tau_sweep: summary = emit_tau_sweep(c, em); break;
    case RunKind::cd_profile: summary = emit_cd_profile(c, em); break;
    case RunKind::thermometry: summary = emit_thermometry(c, em); break;
    case RunKind::sigma_y: summary = emit_sigma_y(c, em); break;
    case RunKind::rwa_check: summary = emit_rwa_check(c, em); break;
  }
  RunOutput out = em.finish(summary);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::write_json((std::filesystem::path(out_dir) / "run_info.json").string(),
                 {{"started_utc", started}, {"finished_utc", utc_now()}, {"wall_seconds", wall}, {"jobs", c.jobs}});
  return out;
}

}  // namespace qotto::runner
