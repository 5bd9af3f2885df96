#include "qotto/config.hpp"

#include "qotto/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qotto::config {

using nlohmann::json;

ConfigError::ConfigError(const std::string& field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message), field_(field) {}

json ConfigError::to_json() const {
  return {{"error", "config"}, {"field", field_}, {"message", what()}};
}

RunKind parse_kind(std::string_view name) {
  if (name == "cycles") return RunKind::cycles;
  if (name == "tau_sweep") return RunKind::tau_sweep;
  if (name == "cd_profile") return RunKind::cd_profile;
  if (name == "thermometry") return RunKind::thermometry;
  if (name == "sigma_y") return RunKind::sigma_y;
  if (name == "rwa_check") return RunKind::rwa_check;
  throw std::invalid_argument("unknown run kind '" + std::string(name) + "'");
}

std::string_view to_string(RunKind kind) {
  switch (kind) {
    case RunKind::cycles: return "cycles";
    case RunKind::tau_sweep: return "tau_sweep";
    case RunKind::cd_profile: return "cd_profile";
    case RunKind::thermometry: return "thermometry";
    case RunKind::sigma_y: return "sigma_y";
    case RunKind::rwa_check: return "rwa_check";
  }
  return "?";
}

Emit parse_emit(std::string_view name) {
  if (name == "csv") return Emit::csv;
  if (name == "json") return Emit::json;
  if (name == "both") return Emit::both;
  throw std::invalid_argument("unknown emit mode '" + std::string(name) + "'");
}

std::string_view to_string(Emit e) {
  switch (e) {
    case Emit::csv: return "csv";
    case Emit::json: return "json";
    case Emit::both: return "both";
  }
  return "?";
}

namespace {

// Walks one JSON object, remembering its path for error messages and
// rejecting keys nobody consumed.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return obj_.contains(key); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) throw ConfigError(at(key), "expected a number");
      out = v->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_integer()) throw ConfigError(at(key), "expected an integer");
      out = v->get<int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean()) throw ConfigError(at(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) throw ConfigError(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  template <class Enum, class Parser>
  void choice(const std::string& key, Enum& out, Parser parse) {
    std::string name;
    if (!has(key)) {
      get(key);
      return;
    }
    text(key, name);
    try {
      out = parse(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(at(key), e.what());
    }
  }

  // Angular frequency from "<base>_MHz" (x 2 pi) or "<base>_rad_per_us".
  void frequency(const std::string& base, double& out) {
    const std::string mhz = base + "_MHz", rad = base + "_rad_per_us";
    const bool a = has(mhz), b = has(rad);
    if (a && b) throw ConfigError(at(base), "give either " + mhz + " or " + rad + ", not both");
    double v = out;
    if (a) {
      number(mhz, v);
      out = drive::kTwoPi * v;
    } else {
      get(mhz);
    }
    if (b) number(rad, out);
    else get(rad);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_params(Reader r, drive::EngineParams& p) {
  r.frequency("rabi", p.rabi);
  r.frequency("v0", p.v0);
  r.frequency("battery_freq", p.battery_freq);
  r.frequency("trap_freq", p.trap_freq);
  r.number("tau_us", p.tau);
  r.number("eta", p.eta);
  r.number("heating_rate_per_s", p.heating_rate_per_s);
  r.finish();
}

void read_step(Reader r, dynamics::StepPolicy& s) {
  r.number("dt_max_us", s.dt_max);
  r.integer("substeps_per_fastest_period", s.substeps_per_fastest_period);
  r.choice("method", s.method, dynamics::parse_method);
  r.number("dissipation_chunk_us", s.dissipation_chunk);
  r.finish();
}

void read_options(Reader r, engine::CycleOptions& o) {
  r.choice("reset", o.reset, engine::parse_reset);
  r.choice("coupling_phase", o.coupling_phase, engine::parse_coupling_phase);
  r.choice("frame", o.frame, engine::parse_frame);
  r.boolean("heating", o.heating);
  r.boolean("classical_baseline", o.classical_baseline);
  r.boolean("record_traces", o.record_traces);
  r.integer("trace_points", o.trace_points);
  r.number("leakage_tolerance", o.guards.leakage_tolerance);
  if (const json* s = r.get("step")) read_step(Reader(*s, r.at("step")), o.step);
  r.finish();
}

void read_sweep(Reader r, SweepSpec& s) {
  std::string axis;
  if (r.has("axis")) {
    r.text("axis", axis);
    if (axis == "none") s.axis = SweepSpec::Axis::none;
    else if (axis == "cycles") s.axis = SweepSpec::Axis::cycles;
    else if (axis == "tau") s.axis = SweepSpec::Axis::tau;
    else throw ConfigError(r.at("axis"), "expected none, cycles, or tau");
  } else {
    r.get("axis");
  }
  if (const json* c = r.get("cycles")) {
    if (!c->is_array()) throw ConfigError(r.at("cycles"), "expected an array of integers");
    s.cycles.clear();
    for (const auto& v : *c) {
      if (!v.is_number_integer()) throw ConfigError(r.at("cycles"), "expected an array of integers");
      s.cycles.push_back(v.get<int>());
    }
  }
  if (const json* t = r.get("tau_us")) {
    if (!t->is_array()) throw ConfigError(r.at("tau_us"), "expected an array of numbers");
    s.taus.clear();
    for (const auto& v : *t) {
      if (!v.is_number()) throw ConfigError(r.at("tau_us"), "expected an array of numbers");
      s.taus.push_back(v.get<double>());
    }
  }
  r.integer("n_cycles", s.n_cycles);
  r.finish();
}

void read_policy(Reader r, thermometry::FitPolicy& p) {
  r.number("occupation_floor", p.occupation_floor);
  r.integer("min_n_max", p.min_n_max);
  r.integer("n_max_ceiling", p.n_max_ceiling);
  for (const char* key : {"forced_n_max", "tail_n0"}) {
    auto& slot = std::string(key) == "forced_n_max" ? p.forced_n_max : p.tail_n0;
    if (const json* v = r.get(key)) {
      if (v->is_null()) slot.reset();
      else if (v->is_number_integer()) slot = v->get<int>();
      else throw ConfigError(r.at(key), "expected an integer or null");
    }
  }
  r.choice("remainder", p.remainder, thermometry::parse_remainder_model);
  r.choice("model", p.model, thermometry::parse_rabi_model);
  r.finish();
}

void read_thermometry(Reader r, ThermometryConfig& t) {
  r.frequency("omega_bsb", t.omega_bsb);
  if (const json* e = r.get("eta")) {
    if (e->is_null()) t.eta.reset();
    else if (e->is_number()) t.eta = e->get<double>();
    else throw ConfigError(r.at("eta"), "expected a number or null");
  }
  r.integer("points", t.points);
  r.number("periods", t.periods);
  r.integer("shots", t.shots);
  r.number("source_n_bar", t.source_n_bar);
  r.integer("source_levels", t.source_levels);
  if (const json* p = r.get("policy")) read_policy(Reader(*p, r.at("policy")), t.policy);
  if (const json* c = r.get("compare_cutoffs")) {
    if (!c->is_array()) throw ConfigError(r.at("compare_cutoffs"), "expected an array of integers");
    t.compare_cutoffs.clear();
    for (const auto& v : *c) {
      if (!v.is_number_integer()) throw ConfigError(r.at("compare_cutoffs"), "expected an array of integers");
      t.compare_cutoffs.push_back(v.get<int>());
    }
  }
  r.integer("bootstrap_resamples", t.bootstrap_resamples);
  r.finish();
}

std::pair<int, int> line_and_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

void apply_overrides(RunConfig& c, const json& doc) {
  Reader r(doc, "");
  r.get("preset");  // consumed by parse_config
  r.choice("kind", c.kind, parse_kind);
  if (const json* s = r.get("seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
      throw ConfigError("seed", "expected a non-negative integer");
    c.seed = s->get<std::uint64_t>();
  }
  r.text("output", c.output);
  r.choice("emit", c.emit, parse_emit);
  r.integer("jobs", c.jobs);
  if (const json* p = r.get("params")) read_params(Reader(*p, "params"), c.params);
  if (const json* f = r.get("fock")) {
    Reader fr(*f, "fock");
    fr.integer("n_max", c.fock.n_max);
    fr.integer("guard_levels", c.fock.guard_levels);
    fr.integer("max_dimension", c.max_dimension);
    fr.finish();
  }
  if (const json* o = r.get("options")) read_options(Reader(*o, "options"), c.options);
  if (const json* v = r.get("variants")) {
    if (!v->is_array() || v->empty()) throw ConfigError("variants", "expected a non-empty array of \"na\"/\"sta\"");
    c.variants.clear();
    for (const auto& x : *v) {
      if (x == "na") c.variants.push_back(false);
      else if (x == "sta") c.variants.push_back(true);
      else throw ConfigError("variants", "expected \"na\" or \"sta\"");
    }
  }
  r.boolean("include_dephased", c.include_dephased);
  if (const json* s = r.get("sweep")) read_sweep(Reader(*s, "sweep"), c.sweep);
  if (const json* t = r.get("thermometry")) {
    if (t->is_null()) {
      c.thermometry.reset();
    } else {
      if (!c.thermometry) c.thermometry.emplace();
      read_thermometry(Reader(*t, "thermometry"), *c.thermometry);
    }
  }
  if (const json* e = r.get("expected_n_bar")) {
    if (e->is_null()) c.expected_n_bar.reset();
    else if (e->is_number()) c.expected_n_bar = e->get<double>();
    else throw ConfigError("expected_n_bar", "expected a number or null");
  }
  r.finish();
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col), "JSON parse error");
  }
  if (!doc.is_object()) throw ConfigError(source, "top level must be an object");
  RunConfig c;
  if (auto it = doc.find("preset"); it != doc.end()) {
    if (!it->is_string()) throw ConfigError("preset", "expected a preset name");
    c = preset(it->get<std::string>());
  }
  apply_overrides(c, doc);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

json to_json(const RunConfig& c) {
  const auto& p = c.params;
  const auto& o = c.options;
  json j;
  j["preset"] = c.preset;
  j["kind"] = to_string(c.kind);
  j["seed"] = c.seed;
  j["emit"] = to_string(c.emit);
  j["params"] = {{"rabi_rad_per_us", p.rabi},
                 {"v0_rad_per_us", p.v0},
                 {"battery_freq_rad_per_us", p.battery_freq},
                 {"trap_freq_rad_per_us", p.trap_freq},
                 {"tau_us", p.tau},
                 {"eta", p.eta},
                 {"heating_rate_per_s", p.heating_rate_per_s}};
  j["fock"] = {{"n_max", c.fock.n_max}, {"guard_levels", c.fock.guard_levels}, {"max_dimension", c.max_dimension}};
  j["options"] = {{"reset", engine::to_string(o.reset)},
                  {"coupling_phase", engine::to_string(o.coupling_phase)},
                  {"frame", engine::to_string(o.frame)},
                  {"heating", o.heating},
                  {"classical_baseline", o.classical_baseline},
                  {"record_traces", o.record_traces},
                  {"trace_points", o.trace_points},
                  {"leakage_tolerance", o.guards.leakage_tolerance},
                  {"step",
                   {{"dt_max_us", o.step.dt_max},
                    {"substeps_per_fastest_period", o.step.substeps_per_fastest_period},
                    {"method", dynamics::to_string(o.step.method)},
                    {"dissipation_chunk_us", o.step.dissipation_chunk}}}};
  json variants = json::array();
  for (bool cd : c.variants) variants.push_back(cd ? "sta" : "na");
  j["variants"] = variants;
  j["include_dephased"] = c.include_dephased;
  static const char* axes[] = {"none", "cycles", "tau"};
  j["sweep"] = {{"axis", axes[static_cast<int>(c.sweep.axis)]},
                {"cycles", c.sweep.cycles},
                {"tau_us", c.sweep.taus},
                {"n_cycles", c.sweep.n_cycles}};
  if (c.thermometry) {
    const auto& t = *c.thermometry;
    j["thermometry"] = {{"omega_bsb_rad_per_us", t.omega_bsb},
                        {"eta", t.eta ? json(*t.eta) : json(nullptr)},
                        {"points", t.points},
                        {"periods", t.periods},
                        {"shots", t.shots},
                        {"source_n_bar", t.source_n_bar},
                        {"source_levels", t.source_levels},
                        {"policy",
                         {{"occupation_floor", t.policy.occupation_floor},
                          {"min_n_max", t.policy.min_n_max},
                          {"n_max_ceiling", t.policy.n_max_ceiling},
                          {"forced_n_max", t.policy.forced_n_max ? json(*t.policy.forced_n_max) : json(nullptr)},
                          {"tail_n0", t.policy.tail_n0 ? json(*t.policy.tail_n0) : json(nullptr)},
                          {"remainder", thermometry::to_string(t.policy.remainder)},
                          {"model", thermometry::to_string(t.policy.model)}}},
                        {"compare_cutoffs", t.compare_cutoffs},
                        {"bootstrap_resamples", t.bootstrap_resamples}};
  } else {
    j["thermometry"] = nullptr;
  }
  j["expected_n_bar"] = c.expected_n_bar ? json(*c.expected_n_bar) : json(nullptr);
  return j;
}

json to_json(const std::vector<Diagnostic>& diagnostics) {
  json arr = json::array();
  for (const auto& d : diagnostics)
    arr.push_back({{"severity", d.severity == Diagnostic::Severity::error ? "error" : "warning"},
                   {"field", d.field},
                   {"message", d.message}});
  return arr;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    if (d.severity == Diagnostic::Severity::error) return true;
  return false;
}

std::vector<Diagnostic> validate(const RunConfig& c) {
  std::vector<Diagnostic> out;
  auto error = [&out](std::string field, std::string msg) {
    out.push_back({Diagnostic::Severity::error, std::move(field), std::move(msg)});
  };
  auto warn = [&out](std::string field, std::string msg) {
    out.push_back({Diagnostic::Severity::warning, std::move(field), std::move(msg)});
  };
  auto guarded = [&](const std::string& field, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      error(field, e.what());
    }
  };

  guarded("params", [&] { c.params.validate(); });
  guarded("fock", [&] { c.fock.validate(c.max_dimension); });
  guarded("options", [&] { c.options.validate(); });
  if (c.jobs < 1) error("jobs", "must be >= 1");
  if (c.variants.empty()) error("variants", "at least one variant is required");

  const auto& p = c.params;
  if (p.eta == 0.0) warn("params.eta", "eta = 0: the battery is decoupled from the spin and gains no energy");
  const double ld = p.eta * p.eta * (2.0 * c.fock.n_max + 1.0);
  if (ld > 0.1)
    warn("params.eta", "Lamb-Dicke validity: eta^2 (2 n_max + 1) = " + io::format_number(ld) + " exceeds 0.1");
  if (c.expected_n_bar && c.fock.n_max < 3.0 * *c.expected_n_bar)
    warn("fock.n_max", "n_max = " + std::to_string(c.fock.n_max) + " is below 3x the expected n_bar " +
                           io::format_number(*c.expected_n_bar) + "; truncation leakage is likely");

  const auto& s = c.sweep;
  switch (c.kind) {
    case RunKind::cycles:
      if (s.axis != SweepSpec::Axis::cycles) error("sweep.axis", "a cycles run needs axis = cycles");
      if (s.cycles.empty()) error("sweep.cycles", "empty cycle list");
      for (int n : s.cycles)
        if (n < 1) error("sweep.cycles", "cycle counts must be >= 1");
      break;
    case RunKind::tau_sweep:
      if (s.axis != SweepSpec::Axis::tau) error("sweep.axis", "a tau sweep needs axis = tau");
      if (s.taus.empty()) error("sweep.tau_us", "empty tau list");
      for (double t : s.taus)
        if (!(t > 0.0)) error("sweep.tau_us", "tau values must be > 0, got " + io::format_number(t));
      if (s.n_cycles < 1) error("sweep.n_cycles", "must be >= 1");
      break;
    default:
      if (s.axis != SweepSpec::Axis::none) error("sweep.axis", "this run kind takes no sweep axis");
      break;
  }
  if (c.kind == RunKind::thermometry) {
    if (!c.thermometry) {
      error("thermometry", "a thermometry run needs a thermometry section");
    } else {
      const auto& t = *c.thermometry;
      const double eta = t.eta.value_or(p.eta);
      if (!(t.omega_bsb > 0.0)) error("thermometry.omega_bsb", "must be > 0");
      if (!(eta > 0.0 && eta < 1.0)) error("thermometry.eta", "must lie in (0, 1)");
      if (t.points < 2) error("thermometry.points", "must be >= 2");
      if (!(t.periods > 0.0)) error("thermometry.periods", "must be > 0");
      if (t.shots < 1) error("thermometry.shots", "must be >= 1");
      if (!(t.source_n_bar >= 0.0)) error("thermometry.source_n_bar", "must be >= 0");
      if (t.source_levels < 1) error("thermometry.source_levels", "must be >= 1");
      if (t.bootstrap_resamples < 2) error("thermometry.bootstrap_resamples", "must be >= 2");
      guarded("thermometry.policy", [&] { t.policy.validate(); });
      for (int n : t.compare_cutoffs)
        if (n < 0 || 2 * (n + 1) > t.points)
          error("thermometry.compare_cutoffs", "cutoff " + std::to_string(n) + " needs at least " +
                                                   std::to_string(2 * (n + 1)) + " time points");
    }
  }

  // The CD tone is specified to stay below 10 Omega; short cycles exceed it.
  bool any_cd = false;
  for (bool v : c.variants) any_cd = any_cd || v;
  if (any_cd) {
    std::vector<double> taus = c.kind == RunKind::tau_sweep ? s.taus : std::vector<double>{p.tau};
    for (double t : taus) {
      if (!(t > 0.0)) continue;
      const double peak = 1.5 * p.v0 / (0.5 * t) / p.rabi;  // |v_dot|max / Omega bounds |Omega_cd|
      if (peak > 10.0 * p.rabi) {
        warn("sweep.tau_us", "counterdiabatic amplitude may exceed 10 Omega at tau = " + io::format_number(t) + " us");
        break;
      }
    }
  }
  return out;
}

}  // namespace qotto::config
