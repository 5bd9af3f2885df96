#include "qotto/config.hpp"

#include <cmath>
#include <map>

namespace qotto::config {

namespace {

using drive::kTwoPi;

struct Entry {
  std::string description;
  RunConfig (*make)();
};

RunConfig base(const std::string& name, RunKind kind) {
  RunConfig c;
  c.preset = name;
  c.kind = kind;
  c.output = "out/" + name;
  return c;
}

std::vector<int> one_to(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1;
  return v;
}

std::vector<double> linear(double from, double to, double step) {
  std::vector<double> v;
  const int n = static_cast<int>(std::lround((to - from) / step));
  for (int i = 0; i <= n; ++i) v.push_back(from + i * step);
  return v;
}

RunConfig fig2() {
  RunConfig c = base("fig2", RunKind::cycles);
  c.fock = {15, 5};
  c.include_dephased = true;
  c.sweep = {SweepSpec::Axis::cycles, one_to(28), {}, 1};
  c.expected_n_bar = 0.6;
  return c;
}

RunConfig fig3() {
  RunConfig c = fig2();
  c.preset = "fig3";
  c.output = "out/fig3";
  c.include_dephased = false;
  return c;
}

RunConfig tau_sweep(const std::string& name, std::vector<double> taus, int n_cycles) {
  RunConfig c = base(name, RunKind::tau_sweep);
  c.fock = {15, 5};
  c.options.heating = true;
  c.sweep = {SweepSpec::Axis::tau, {}, std::move(taus), n_cycles};
  c.expected_n_bar = 1.0;
  return c;
}

RunConfig fig4() { return tau_sweep("fig4", linear(100.0, 120.0, 2.0), 15); }
RunConfig fig5() { return tau_sweep("fig5", linear(102.0, 112.0, 1.0), 15); }

RunConfig figS3() {
  RunConfig c = base("figS3", RunKind::cd_profile);
  c.variants = {true};
  c.fock = {1, 0};
  return c;
}

RunConfig figS5() {
  RunConfig c = base("figS5", RunKind::thermometry);
  c.variants = {false};
  c.fock = {30, 0};
  c.thermometry.emplace();
  c.expected_n_bar = 2.9;
  return c;
}

RunConfig figS6() {
  RunConfig c = base("figS6", RunKind::tau_sweep);
  c.params.trap_freq = kTwoPi * 2.0423;
  c.options.frame = engine::Frame::lab;
  c.fock = {6, 5};
  c.sweep = {SweepSpec::Axis::tau, {}, {0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}, 1};
  c.expected_n_bar = 0.05;
  return c;
}

RunConfig figS7() {
  RunConfig c = base("figS7", RunKind::sigma_y);
  c.params.trap_freq = kTwoPi * 2.0423;
  c.params.tau = 1.0;
  c.options.frame = engine::Frame::lab;
  c.options.record_traces = true;
  c.options.trace_points = 201;
  c.fock = {6, 5};
  return c;
}

RunConfig rwa_check() {
  RunConfig c = base("rwa-check", RunKind::rwa_check);
  c.params.tau = 10.0;
  c.variants = {false};
  c.fock = {8, 5};
  c.options.trace_points = 201;
  return c;
}

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r{
      {"fig2", {"n_bar after N = 1..28 cycles with and without counterdiabatic driving, classical lines", fig2}},
      {"fig3", {"relative STA gain in n_bar versus N with the counterdiabatic cost ratios", fig3}},
      {"fig4", {"heating-subtracted power at N = 15 over tau = 100..120 us", fig4}},
      {"fig5", {"relative STA power gain at N = 15 over tau = 102..112 us", fig5}},
      {"figS3", {"counterdiabatic to carrier amplitude ratio over one cycle", figS3}},
      {"figS5", {"synthetic sideband scan of an n_bar = 2.9 state and population fits", figS5}},
      {"figS6", {"single-cycle power versus log-spaced tau in the lab frame", figS6}},
      {"figS7", {"<sigma_y> along both strokes at tau = 1 us", figS7}},
      {"rwa-check", {"fidelity of lab-frame and interaction-frame propagation over one stroke", rwa_check}},
  };
  return r;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

std::string preset_description(const std::string& name) {
  const auto& r = registry();
  auto it = r.find(name);
  if (it == r.end()) throw ConfigError("preset", "unknown preset '" + name + "'");
  return it->second.description;
}

RunConfig preset(const std::string& name) {
  const auto& r = registry();
  auto it = r.find(name);
  if (it == r.end()) throw ConfigError("preset", "unknown preset '" + name + "'");
  return it->second.make();
}

}  // namespace qotto::config
