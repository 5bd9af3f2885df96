#include "qotto/config.hpp"

#include <gtest/gtest.h>

using namespace qotto;
using namespace qotto::config;

namespace {

bool has_diagnostic(const std::vector<Diagnostic>& ds, Diagnostic::Severity sev, const std::string& field) {
  for (const auto& d : ds)
    if (d.severity == sev && d.field == field) return true;
  return false;
}

constexpr auto kError = Diagnostic::Severity::error;
constexpr auto kWarning = Diagnostic::Severity::warning;

}  // namespace

TEST(Presets, AllNamedPresetsExistAndValidate) {
  const std::vector<std::string> expected{"fig2", "fig3", "fig4", "fig5", "figS3", "figS5", "figS6", "figS7", "rwa-check"};
  auto names = preset_names();
  std::sort(names.begin(), names.end());
  auto want = expected;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(names, want);
  for (const auto& name : expected) {
    const auto c = preset(name);
    EXPECT_EQ(c.preset, name);
    EXPECT_FALSE(has_errors(validate(c))) << name << ": " << to_json(validate(c)).dump();
    EXPECT_FALSE(preset_description(name).empty());
  }
  EXPECT_THROW(preset("fig9"), ConfigError);
}

TEST(Presets, PinFigureParameters) {
  const auto fig2 = preset("fig2");
  EXPECT_NEAR(fig2.params.v0, 2 * M_PI * 0.075, 1e-12);
  EXPECT_NEAR(fig2.params.battery_freq, 2 * M_PI * 0.075, 1e-12);
  EXPECT_DOUBLE_EQ(fig2.params.tau, 119.0);
  EXPECT_EQ(fig2.sweep.cycles.back(), 28);
  EXPECT_EQ(preset("fig4").sweep.n_cycles, 15);
  EXPECT_EQ(preset("figS6").sweep.n_cycles, 1);
  EXPECT_DOUBLE_EQ(preset("figS7").params.tau, 1.0);
  const auto s6 = preset("figS6");
  EXPECT_LT(*std::min_element(s6.sweep.taus.begin(), s6.sweep.taus.end()), 0.1);
}

TEST(Parse, MegahertzKeysCarryTwoPi) {
  const auto c = parse_config(R"({"params": {"rabi_MHz": 0.5, "v0_rad_per_us": 0.25}})");
  EXPECT_NEAR(c.params.rabi, 2 * M_PI * 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(c.params.v0, 0.25);
  EXPECT_THROW(parse_config(R"({"params": {"rabi_MHz": 0.5, "rabi_rad_per_us": 3.0}})"), ConfigError);
}

TEST(Parse, PresetBaseWithOverrides) {
  const auto c = parse_config(R"({"preset": "fig4", "seed": 42, "sweep": {"n_cycles": 3}})");
  EXPECT_EQ(c.preset, "fig4");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.sweep.n_cycles, 3);
  EXPECT_EQ(c.sweep.taus, preset("fig4").sweep.taus);
}

TEST(Parse, UnknownKeysAndTypeErrorsNameTheField) {
  try {
    parse_config(R"({"params": {"rabbi_MHz": 1.0}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "params.rabbi_MHz");
  }
  try {
    parse_config(R"({"fock": {"n_max": "ten"}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "fock.n_max");
  }
  EXPECT_THROW(parse_config(R"({"seed": -3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"options": {"frame": "rotating"}})"), ConfigError);
}

TEST(Parse, SyntaxErrorsCarryLineAndColumn) {
  try {
    parse_config("{\n  \"seed\": 1,\n  \"emit\" \"csv\"\n}", "cfg.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field().rfind("cfg.json:3:", 0), 0u) << e.field();
    const auto j = e.to_json();
    EXPECT_EQ(j["error"], "config");
  }
}

TEST(Parse, EchoRoundTrips) {
  for (const auto& name : preset_names()) {
    const auto c = preset(name);
    const auto echo = to_json(c);
    const auto back = parse_config(echo.dump());
    EXPECT_EQ(to_json(back), echo) << name;
  }
}

TEST(Validate, NegativeCycleTimeIsHardError) {
  auto c = preset("fig2");
  c.params.tau = -5.0;
  EXPECT_TRUE(has_diagnostic(validate(c), kError, "params"));
  auto s = preset("fig4");
  s.sweep.taus.push_back(-1.0);
  EXPECT_TRUE(has_diagnostic(validate(s), kError, "sweep.tau_us"));
}

TEST(Validate, DecoupledBatteryWarns) {
  auto c = preset("fig2");
  c.params.eta = 0.0;
  const auto ds = validate(c);
  EXPECT_FALSE(has_errors(ds));
  EXPECT_TRUE(has_diagnostic(ds, kWarning, "params.eta"));
}

TEST(Validate, LambDickeAndTruncationHeuristics) {
  auto c = preset("fig2");
  c.params.eta = 0.2;
  EXPECT_TRUE(has_diagnostic(validate(c), kWarning, "params.eta"));
  c = preset("fig2");
  c.expected_n_bar = 6.0;
  EXPECT_TRUE(has_diagnostic(validate(c), kWarning, "fock.n_max"));
  c.expected_n_bar = 1.0;
  EXPECT_FALSE(has_diagnostic(validate(c), kWarning, "fock.n_max"));
}

TEST(Validate, StructuralErrors) {
  auto c = preset("fig2");
  c.sweep.axis = SweepSpec::Axis::tau;
  EXPECT_TRUE(has_diagnostic(validate(c), kError, "sweep.axis"));
  c = preset("figS5");
  c.thermometry.reset();
  EXPECT_TRUE(has_diagnostic(validate(c), kError, "thermometry"));
  c = preset("fig2");
  c.jobs = 0;
  EXPECT_TRUE(has_diagnostic(validate(c), kError, "jobs"));
  c = preset("fig2");
  c.fock.n_max = 2000;
  EXPECT_TRUE(has_errors(validate(c)));
}
