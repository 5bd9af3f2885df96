#include "qotto/analysis.hpp"
#include "qotto/io.hpp"

#include <gtest/gtest.h>

using namespace qotto;
using namespace qotto::analysis;

TEST(Power, HeatingSubtractionIdentity) {
  const double gamma = 240.0, tau = 119.0;
  const int n = 15;
  const double pure_heating = gamma * 1e-6 * n * tau;
  EXPECT_NEAR(power(pure_heating, n, tau, gamma, true), 0.0, 1e-15);
  EXPECT_NEAR(power(pure_heating, n, tau, gamma, false), gamma * 1e-6, 1e-15);
  EXPECT_DOUBLE_EQ(power(0.3, 2, 10.0, gamma, false), 0.015);
  EXPECT_THROW(power(0.1, 0, 10.0, gamma, false), std::invalid_argument);
  EXPECT_THROW(power(0.1, 1, 0.0, gamma, false), std::invalid_argument);
}

TEST(EnhancementRatio, DefinitionAndZeroReference) {
  EXPECT_NEAR(enhancement_ratio(1.2, 1.0), 0.2, 1e-15);
  EXPECT_NEAR(enhancement_ratio(0.5, 2.0), -0.75, 1e-15);
  EXPECT_THROW(enhancement_ratio(1.0, 0.0), std::domain_error);
}

TEST(ClassicalLine, IsLinearInCycles) {
  const std::vector<int> cycles{1, 2, 5, 28};
  const auto line = classical_line(0.04, cycles);
  ASSERT_EQ(line.size(), 4u);
  EXPECT_DOUBLE_EQ(line[3], 28 * 0.04);
}

TEST(CostRatios, IntensityAgainstDirectSum) {
  drive::EngineParams p;
  const auto prof = drive::DriveProfile::from(p);
  const auto c = cost_ratios(p, prof, 4000);
  double acc = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double t = (i + 0.5) * p.tau / m;
    const double r = drive::omega_cd(p, prof, t) / p.rabi;
    acc += r * r;
  }
  EXPECT_NEAR(c.intensity / (acc / m), 1.0, 1e-6);
  EXPECT_NEAR(c.amplitude, drive::cd_cost_closed_form(p, prof), 1e-12);
}

TEST(SigmaYSummary, ReportsEndpointsAndPeak) {
  engine::StrokeTrace trace;
  trace.time_us = {0.0, 1.0, 2.0};
  trace.sigma_y = {0.0, -0.7, 0.4};
  const auto s = sigma_y_summary(trace);
  EXPECT_EQ(s.start_value, 0.0);
  EXPECT_EQ(s.end_of_stroke_value, 0.4);
  EXPECT_EQ(s.max_abs, 0.7);
  EXPECT_THROW(sigma_y_summary(engine::StrokeTrace{}), std::invalid_argument);
}

TEST(Metrics, RecordCarriesKeyAndDerivedQuantities) {
  drive::EngineParams p;
  const auto m = make_metrics("fig4", p, 15, true, 7, 0.9);
  EXPECT_NEAR(m.work, 0.9 * p.battery_freq, 1e-15);
  EXPECT_NEAR(m.power, 0.9 / (15 * p.tau), 1e-15);
  EXPECT_GT(m.cost_ratio_amplitude, 0.0);
  const auto j = m.to_json();
  for (const char* key : {"preset", "N", "tau_us", "with_cd", "seed", "n_bar_final", "work", "power",
                          "power_heating_subtracted", "enhancement_ratio", "cost_ratio_amplitude"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["enhancement_ratio"].is_null());
  EXPECT_EQ(make_metrics("fig4", p, 15, false, 7, 0.9).cost_ratio_amplitude, 0.0);
}

TEST(NumberFormat, ShortestRoundTrip) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(-0.0), "0");
  EXPECT_EQ(io::format_number(1e-20), "1e-20");
  const double x = 0.1234567890123456789;
  EXPECT_EQ(std::stod(io::format_number(x)), x);
}

TEST(Csv, WritesHeaderAndRows) {
  io::CsvTable t({"a", "b"});
  t.add_numeric_row({1.5, -2.0});
  t.add_row({"x", ""});
  EXPECT_EQ(t.to_string(), "a,b\n1.5,-2\nx,\n");
  EXPECT_THROW(t.add_row({"only-one"}), std::invalid_argument);
}
