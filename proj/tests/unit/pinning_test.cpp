#include <sstream>

#include <gtest/gtest.h>

#include "qsocket/errors.hpp"
#include "qsocket/pinning.hpp"

namespace qsocket {
namespace {

PinningConfig small_config(std::size_t max_wires, int resolution = 129) {
  PinningConfig cfg;
  cfg.max_wires = max_wires;
  cfg.grid = Grid{72e-3, resolution};
  return cfg;
}

void expect_consistent(const PinningReport& report) {
  ASSERT_FALSE(report.iterations.empty());
  std::size_t total = report.iterations.front().total_wires;
  for (std::size_t i = 1; i < report.iterations.size(); ++i) {
    const auto& it = report.iterations[i];
    EXPECT_EQ(it.iteration, static_cast<int>(i));
    EXPECT_EQ(it.total_wires, total + it.wires_added);
    EXPECT_GE(it.frequency, report.iterations[i - 1].frequency);
    total = it.total_wires;
  }
  EXPECT_EQ(report.final_layout.size(), total);
  EXPECT_NO_THROW(report.final_layout.validate(72e-3));
}

TEST(Pinning, FirstPassPlacesOneCenterWire) {
  const auto report = run_pinning(small_config(1));
  ASSERT_EQ(report.iterations.size(), 2u);
  EXPECT_EQ(report.iterations[0].total_wires, 0u);
  EXPECT_EQ(report.iterations[1].wires_added, 1u);
  const auto& c = report.final_layout.centers.at(0);
  EXPECT_NEAR(c.x, 36e-3, 72e-3 / 128);
  EXPECT_NEAR(c.z, 36e-3, 72e-3 / 128);
  EXPECT_EQ(report.status, PinningStatus::wire_budget_reached);
  EXPECT_GT(report.iterations[1].frequency, report.iterations[0].frequency);
}

TEST(Pinning, SecondPassPinsTheRing) {
  auto cfg = small_config(300, 257);
  cfg.min_separation = 7e-3;
  cfg.target_frequency = 3.5e9;   // stop right after the ring pass
  const auto report = run_pinning(cfg);
  ASSERT_GE(report.iterations.size(), 3u);
  EXPECT_EQ(report.iterations[1].wires_added, 1u);
  EXPECT_GE(report.iterations[2].wires_added, 6u);
  EXPECT_LE(report.iterations[2].wires_added, 10u);
  expect_consistent(report);
}

TEST(Pinning, ZeroBudgetGivesZeroIterationReport) {
  const auto report = run_pinning(small_config(0));
  ASSERT_EQ(report.iterations.size(), 1u);
  EXPECT_EQ(report.status, PinningStatus::wire_budget_reached);
  EXPECT_TRUE(report.final_layout.empty());
}

TEST(Pinning, TargetAlreadyMet) {
  auto cfg = small_config(50);
  cfg.target_frequency = 1e9;
  const auto report = run_pinning(cfg);
  ASSERT_EQ(report.iterations.size(), 1u);
  EXPECT_EQ(report.status, PinningStatus::target_reached);
}

TEST(Pinning, BudgetCapTruncatesPass) {
  const auto report = run_pinning(small_config(5));
  expect_consistent(report);
  EXPECT_EQ(report.final_layout.size(), 5u);
  EXPECT_EQ(report.status, PinningStatus::wire_budget_reached);
}

TEST(Pinning, TargetStopsTheLoop) {
  auto cfg = small_config(300);
  cfg.target_frequency = 4.0e9;
  const auto report = run_pinning(cfg);
  expect_consistent(report);
  EXPECT_EQ(report.status, PinningStatus::target_reached);
  EXPECT_GE(report.final_solution.frequency, 4.0e9);
  EXPECT_LT(report.iterations[report.iterations.size() - 2].frequency, 4.0e9);
}

TEST(Pinning, SeededLayoutIsIterationZero) {
  WireLayout seeds{{{20e-3, 20e-3}, {52e-3, 52e-3}}, 500e-6};
  const auto report = run_pinning(small_config(3), seeds);
  EXPECT_EQ(report.iterations[0].iteration, 0);
  EXPECT_EQ(report.iterations[0].total_wires, 2u);
  const auto empty = run_pinning(small_config(0));
  EXPECT_GT(report.iterations[0].frequency, empty.iterations[0].frequency);
  expect_consistent(report);
}

TEST(Pinning, ObserverSeesEverySolve) {
  int calls = 0;
  const auto report = run_pinning(small_config(9), {}, [&](const auto&, const EigenSolution& s) {
    ++calls;
    EXPECT_TRUE(s.converged);
  });
  EXPECT_EQ(calls, static_cast<int>(report.iterations.size()));
}

TEST(Pinning, NoPlacementWhenSeparationTooLarge) {
  auto cfg = small_config(300);
  cfg.min_separation = 40e-3;
  const auto report = run_pinning(cfg);
  EXPECT_EQ(report.status, PinningStatus::no_placement);
  expect_consistent(report);
}

TEST(Pinning, RejectsBadConfig) {
  auto cfg = small_config(301);
  EXPECT_THROW((void)run_pinning(cfg), InvalidInput);
  cfg = small_config(10);
  cfg.threshold = 0.0;
  EXPECT_THROW((void)run_pinning(cfg), InvalidInput);
  cfg = small_config(10);
  EXPECT_THROW((void)run_pinning(cfg, WireLayout{{{80e-3, 1e-3}}, 500e-6}), InvalidInput);
}

TEST(PinningCurve, StartsAtEmptyCavityAndIsMonotone) {
  const auto curve = pinning_frequency_curve(small_config(20));
  ASSERT_GE(curve.size(), 2u);
  EXPECT_EQ(curve.front().first, 0u);
  EXPECT_NEAR(curve.front().second, 2.944e9, 0.01e9);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_GE(curve[i].first, curve[i - 1].first);
    EXPECT_GE(curve[i].second, curve[i - 1].second);
  }
}

TEST(PinningReportCsv, Format) {
  const auto report = run_pinning(small_config(1));
  std::ostringstream out;
  write_pinning_report_csv(out, report);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iteration,wires_added,N_total,f_c_Hz");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("0,0,0,", 0), 0u);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("1,1,1,", 0), 0u);
}

}  // namespace
}  // namespace qsocket
