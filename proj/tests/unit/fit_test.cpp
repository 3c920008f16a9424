#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsocket/analysis.hpp"

namespace qsocket {
namespace {

AnticrossingData synthetic(double f_c, double g, double noise = 0.0, unsigned seed = 1,
                           int count = 41) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, noise > 0.0 ? noise : 1.0);
  AnticrossingData data;
  for (int i = 0; i < count; ++i) {
    const double f_r = f_c - 500e6 + 1000e6 * i / (count - 1);
    auto [lo, hi] = oracle::anticrossing_branches(f_c, g, f_r);
    if (noise > 0.0) {
      lo += n(rng);
      hi += n(rng);
    }
    data.points.push_back({f_r, lo, hi, {}, {}});
  }
  return data;
}

TEST(AnticrossingFit, RecoversNoiselessParameters) {
  const auto fit = fit_anticrossing(synthetic(7e9, 100e6));
  EXPECT_NEAR(fit.coupling_g, 100e6, 0.1e6);
  EXPECT_NEAR(fit.cavity_frequency, 7e9, 7e6);
  EXPECT_LT(fit.rms_residual, 1.0);
  EXPECT_EQ(fit.degrees_of_freedom, 80u);
}

TEST(AnticrossingFit, MonteCarloWithOneMegahertzNoise) {
  int within = 0;
  for (unsigned seed = 1; seed <= 100; ++seed) {
    const auto fit = fit_anticrossing(synthetic(7e9, 100e6, 1e6, seed));
    if (std::abs(fit.coupling_g - 100e6) <= 2e6 && std::abs(fit.cavity_frequency - 7e9) <= 140e6) {
      ++within;
    }
  }
  EXPECT_GE(within, 95);
}

TEST(AnticrossingFit, CouplingEqualsMinimumSplitting) {
  const auto data = synthetic(6.3e9, 42e6);
  double min_split = 1e300;
  for (const auto& p : data.points) min_split = std::min(min_split, p.upper - p.lower);
  const auto fit = fit_anticrossing(data);
  EXPECT_NEAR(fit.coupling_g, min_split, 0.01 * min_split);
}

TEST(AnticrossingFit, OffsetInvariance) {
  auto data = synthetic(7e9, 80e6, 0.5e6, 7);
  const auto base = fit_anticrossing(data);
  for (auto& p : data.points) {
    p.f_r += 1e9;
    p.lower += 1e9;
    p.upper += 1e9;
  }
  const auto shifted = fit_anticrossing(data);
  EXPECT_NEAR(shifted.coupling_g, base.coupling_g, 1e3);
  EXPECT_NEAR(shifted.cavity_frequency - 1e9, base.cavity_frequency, 1e3);
}

TEST(AnticrossingFit, ConfidenceIntervals) {
  const auto fit = fit_anticrossing(synthetic(7e9, 100e6, 1e6, 3));
  EXPECT_GT(fit.coupling_g_ci, 0.0);
  EXPECT_GT(fit.cavity_frequency_ci, 0.0);
  EXPECT_LT(fit.coupling_g_ci, 5e6);
}

TEST(AnticrossingFit, WeightedData) {
  auto data = synthetic(7e9, 100e6, 1e6, 5);
  for (auto& p : data.points) {
    p.sigma_lower = 1e6;
    p.sigma_upper = 1e6;
  }
  const auto fit = fit_anticrossing(data);
  EXPECT_NEAR(fit.coupling_g, 100e6, 2e6);
  data.points[0].sigma_upper.reset();
  EXPECT_THROW((void)fit_anticrossing(data), InvalidInput);
}

TEST(AnticrossingFit, RejectsBadData) {
  auto few = synthetic(7e9, 100e6, 0.0, 1, 3);
  EXPECT_THROW((void)fit_anticrossing(few), InvalidInput);
  auto same = synthetic(7e9, 100e6);
  for (auto& p : same.points) p.f_r = 7e9;
  EXPECT_THROW((void)fit_anticrossing(same), InvalidInput);
  auto swapped = synthetic(7e9, 100e6);
  std::swap(swapped.points[3].lower, swapped.points[3].upper);
  EXPECT_THROW((void)fit_anticrossing(swapped), InvalidInput);
}

TEST(AnticrossingCsv, ReadAndReport) {
  std::istringstream in(
      "f_R_Hz,lower_Hz,upper_Hz\n"
      "6.5e9,6.49e9,7.01e9\n6.9e9,6.86e9,7.04e9\n7.0e9,6.95e9,7.05e9\n7.4e9,6.99e9,7.41e9\n");
  const auto data = read_anticrossing_csv(in);
  ASSERT_EQ(data.points.size(), 4u);
  EXPECT_DOUBLE_EQ(data.points[2].upper, 7.05e9);
  std::istringstream bad("f,l,u\n1,2,3\n");
  EXPECT_THROW((void)read_anticrossing_csv(bad), InvalidInput);

  std::ostringstream out;
  write_fit_report(out, fit_anticrossing(synthetic(7e9, 100e6)));
  const auto text = out.str();
  for (const char* key : {"g_Hz:", "g_ci95_Hz:", "f_c_Hz:", "f_c_ci95_Hz:", "rms_residual_Hz:",
                          "degrees_of_freedom:", "iterations:"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

}  // namespace
}  // namespace qsocket
