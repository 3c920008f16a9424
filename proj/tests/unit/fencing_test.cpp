#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsocket/errors.hpp"
#include "qsocket/fencing.hpp"

namespace qsocket {
namespace {

TEST(FenceWireCount, KnownValues) {
  EXPECT_EQ(fence_wire_count(0), 0);
  EXPECT_EQ(fence_wire_count(1), 5);
  EXPECT_EQ(fence_wire_count(2), 33);
  EXPECT_EQ(fence_wire_count(1, 3), 16);
}

TEST(FenceWireCount, MatchesEnumeration) {
  for (int n : {2, 3, 4}) {
    std::int64_t m = 1;
    for (int d = 0; d <= 4; ++d) {
      EXPECT_EQ(fence_wire_count(d, n), static_cast<std::int64_t>(oracle::fence_points(m).size()))
          << "n=" << n << " d=" << d;
      m *= n;
    }
  }
}

TEST(FenceWireCount, StrictlyIncreasing) {
  for (int d = 0; d < 8; ++d) {
    EXPECT_LT(fence_wire_count(d), fence_wire_count(d + 1));
    EXPECT_LT(fence_scaled_frequency(d), fence_scaled_frequency(d + 1));
  }
}

TEST(FenceWireCount, RejectsBadArguments) {
  EXPECT_THROW((void)fence_wire_count(-1), InvalidInput);
  EXPECT_THROW((void)fence_wire_count(1, 1), InvalidInput);
}

TEST(ScaledFrequency, Values) {
  EXPECT_EQ(fence_scaled_frequency(0), 1.0);
  EXPECT_EQ(fence_scaled_frequency(1), 2.0);
  EXPECT_EQ(fence_scaled_frequency(1, 3), 3.0);
}

TEST(FrequencyFromWireCount, Values) {
  EXPECT_EQ(frequency_from_wire_count(0), 1.0);
  EXPECT_EQ(frequency_from_wire_count(5), 2.0);
  EXPECT_EQ(frequency_from_wire_count(33), 4.0);
  EXPECT_NEAR(frequency_from_wire_count(2.5), (2.0 + std::sqrt(8.5)) / 3.0, 1e-15);
  EXPECT_THROW((void)frequency_from_wire_count(-1.0), InvalidInput);
}

TEST(FrequencyFromWireCount, InvertsFenceCountExactly) {
  for (int n : {2, 3, 5}) {
    for (int d = 0; d <= 6; ++d) {
      if (n == 5 && d > 5) continue;
      EXPECT_EQ(frequency_from_wire_count(static_cast<double>(fence_wire_count(d, n))),
                fence_scaled_frequency(d, n))
          << "n=" << n << " d=" << d;
    }
  }
}

TEST(GenerateLayout, FirstIteration) {
  FencePlan plan{2, 1, 72e-3, 500e-6};
  const auto layout = generate_fence_layout(plan);
  ASSERT_EQ(layout.size(), 5u);
  const Point2 expected[] = {{36e-3, 36e-3}, {36e-3, 18e-3}, {36e-3, 54e-3},
                             {18e-3, 36e-3}, {54e-3, 36e-3}};
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& c : layout.centers) found |= distance(c, e) < 1e-12;
    EXPECT_TRUE(found) << e.x << "," << e.z;
  }
}

TEST(GenerateLayout, EmptyAtIterationZero) {
  EXPECT_TRUE(generate_fence_layout(FencePlan{2, 0}).empty());
}

TEST(GenerateLayout, CountsAndInvariants) {
  for (int n : {2, 3}) {
    for (int d = 0; d <= 3; ++d) {
      FencePlan plan{n, d, 72e-3, 500e-6};
      const auto layout = generate_fence_layout(plan);
      EXPECT_EQ(static_cast<std::int64_t>(layout.size()), fence_wire_count(d, n));
      EXPECT_NO_THROW(layout.validate(plan.cavity_side));
      const auto points = oracle::fence_points(plan.cells_per_side());
      const double half = 72e-3 / static_cast<double>(plan.cells_per_side()) / 2.0;
      for (const auto& c : layout.centers) {
        const auto i = std::llround(c.x / half), k = std::llround(c.z / half);
        EXPECT_TRUE(points.count({i, k}));
      }
    }
  }
}

TEST(GenerateLayout, OverlapIsRejected) {
  FencePlan plan{2, 6, 72e-3, 800e-6};   // half-cell 0.5625 mm < 0.8 mm
  EXPECT_THROW((void)generate_fence_layout(plan), InvalidInput);
  FencePlan too_small{2, 8, 72e-3, 500e-6};   // cell 0.28 mm < wire
  EXPECT_THROW(too_small.validate(), InvalidInput);
}

TEST(CellsOf, Tiling) {
  EXPECT_EQ(cells_of(FencePlan{2, 0}).size(), 1u);
  EXPECT_EQ(cells_of(FencePlan{2, 2}).size(), 16u);
  const auto cells = cells_of(FencePlan{2, 1});
  ASSERT_EQ(cells.size(), 4u);
  double area = 0.0;
  for (const auto& c : cells) {
    EXPECT_DOUBLE_EQ(c.side, 36e-3);
    area += c.side * c.side;
  }
  EXPECT_NEAR(area, 72e-3 * 72e-3, 1e-15);
}

TEST(WireLayout, Validation) {
  WireLayout ok{{{10e-3, 10e-3}, {10.5e-3, 10e-3}}, 500e-6};
  EXPECT_NO_THROW(ok.validate(72e-3));
  WireLayout overlap{{{10e-3, 10e-3}, {10.4e-3, 10e-3}}, 500e-6};
  EXPECT_THROW(overlap.validate(72e-3), InvalidInput);
  WireLayout outside{{{80e-3, 10e-3}}, 500e-6};
  EXPECT_THROW(outside.validate(72e-3), InvalidInput);
  WireLayout on_wall{{{0.1e-3, 10e-3}}, 500e-6};
  EXPECT_THROW(on_wall.validate(72e-3), InvalidInput);
}

TEST(LayoutCsv, RoundTrip) {
  const auto layout = generate_fence_layout(FencePlan{2, 2, 72e-3, 500e-6});
  std::stringstream buf;
  write_layout_csv(buf, layout);
  const auto back = read_layout_csv(buf);
  ASSERT_EQ(back.size(), layout.size());
  EXPECT_DOUBLE_EQ(back.diameter, layout.diameter);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    EXPECT_NEAR(back.centers[i].x, layout.centers[i].x, 1e-15);
    EXPECT_NEAR(back.centers[i].z, layout.centers[i].z, 1e-15);
  }
}

TEST(LayoutCsv, RejectsMalformedInput) {
  std::istringstream bad_header("x,z\n1,2\n");
  EXPECT_THROW((void)read_layout_csv(bad_header), InvalidInput);
  std::istringstream bad_row("x_m,z_m,diameter_m\n1;2;3\n");
  EXPECT_THROW((void)read_layout_csv(bad_row), InvalidInput);
  std::istringstream mixed("x_m,z_m,diameter_m\n0.01,0.01,5e-4\n0.02,0.02,6e-4\n");
  EXPECT_THROW((void)read_layout_csv(mixed), InvalidInput);
}

}  // namespace
}  // namespace qsocket
