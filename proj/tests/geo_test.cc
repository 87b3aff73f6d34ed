#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "parkassign/geo.h"
#include "parkassign/scenario.h"
#include "support.h"

using namespace parkassign;
using parkassign::test::miller_reference;
using parkassign::test::relative_error;

namespace {

constexpr double L = geo::kCircumference;

TEST(MillerProjection, OriginMapsToCenter) {
  const PlanePoint p = geo::miller_project({0.0, 0.0});
  EXPECT_DOUBLE_EQ(p.x, L / 2);
  EXPECT_DOUBLE_EQ(p.y, L / 4);
}

TEST(MillerProjection, HalfTurnEastMapsToRightEdge) {
  const PlanePoint p = geo::miller_project({std::numbers::pi, 0.0});
  EXPECT_DOUBLE_EQ(p.x, L);
  EXPECT_DOUBLE_EQ(p.y, L / 4);
}

TEST(MillerProjection, BerkeleyMatchesHighPrecisionReference) {
  const PlanePoint got = geo::miller_project({-2.130, 0.660});
  const PlanePoint want = miller_reference(-2.130, 0.660);
  EXPECT_LT(relative_error(got.x, want.x), 1e-12);
  EXPECT_LT(relative_error(got.y, want.y), 1e-12);
}

TEST(MillerProjection, RandomPointsMatchReference) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lon(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> lat(-1.5, 1.5);
  for (int i = 0; i < 500; ++i) {
    const double a = lon(rng), b = lat(rng);
    const PlanePoint got = geo::miller_project({a, b});
    const PlanePoint want = miller_reference(a, b);
    ASSERT_LT(relative_error(got.x, want.x), 1e-9) << a << " " << b;
    ASSERT_LT(relative_error(got.y, want.y), 1e-9) << a << " " << b;
  }
}

TEST(MillerProjection, RejectsPoles) {
  EXPECT_THROW(geo::miller_project({0.0, std::numbers::pi / 2}), std::domain_error);
  EXPECT_THROW(geo::miller_project({0.0, -2.0}), std::domain_error);
  EXPECT_THROW(geo::miller_project({0.0, std::nan("")}), std::domain_error);
  EXPECT_FALSE(geo::is_valid({0.0, 1.6}));
  EXPECT_TRUE(geo::is_valid({-2.13, 0.66}));
}

TEST(MillerProjection, OrdinateIncreasesWithLatitude) {
  double prev = geo::miller_ordinate(-1.55);
  for (double lat = -1.54; lat < 1.55; lat += 0.01) {
    const double y = geo::miller_ordinate(lat);
    ASSERT_GT(y, prev) << lat;
    prev = y;
  }
}

TEST(MillerProjection, XIncreasesWithLongitude) {
  double prev = geo::miller_project({-3.1, 0.5}).x;
  for (double lon = -3.0; lon <= 3.1; lon += 0.1) {
    const double x = geo::miller_project({lon, 0.5}).x;
    ASSERT_GT(x, prev);
    prev = x;
  }
}

TEST(Manhattan, Examples) {
  EXPECT_EQ(geo::manhattan({0, 0}, {0, 0}), 0.0);
  EXPECT_EQ(geo::manhattan({0, 0}, {3, 4}), 7.0);
  EXPECT_EQ(geo::manhattan({-1, 2}, {2, -2}), 7.0);
}

TEST(Manhattan, MatchesDirectFormulaAndMetricAxioms) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-5000.0, 5000.0);
  for (int i = 0; i < 2000; ++i) {
    const PlanePoint a{c(rng), c(rng)}, b{c(rng), c(rng)}, d{c(rng), c(rng)};
    ASSERT_EQ(geo::manhattan(a, b), std::abs(a.x - b.x) + std::abs(a.y - b.y));
    ASSERT_EQ(geo::manhattan(a, b), geo::manhattan(b, a));
    ASSERT_EQ(geo::manhattan(a, a), 0.0);
    ASSERT_LE(geo::manhattan(a, d), geo::manhattan(a, b) + geo::manhattan(b, d) + 1e-9);
  }
}

TEST(DistanceMatrix, SingleLotAtDestination) {
  const std::vector<PlanePoint> lots{{10, 20}};
  const std::vector<PlanePoint> entries{{0, 0}};
  const DistanceMatrix m = build_distance_matrix(lots, entries, {10, 20});
  EXPECT_EQ(m.lot_dest(0), 0.0);
  EXPECT_EQ(m.lot_lot(0, 0), 0.0);
  EXPECT_EQ(m.entry_lot(0, 0), 30.0);
}

TEST(DistanceMatrix, CollinearLots) {
  const std::vector<PlanePoint> lots{{100, 0}, {300, 0}};
  const std::vector<PlanePoint> entries{{0, 0}};
  const DistanceMatrix m = build_distance_matrix(lots, entries, {0, 0});
  EXPECT_EQ(m.lot_lot(0, 1), 200.0);
  EXPECT_EQ(m.lot_lot(1, 0), 200.0);
  EXPECT_EQ(m.lot_dest(0), 100.0);
  EXPECT_EQ(m.lot_dest(1), 300.0);
}

TEST(DistanceMatrix, SyntheticScenarioMatchesPairwiseLoop) {
  const Scenario s = generate_synthetic(SyntheticSpec{}, 7);
  const ScenarioGeometry g = build_geometry(s);
  ASSERT_EQ(g.lots.size(), 21u);
  const DistanceMatrix& m = g.distances;
  for (std::size_t i = 0; i < 21; ++i) {
    const PlanePoint pi = geo::miller_project(s.lots[i].location);
    EXPECT_EQ(g.lots[i], pi);
    for (std::size_t j = 0; j < 21; ++j) {
      const PlanePoint pj = geo::miller_project(s.lots[j].location);
      EXPECT_EQ(m.lot_lot(i, j), std::abs(pi.x - pj.x) + std::abs(pi.y - pj.y));
    }
    const PlanePoint d = geo::miller_project(s.destination);
    EXPECT_EQ(m.lot_dest(i), std::abs(pi.x - d.x) + std::abs(pi.y - d.y));
    for (std::size_t e = 0; e < s.entries.size(); ++e) {
      const PlanePoint pe = geo::miller_project(s.entries[e].location);
      EXPECT_EQ(m.entry_lot(e, i), std::abs(pe.x - pi.x) + std::abs(pe.y - pi.y));
    }
  }
}

}  // namespace
