#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace parkassign {

// Geographic position in radians, east/north positive.
struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

// Planar position in meters after projection.
struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const PlanePoint&) const = default;
};

namespace geo {

inline constexpr double kEarthRadius = 6381372.0;
inline constexpr double kCircumference = kEarthRadius * std::numbers::pi * 2.0;
inline constexpr double kMillConstant = 2.3;

bool is_valid(const GeoPoint& p);

/// Miller cylindrical projection rescaled onto [0, L] x [0, L/2] with
/// L = 2*pi*6381372 m. Throws std::domain_error when |lat| >= pi/2 or the
/// point is otherwise out of range.
PlanePoint miller_project(const GeoPoint& p);

/// The unscaled Miller ordinate 1.25 * ln(tan(pi/4 + 0.4 * lat)).
double miller_ordinate(double lat);

double manhattan(const PlanePoint& a, const PlanePoint& b);

}  // namespace geo

// All distances the planner and the simulation need, in meters.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::span<const PlanePoint> lots,
                 std::span<const PlanePoint> entries,
                 const PlanePoint& destination);

  std::size_t lot_count() const { return lot_dest_.size(); }
  std::size_t entry_count() const { return entry_count_; }

  double lot_lot(std::size_t i, std::size_t j) const {
    return lot_lot_[i * lot_count() + j];
  }
  double lot_dest(std::size_t i) const { return lot_dest_[i]; }
  double entry_lot(std::size_t e, std::size_t i) const {
    return entry_lot_[e * lot_count() + i];
  }

  const std::vector<double>& lot_dest() const { return lot_dest_; }

  bool operator==(const DistanceMatrix&) const = default;

 private:
  std::size_t entry_count_ = 0;
  std::vector<double> lot_lot_;
  std::vector<double> lot_dest_;
  std::vector<double> entry_lot_;
};

inline DistanceMatrix build_distance_matrix(std::span<const PlanePoint> lots,
                                            std::span<const PlanePoint> entries,
                                            const PlanePoint& destination) {
  return DistanceMatrix(lots, entries, destination);
}

}  // namespace parkassign
