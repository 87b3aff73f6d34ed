#include "parkassign/geo.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace parkassign {
namespace geo {

bool is_valid(const GeoPoint& p) {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lat > -kHalfPi &&
         p.lat < kHalfPi && p.lon >= -std::numbers::pi &&
         p.lon <= std::numbers::pi;
}

double miller_ordinate(double lat) {
  return 1.25 * std::log(std::tan(std::numbers::pi / 4.0 + 0.4 * lat));
}

PlanePoint miller_project(const GeoPoint& p) {
  if (!is_valid(p)) {
    throw std::domain_error("miller_project: point out of range (lon=" +
                            std::to_string(p.lon) +
                            ", lat=" + std::to_string(p.lat) + ")");
  }
  constexpr double L = kCircumference;
  const double xp = p.lon;
  const double yp = miller_ordinate(p.lat);
  return PlanePoint{L / 2.0 + L / (2.0 * std::numbers::pi) * xp,
                    L / 4.0 - L / (4.0 * kMillConstant) * yp};
}

double manhattan(const PlanePoint& a, const PlanePoint& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

}  // namespace geo

DistanceMatrix::DistanceMatrix(std::span<const PlanePoint> lots,
                               std::span<const PlanePoint> entries,
                               const PlanePoint& destination)
    : entry_count_(entries.size()) {
  const std::size_t n = lots.size();
  lot_lot_.assign(n * n, 0.0);
  lot_dest_.resize(n);
  entry_lot_.resize(entries.size() * n);
  for (std::size_t i = 0; i < n; ++i) {
    lot_dest_[i] = geo::manhattan(lots[i], destination);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = geo::manhattan(lots[i], lots[j]);
      lot_lot_[i * n + j] = d;
      lot_lot_[j * n + i] = d;
    }
  }
  for (std::size_t e = 0; e < entries.size(); ++e) {
    for (std::size_t i = 0; i < n; ++i) {
      entry_lot_[e * n + i] = geo::manhattan(entries[e], lots[i]);
    }
  }
}

}  // namespace parkassign
