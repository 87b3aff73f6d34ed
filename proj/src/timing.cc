#include "parkassign/timing.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace parkassign::timing {

double drive_time(const PlanePoint& from, const PlanePoint& to,
                  const KinematicParams& k) {
  return geo::manhattan(from, to) / k.cruise_speed;
}

double walk_time(const PlanePoint& lot, const PlanePoint& destination,
                 const KinematicParams& k) {
  return geo::manhattan(lot, destination) / k.walk_speed;
}

int first_free_floor(std::span<const double> floor_occupancies) {
  for (std::size_t f = 0; f < floor_occupancies.size(); ++f) {
    if (floor_occupancies[f] < 1.0) return static_cast<int>(f) + 1;
  }
  return static_cast<int>(floor_occupancies.size());
}

double search_time(const SearchTimeInputs& in) {
  if (in.lot == nullptr) throw std::invalid_argument("search_time: no lot");
  const ParkingLot& lot = *in.lot;
  if (!(in.occupancy >= 0.0 && in.occupancy <= 1.0)) {
    throw std::invalid_argument("search_time: occupancy " +
                                std::to_string(in.occupancy) +
                                " outside [0, 1]");
  }
  if (static_cast<int>(in.floor_occupancies.size()) != lot.floors ||
      static_cast<int>(lot.floor_capacities.size()) != lot.floors) {
    throw std::invalid_argument("search_time: floor data does not match lot " +
                                std::to_string(lot.id));
  }
  double occupied_spots = 0.0;
  for (int f = 0; f < lot.floors; ++f) {
    const double o = in.floor_occupancies[f];
    if (!(o >= 0.0 && o <= 1.0)) {
      throw std::invalid_argument("search_time: floor occupancy outside [0, 1]");
    }
    occupied_spots += o * lot.floor_capacities[f];
  }
  if (std::abs(occupied_spots - in.occupancy * lot.capacity) > 1.0) {
    throw std::invalid_argument(
        "search_time: floor occupancies inconsistent with lot occupancy");
  }

  const KinematicParams& k = in.kinematics;
  const double frontage = k.spot_width / 2.0 * lot.capacity * in.occupancy;
  double t = frontage / k.cruise_speed + frontage / k.walk_speed + k.stop_time;
  const int ramps = first_free_floor(in.floor_occupancies) - 1;
  if (ramps > 0) {
    t += ramps * (lot.ramp_length / k.ramp_speed + k.turn_time);
  }
  return t;
}

SearchTimeInputs fill_lowest_first(const ParkingLot& lot, int occupied,
                                   const KinematicParams& k) {
  if (occupied < 0 || occupied > lot.capacity) {
    throw std::invalid_argument("fill_lowest_first: occupied count " +
                                std::to_string(occupied) + " out of range");
  }
  std::vector<int> counts(lot.floors, 0);
  int left = occupied;
  for (int f = 0; f < lot.floors && left > 0; ++f) {
    counts[f] = std::min(left, lot.floor_capacities[f]);
    left -= counts[f];
  }
  return from_floor_counts(lot, counts, k);
}

SearchTimeInputs from_floor_counts(const ParkingLot& lot,
                                   std::span<const int> per_floor_occupied,
                                   const KinematicParams& k) {
  SearchTimeInputs in;
  in.lot = &lot;
  in.kinematics = k;
  int total = 0;
  in.floor_occupancies.resize(per_floor_occupied.size());
  for (std::size_t f = 0; f < per_floor_occupied.size(); ++f) {
    const int cap = lot.floor_capacities.at(f);
    // A zero-capacity floor is treated as full: nobody can park there.
    in.floor_occupancies[f] =
        cap > 0 ? static_cast<double>(per_floor_occupied[f]) / cap : 1.0;
    total += per_floor_occupied[f];
  }
  in.occupancy = static_cast<double>(total) / lot.capacity;
  return in;
}

}  // namespace parkassign::timing
