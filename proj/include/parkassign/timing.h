#pragma once

#include <span>
#include <vector>

#include "parkassign/geo.h"
#include "parkassign/scenario.h"

namespace parkassign::timing {

// Occupancy snapshot of one lot, used for in-lot search time.
struct SearchTimeInputs {
  const ParkingLot* lot = nullptr;
  double occupancy = 0.0;                // O_i in [0, 1]
  std::vector<double> floor_occupancies;  // O_iN per floor, lowest first
  KinematicParams kinematics;
};

double drive_time(const PlanePoint& from, const PlanePoint& to,
                  const KinematicParams& k);

double walk_time(const PlanePoint& lot, const PlanePoint& destination,
                 const KinematicParams& k);

/// 1-based index of the first floor that is not full; the top floor when
/// every floor is full.
int first_free_floor(std::span<const double> floor_occupancies);

/// In-lot search time:
///   cruise past half the occupied frontage, walk back, stop, then
///   (F* - 1) ramp climbs at R/v_rd each with a U-turn between ramps.
/// Throws std::invalid_argument for occupancies outside [0, 1] or per-floor
/// occupancies inconsistent with the lot total.
double search_time(const SearchTimeInputs& in);

/// Occupancy snapshot of a lot holding `occupied` vehicles, filled lowest
/// floor first.
SearchTimeInputs fill_lowest_first(const ParkingLot& lot, int occupied,
                                   const KinematicParams& k);

/// Occupancy snapshot from explicit per-floor counts.
SearchTimeInputs from_floor_counts(const ParkingLot& lot,
                                   std::span<const int> per_floor_occupied,
                                   const KinematicParams& k);

}  // namespace parkassign::timing
