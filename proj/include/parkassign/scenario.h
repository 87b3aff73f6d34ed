#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "parkassign/geo.h"

namespace parkassign {

struct ParkingLot {
  int id = 0;
  GeoPoint location;
  int capacity = 0;
  int floors = 1;
  std::vector<int> floor_capacities;  // lowest floor first
  double ramp_length = 0.0;           // meters

  bool operator==(const ParkingLot&) const = default;
};

struct EntryLink {
  int id = 0;
  GeoPoint location;

  bool operator==(const EntryLink&) const = default;
};

struct KinematicParams {
  double spot_width = 2.5;     // W, m
  double cruise_speed = 4.17;  // v_r, m/s
  double walk_speed = 1.39;    // v_w, m/s
  double ramp_speed = 2.78;    // v_rd, m/s
  double stop_time = 60.0;     // t_stop, s
  double turn_time = 10.0;     // t_turn, s

  bool operator==(const KinematicParams&) const = default;
};

struct Region {
  GeoPoint south_west;
  GeoPoint north_east;

  bool operator==(const Region&) const = default;
};

struct GammaParams {
  double shape = 2.0;
  double scale = 450.0;  // seconds

  bool operator==(const GammaParams&) const = default;
};

enum class ArrivalMode { kPoisson, kUniform };

const char* to_string(ArrivalMode mode);
std::optional<ArrivalMode> parse_arrival_mode(const std::string& s);

inline constexpr int kScenarioSchemaVersion = 1;

struct Scenario {
  Region region;
  std::vector<ParkingLot> lots;
  std::vector<EntryLink> entries;
  GeoPoint destination;
  int vehicle_count = 0;
  double window_start = 36000.0;  // wall clock seconds (10:00)
  double window_end = 43200.0;    // 12:00
  int segments = 12;
  double segment_length = 600.0;
  KinematicParams kinematics;
  // Weights for groups 1..4 (nearest-from-entry, nearest-excluding-core,
  // nearest-to-destination, min drive+walk).
  std::array<double, 4> strategy_mix{0.25, 0.25, 0.25, 0.25};
  double random_fraction = 0.0;
  GammaParams gamma_tolerance;
  double arrival_noise_sigma = 120.0;
  ArrivalMode arrival_mode = ArrivalMode::kPoisson;
  std::optional<double> poisson_lambda;  // default segments/2 + 0.5
  // Lots closer than this to the destination are avoided by group 2.
  // Unset means the 25th percentile of lot-to-destination distances.
  std::optional<double> group2_exclusion_radius;
  double inspection_time = 30.0;  // seconds spent discovering a lot is full

  double window_length() const { return window_end - window_start; }
  std::int64_t total_capacity() const;

  bool operator==(const Scenario&) const = default;
};

struct Violation {
  std::string field;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate(const Scenario& s);

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScenarioValidationError : public std::runtime_error {
 public:
  explicit ScenarioValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

struct SyntheticSpec {
  int n_lots = 21;
  int total_capacity = 3992;
  int n_entries = 12;
  // Vehicle demand; negative means demand equals supply.
  int vehicle_count = -1;
  // Defaults give roughly a 1.2 km x 0.9 km planar rectangle around the
  // stadium in Berkeley.
  Region region{GeoPoint{-2.13386, 0.66089}, GeoPoint{-2.13367, 0.66107}};
  // Fraction of the rectangle width the destination sits inside the east
  // edge.
  double destination_inset = 0.05;
  int max_floors = 1;
};

/// Deterministic in (spec, seed). Throws std::invalid_argument on infeasible
/// specs.
Scenario generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// Projected positions and the distance matrix for one scenario.
struct ScenarioGeometry {
  std::vector<PlanePoint> lots;
  std::vector<PlanePoint> entries;
  PlanePoint destination;
  PlanePoint region_min;
  PlanePoint region_max;
  DistanceMatrix distances;
  double group2_exclusion_radius = 0.0;
};

ScenarioGeometry build_geometry(const Scenario& s);

/// 25th percentile (nearest-rank) of the lot-to-destination distances.
double default_exclusion_radius(const std::vector<double>& lot_dest);

}  // namespace parkassign
