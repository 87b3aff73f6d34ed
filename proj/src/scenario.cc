#include "parkassign/scenario.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "parkassign/rng.h"

namespace parkassign {

using Json = nlohmann::ordered_json;

const char* to_string(ArrivalMode mode) {
  switch (mode) {
    case ArrivalMode::kPoisson:
      return "poisson";
    case ArrivalMode::kUniform:
      return "uniform";
  }
  return "poisson";
}

std::optional<ArrivalMode> parse_arrival_mode(const std::string& s) {
  if (s == "poisson") return ArrivalMode::kPoisson;
  if (s == "uniform") return ArrivalMode::kUniform;
  return std::nullopt;
}

std::int64_t Scenario::total_capacity() const {
  std::int64_t total = 0;
  for (const auto& lot : lots) total += lot.capacity;
  return total;
}

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string msg = "scenario validation failed:";
  for (const auto& v : violations) msg += "\n  " + v.field + ": " + v.rule;
  return msg;
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void check_point(std::vector<Violation>& out, const std::string& field,
                 const GeoPoint& p) {
  if (!geo::is_valid(p)) {
    out.push_back({field, "lat must be in (-pi/2, pi/2) and lon in [-pi, pi]"});
  }
}

}  // namespace

ScenarioValidationError::ScenarioValidationError(
    std::vector<Violation> violations)
    : std::runtime_error(describe(violations)),
      violations_(std::move(violations)) {}

std::vector<Violation> validate(const Scenario& s) {
  std::vector<Violation> out;

  check_point(out, "region.south_west", s.region.south_west);
  check_point(out, "region.north_east", s.region.north_east);
  const bool region_ok = geo::is_valid(s.region.south_west) &&
                         geo::is_valid(s.region.north_east);
  if (region_ok && (s.region.south_west.lon >= s.region.north_east.lon ||
                    s.region.south_west.lat >= s.region.north_east.lat)) {
    out.push_back({"region", "south_west must be strictly south-west of "
                             "north_east"});
  }
  check_point(out, "destination", s.destination);

  if (s.lots.empty()) out.push_back({"lots", "at least one lot is required"});
  std::set<int> lot_ids;
  for (std::size_t i = 0; i < s.lots.size(); ++i) {
    const auto& lot = s.lots[i];
    const std::string f = "lots[" + std::to_string(i) + "]";
    if (!lot_ids.insert(lot.id).second) {
      out.push_back({f + ".id", "lot ids must be unique"});
    }
    check_point(out, f + ".location", lot.location);
    if (lot.capacity < 1) out.push_back({f + ".capacity", "must be >= 1"});
    if (lot.floors < 1) out.push_back({f + ".floors", "must be >= 1"});
    if (static_cast<int>(lot.floor_capacities.size()) != lot.floors) {
      out.push_back({f + ".floor_capacities",
                     "must have one entry per floor"});
    } else {
      const long sum = std::accumulate(lot.floor_capacities.begin(),
                                       lot.floor_capacities.end(), 0L);
      if (sum != lot.capacity) {
        out.push_back({f + ".floor_capacities", "must sum to capacity"});
      }
      if (std::any_of(lot.floor_capacities.begin(),
                      lot.floor_capacities.end(),
                      [](int c) { return c < 0; })) {
        out.push_back({f + ".floor_capacities", "must be non-negative"});
      }
    }
    if (lot.floors > 1 && !positive(lot.ramp_length)) {
      out.push_back({f + ".ramp_length", "must be > 0 for multi-floor lots"});
    }
    if (!std::isfinite(lot.ramp_length) || lot.ramp_length < 0.0) {
      out.push_back({f + ".ramp_length", "must be finite and >= 0"});
    }
  }

  if (s.entries.empty()) {
    out.push_back({"entries", "at least one entry link is required"});
  }
  std::set<int> entry_ids;
  for (std::size_t e = 0; e < s.entries.size(); ++e) {
    const auto& entry = s.entries[e];
    const std::string f = "entries[" + std::to_string(e) + "]";
    if (!entry_ids.insert(entry.id).second) {
      out.push_back({f + ".id", "entry ids must be unique"});
    }
    check_point(out, f + ".location", entry.location);
    if (region_ok && geo::is_valid(entry.location)) {
      // Entries sit on the region boundary; allow 1 m of slack after
      // projection.
      const PlanePoint a = geo::miller_project(s.region.south_west);
      const PlanePoint b = geo::miller_project(s.region.north_east);
      const PlanePoint p = geo::miller_project(entry.location);
      const double xmin = std::min(a.x, b.x), xmax = std::max(a.x, b.x);
      const double ymin = std::min(a.y, b.y), ymax = std::max(a.y, b.y);
      constexpr double kSlack = 1.0;
      const bool inside = p.x >= xmin - kSlack && p.x <= xmax + kSlack &&
                          p.y >= ymin - kSlack && p.y <= ymax + kSlack;
      const double edge = std::min({std::abs(p.x - xmin), std::abs(p.x - xmax),
                                    std::abs(p.y - ymin),
                                    std::abs(p.y - ymax)});
      if (!inside || edge > kSlack) {
        out.push_back({f + ".location", "must lie on the region boundary"});
      }
    }
  }

  if (s.vehicle_count < 0) {
    out.push_back({"vehicle_count", "must be >= 0"});
  } else if (s.vehicle_count > s.total_capacity()) {
    out.push_back({"vehicle_count",
                   "demand exceeds supply (" + std::to_string(s.vehicle_count) +
                       " vehicles, " + std::to_string(s.total_capacity()) +
                       " spaces)"});
  }

  if (!(std::isfinite(s.window_start) && std::isfinite(s.window_end) &&
        s.window_end > s.window_start)) {
    out.push_back({"window", "end must be after start"});
  }
  if (s.segments < 1) out.push_back({"window.segments", "must be >= 1"});
  if (!positive(s.segment_length)) {
    out.push_back({"window.segment_length", "must be > 0"});
  } else if (s.segments >= 1 &&
             std::abs(s.segments * s.segment_length - s.window_length()) >
                 1e-6) {
    out.push_back({"window", "segments * segment_length must equal the "
                             "window length"});
  }

  const auto& k = s.kinematics;
  if (!positive(k.spot_width)) out.push_back({"kinematics.spot_width", "must be > 0"});
  if (!positive(k.cruise_speed)) out.push_back({"kinematics.cruise_speed", "must be > 0"});
  if (!positive(k.walk_speed)) out.push_back({"kinematics.walk_speed", "must be > 0"});
  if (!positive(k.ramp_speed)) out.push_back({"kinematics.ramp_speed", "must be > 0"});
  if (!positive(k.stop_time)) out.push_back({"kinematics.stop_time", "must be > 0"});
  if (!positive(k.turn_time)) out.push_back({"kinematics.turn_time", "must be > 0"});
  if (positive(k.walk_speed) && positive(k.cruise_speed) &&
      k.walk_speed >= k.cruise_speed) {
    out.push_back({"kinematics.walk_speed", "must be below cruise_speed"});
  }

  double mix_sum = 0.0;
  for (double w : s.strategy_mix) {
    if (!std::isfinite(w) || w < 0.0) {
      out.push_back({"strategy_mix", "weights must be non-negative"});
      break;
    }
    mix_sum += w;
  }
  if (std::abs(mix_sum - 1.0) > 1e-9) {
    out.push_back({"strategy_mix", "weights must sum to 1"});
  }
  if (!(s.random_fraction >= 0.0 && s.random_fraction <= 1.0)) {
    out.push_back({"random_fraction", "must be in [0, 1]"});
  }
  if (!positive(s.gamma_tolerance.shape)) {
    out.push_back({"gamma_tolerance.shape", "must be > 0"});
  }
  if (!positive(s.gamma_tolerance.scale)) {
    out.push_back({"gamma_tolerance.scale", "must be > 0"});
  }
  if (!(std::isfinite(s.arrival_noise_sigma) && s.arrival_noise_sigma >= 0.0)) {
    out.push_back({"arrival_noise_sigma", "must be >= 0"});
  }
  if (s.poisson_lambda && !positive(*s.poisson_lambda)) {
    out.push_back({"poisson_lambda", "must be > 0"});
  }
  if (s.group2_exclusion_radius &&
      !(std::isfinite(*s.group2_exclusion_radius) &&
        *s.group2_exclusion_radius >= 0.0)) {
    out.push_back({"group2_exclusion_radius", "must be >= 0"});
  }
  if (!(std::isfinite(s.inspection_time) && s.inspection_time >= 0.0)) {
    out.push_back({"inspection_time", "must be >= 0"});
  }
  return out;
}

namespace {

// Strict object reader: every key must be consumed.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  template <typename T>
  T required(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) fail("missing required key '" + key + "'");
    seen_.insert(key);
    return convert<T>(*it, key);
  }

  template <typename T>
  T optional(const std::string& key, T fallback) {
    auto it = j_.find(key);
    if (it == j_.end()) return fallback;
    seen_.insert(key);
    return convert<T>(*it, key);
  }

  const Json* child(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  const Json& required_child(const std::string& key) {
    const Json* c = child(key);
    if (c == nullptr) fail("missing required key '" + key + "'");
    return *c;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail("unknown key '" + it.key() + "'");
    }
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ScenarioParseError(path_ + ": " + what);
  }

 private:
  template <typename T>
  T convert(const Json& v, const std::string& key) const {
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      fail("key '" + key + "' has the wrong type");
    }
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

GeoPoint read_point(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  GeoPoint p{r.required<double>("lon"), r.required<double>("lat")};
  r.finish();
  return p;
}

Json write_point(const GeoPoint& p) {
  Json j;
  j["lon"] = p.lon;
  j["lat"] = p.lat;
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text, nullptr, /*allow_exceptions=*/true,
                       /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioParseError(std::string("malformed scenario: ") + e.what());
  }

  ObjectReader r(root, "scenario");
  const int schema = r.required<int>("schema");
  if (schema != kScenarioSchemaVersion) {
    r.fail("unsupported schema version " + std::to_string(schema));
  }

  Scenario s;
  {
    ObjectReader rr(r.required_child("region"), r.at("region"));
    s.region.south_west = read_point(rr.required_child("south_west"),
                                     rr.at("south_west"));
    s.region.north_east = read_point(rr.required_child("north_east"),
                                     rr.at("north_east"));
    rr.finish();
  }
  s.destination = read_point(r.required_child("destination"),
                             r.at("destination"));
  s.vehicle_count = r.required<int>("vehicle_count");

  if (const Json* w = r.child("window")) {
    ObjectReader wr(*w, r.at("window"));
    s.window_start = wr.optional<double>("start", s.window_start);
    s.window_end = wr.optional<double>("end", s.window_end);
    s.segments = wr.optional<int>("segments", s.segments);
    s.segment_length = wr.optional<double>(
        "segment_length", s.segments > 0
                              ? (s.window_end - s.window_start) / s.segments
                              : s.segment_length);
    wr.finish();
  }

  if (const Json* k = r.child("kinematics")) {
    ObjectReader kr(*k, r.at("kinematics"));
    auto& km = s.kinematics;
    km.spot_width = kr.optional<double>("spot_width", km.spot_width);
    km.cruise_speed = kr.optional<double>("cruise_speed", km.cruise_speed);
    km.walk_speed = kr.optional<double>("walk_speed", km.walk_speed);
    km.ramp_speed = kr.optional<double>("ramp_speed", km.ramp_speed);
    km.stop_time = kr.optional<double>("stop_time", km.stop_time);
    km.turn_time = kr.optional<double>("turn_time", km.turn_time);
    kr.finish();
  }

  if (const Json* m = r.child("strategy_mix")) {
    if (!m->is_array() || m->size() != 4) {
      r.fail("strategy_mix must be an array of four weights");
    }
    for (std::size_t g = 0; g < 4; ++g) {
      if (!(*m)[g].is_number()) r.fail("strategy_mix weights must be numbers");
      s.strategy_mix[g] = (*m)[g].get<double>();
    }
  }
  s.random_fraction = r.optional<double>("random_fraction", s.random_fraction);
  if (const Json* g = r.child("gamma_tolerance")) {
    ObjectReader gr(*g, r.at("gamma_tolerance"));
    s.gamma_tolerance.shape = gr.optional<double>("shape", s.gamma_tolerance.shape);
    s.gamma_tolerance.scale = gr.optional<double>("scale", s.gamma_tolerance.scale);
    gr.finish();
  }
  s.arrival_noise_sigma =
      r.optional<double>("arrival_noise_sigma", s.arrival_noise_sigma);
  {
    const auto mode = r.optional<std::string>("arrival_mode", "poisson");
    auto parsed = parse_arrival_mode(mode);
    if (!parsed) r.fail("arrival_mode must be 'poisson' or 'uniform'");
    s.arrival_mode = *parsed;
  }
  if (const Json* l = r.child("poisson_lambda")) {
    if (!l->is_number()) r.fail("poisson_lambda must be a number");
    s.poisson_lambda = l->get<double>();
  }
  if (const Json* g2 = r.child("group2_exclusion_radius")) {
    if (!g2->is_number()) r.fail("group2_exclusion_radius must be a number");
    s.group2_exclusion_radius = g2->get<double>();
  }
  s.inspection_time = r.optional<double>("inspection_time", s.inspection_time);

  const Json& lots = r.required_child("lots");
  if (!lots.is_array()) r.fail("lots must be an array");
  for (std::size_t i = 0; i < lots.size(); ++i) {
    ObjectReader lr(lots[i], r.at("lots[" + std::to_string(i) + "]"));
    ParkingLot lot;
    lot.id = lr.required<int>("id");
    lot.location = GeoPoint{lr.required<double>("lon"),
                            lr.required<double>("lat")};
    lot.capacity = lr.required<int>("capacity");
    lot.floors = lr.optional<int>("floors", 1);
    lot.floor_capacities = lr.optional<std::vector<int>>(
        "floor_capacities",
        lot.floors == 1 ? std::vector<int>{lot.capacity} : std::vector<int>{});
    lot.ramp_length = lr.optional<double>("ramp_length", 0.0);
    lr.finish();
    s.lots.push_back(std::move(lot));
  }

  const Json& entries = r.required_child("entries");
  if (!entries.is_array()) r.fail("entries must be an array");
  for (std::size_t e = 0; e < entries.size(); ++e) {
    ObjectReader er(entries[e], r.at("entries[" + std::to_string(e) + "]"));
    EntryLink link;
    link.id = er.required<int>("id");
    link.location = GeoPoint{er.required<double>("lon"),
                             er.required<double>("lat")};
    er.finish();
    s.entries.push_back(link);
  }
  r.finish();

  if (auto violations = validate(s); !violations.empty()) {
    throw ScenarioValidationError(std::move(violations));
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioParseError("cannot open scenario file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioValidationError& e) {
    throw ScenarioValidationError(e.violations());
  } catch (const ScenarioParseError& e) {
    throw ScenarioParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& s) {
  Json j;
  j["schema"] = kScenarioSchemaVersion;
  j["region"]["south_west"] = write_point(s.region.south_west);
  j["region"]["north_east"] = write_point(s.region.north_east);
  j["destination"] = write_point(s.destination);
  j["vehicle_count"] = s.vehicle_count;
  j["window"]["start"] = s.window_start;
  j["window"]["end"] = s.window_end;
  j["window"]["segments"] = s.segments;
  j["window"]["segment_length"] = s.segment_length;
  const auto& k = s.kinematics;
  j["kinematics"]["spot_width"] = k.spot_width;
  j["kinematics"]["cruise_speed"] = k.cruise_speed;
  j["kinematics"]["walk_speed"] = k.walk_speed;
  j["kinematics"]["ramp_speed"] = k.ramp_speed;
  j["kinematics"]["stop_time"] = k.stop_time;
  j["kinematics"]["turn_time"] = k.turn_time;
  j["strategy_mix"] = s.strategy_mix;
  j["random_fraction"] = s.random_fraction;
  j["gamma_tolerance"]["shape"] = s.gamma_tolerance.shape;
  j["gamma_tolerance"]["scale"] = s.gamma_tolerance.scale;
  j["arrival_noise_sigma"] = s.arrival_noise_sigma;
  j["arrival_mode"] = to_string(s.arrival_mode);
  if (s.poisson_lambda) j["poisson_lambda"] = *s.poisson_lambda;
  if (s.group2_exclusion_radius) {
    j["group2_exclusion_radius"] = *s.group2_exclusion_radius;
  }
  j["inspection_time"] = s.inspection_time;
  j["lots"] = Json::array();
  for (const auto& lot : s.lots) {
    Json l;
    l["id"] = lot.id;
    l["lon"] = lot.location.lon;
    l["lat"] = lot.location.lat;
    l["capacity"] = lot.capacity;
    l["floors"] = lot.floors;
    l["floor_capacities"] = lot.floor_capacities;
    l["ramp_length"] = lot.ramp_length;
    j["lots"].push_back(std::move(l));
  }
  j["entries"] = Json::array();
  for (const auto& e : s.entries) {
    Json l;
    l["id"] = e.id;
    l["lon"] = e.location.lon;
    l["lat"] = e.location.lat;
    j["entries"].push_back(std::move(l));
  }
  return j.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write scenario file " + path.string());
  out << serialize_scenario(s);
  if (!out) throw std::runtime_error("failed writing scenario file " + path.string());
}

Scenario generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.n_lots < 1) throw std::invalid_argument("n_lots must be >= 1");
  if (spec.n_entries < 1) throw std::invalid_argument("n_entries must be >= 1");
  if (spec.total_capacity < spec.n_lots) {
    throw std::invalid_argument("total_capacity must be >= n_lots");
  }
  if (spec.max_floors < 1) throw std::invalid_argument("max_floors must be >= 1");
  if (!(spec.destination_inset >= 0.0 && spec.destination_inset < 1.0)) {
    throw std::invalid_argument("destination_inset must be in [0, 1)");
  }
  const GeoPoint sw = spec.region.south_west;
  const GeoPoint ne = spec.region.north_east;
  if (!geo::is_valid(sw) || !geo::is_valid(ne) || !(ne.lon > sw.lon) ||
      !(ne.lat > sw.lat)) {
    throw std::invalid_argument("region must have positive area");
  }
  const int vehicles =
      spec.vehicle_count < 0 ? spec.total_capacity : spec.vehicle_count;
  if (vehicles > spec.total_capacity) {
    throw std::invalid_argument("vehicle_count exceeds total_capacity");
  }

  Rng rng(derive_seed(seed, streams::kSynthetic));
  Scenario s;
  s.region = spec.region;
  s.vehicle_count = vehicles;
  const double dlon = ne.lon - sw.lon;
  const double dlat = ne.lat - sw.lat;

  // Capacity weights in [0.5, 1.5) and a largest-remainder split, so every
  // lot gets at least one space and the total is exact.
  std::vector<double> weights(spec.n_lots);
  for (auto& w : weights) w = 0.5 + uniform01(rng);
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const int spare = spec.total_capacity - spec.n_lots;
  std::vector<int> caps(spec.n_lots, 1);
  std::vector<std::pair<double, int>> remainders;
  int given = 0;
  for (int i = 0; i < spec.n_lots; ++i) {
    const double share = spare * weights[i] / wsum;
    const int whole = static_cast<int>(std::floor(share));
    caps[i] += whole;
    given += whole;
    remainders.emplace_back(share - whole, i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int r = 0; r < spare - given; ++r) ++caps[remainders[r].second];

  for (int i = 0; i < spec.n_lots; ++i) {
    ParkingLot lot;
    lot.id = i + 1;
    lot.location = GeoPoint{sw.lon + dlon * uniform01(rng),
                            sw.lat + dlat * uniform01(rng)};
    lot.capacity = caps[i];
    // Larger lots become garages with up to max_floors levels.
    const int floors = std::clamp(caps[i] / 150 + 1, 1, spec.max_floors);
    lot.floors = floors;
    lot.floor_capacities.assign(floors, caps[i] / floors);
    for (int f = 0; f < caps[i] % floors; ++f) ++lot.floor_capacities[f];
    lot.ramp_length = floors > 1 ? 40.0 : 0.0;
    s.lots.push_back(std::move(lot));
  }

  s.destination = GeoPoint{ne.lon - spec.destination_inset * dlon,
                           sw.lat + 0.5 * dlat};

  // Entries evenly spaced along the perimeter (in lon/lat parameter space),
  // offset by half a spacing so none sits on a corner.
  const double perimeter = 2.0 * (dlon + dlat);
  for (int e = 0; e < spec.n_entries; ++e) {
    double t = perimeter * (e + 0.5) / spec.n_entries;
    GeoPoint p;
    if (t < dlon) {
      p = {sw.lon + t, sw.lat};
    } else if ((t -= dlon) < dlat) {
      p = {ne.lon, sw.lat + t};
    } else if ((t -= dlat) < dlon) {
      p = {ne.lon - t, ne.lat};
    } else {
      t -= dlon;
      p = {sw.lon, ne.lat - std::min(t, dlat)};
    }
    s.entries.push_back(EntryLink{e + 1, p});
  }

  const ScenarioGeometry g = build_geometry(s);
  s.group2_exclusion_radius = g.group2_exclusion_radius;
  return s;
}

double default_exclusion_radius(const std::vector<double>& lot_dest) {
  if (lot_dest.empty()) return 0.0;
  std::vector<double> sorted = lot_dest;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.25 * static_cast<double>(sorted.size())));
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

ScenarioGeometry build_geometry(const Scenario& s) {
  ScenarioGeometry g;
  for (const auto& lot : s.lots) g.lots.push_back(geo::miller_project(lot.location));
  for (const auto& e : s.entries) g.entries.push_back(geo::miller_project(e.location));
  g.destination = geo::miller_project(s.destination);
  const PlanePoint a = geo::miller_project(s.region.south_west);
  const PlanePoint b = geo::miller_project(s.region.north_east);
  g.region_min = {std::min(a.x, b.x), std::min(a.y, b.y)};
  g.region_max = {std::max(a.x, b.x), std::max(a.y, b.y)};
  g.distances = build_distance_matrix(g.lots, g.entries, g.destination);
  g.group2_exclusion_radius = s.group2_exclusion_radius.value_or(
      default_exclusion_radius(g.distances.lot_dest()));
  return g;
}

}  // namespace parkassign
