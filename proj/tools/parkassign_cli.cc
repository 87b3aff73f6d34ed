// parkassign: generate scenarios, solve the optimal assignment, simulate
// driver search behavior and compare search strategies.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parkassign/arrivals.h"
#include "parkassign/assign.h"
#include "parkassign/io.h"
#include "parkassign/metrics.h"
#include "parkassign/scenario.h"
#include "parkassign/sim.h"

namespace fs = std::filesystem;
using namespace parkassign;

namespace {

struct GlobalOptions {
  std::string scenario;
  std::uint64_t seed = 1;
  int runs = 10;
  std::string out = "out";
  std::string arrival_mode;
  std::string mix;
  double random_fraction = -1.0;
  bool quiet = false;
  unsigned threads = 0;
};

class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string minutes(double seconds) { return io::fixed(seconds / 60.0, 1); }

Scenario load_with_overrides(const GlobalOptions& opt) {
  if (opt.scenario.empty()) throw std::invalid_argument("--scenario is required");
  Scenario s = load_scenario(opt.scenario);
  if (!opt.arrival_mode.empty()) {
    auto mode = parse_arrival_mode(opt.arrival_mode);
    if (!mode) throw std::invalid_argument("--arrival-mode must be poisson or uniform");
    s.arrival_mode = *mode;
  }
  if (!opt.mix.empty()) {
    std::vector<double> w;
    std::stringstream ss(opt.mix);
    for (std::string part; std::getline(ss, part, ',');) w.push_back(std::stod(part));
    if (w.size() != 4) throw std::invalid_argument("--mix needs four comma-separated weights");
    for (int g = 0; g < 4; ++g) s.strategy_mix[g] = w[g];
  }
  if (opt.random_fraction >= 0.0) s.random_fraction = opt.random_fraction;
  if (auto v = validate(s); !v.empty()) throw ScenarioValidationError(std::move(v));
  return s;
}

void write_profiles_csv(const std::vector<DriverProfile>& profiles,
                        const fs::path& path) {
  std::string out = "vehicle_id,group,tolerance_s\n";
  for (const auto& p : profiles) {
    out += std::to_string(p.vehicle_id) + "," + to_string(p.group) + "," +
           io::shortest(p.tolerance_budget) + "\n";
  }
  io::write_text(path, out);
}

int cmd_generate(const GlobalOptions& opt, const SyntheticSpec& spec,
                 const std::string& output) {
  const Scenario s = generate_synthetic(spec, opt.seed);
  fs::path path = output.empty() ? fs::path(opt.out) / "scenario.json" : fs::path(output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_scenario(s, path);
  if (auto v = validate(load_scenario(path)); !v.empty()) {
    throw ValidationFailure("generated scenario failed validation");
  }
  if (!opt.quiet) {
    std::cout << "wrote " << path.string() << ": " << s.lots.size() << " lots, "
              << s.total_capacity() << " spaces, " << s.entries.size()
              << " entries, " << s.vehicle_count << " vehicles\n";
  }
  return 0;
}

int cmd_solve(const GlobalOptions& opt) {
  const Scenario s = load_with_overrides(opt);
  const ScenarioGeometry g = build_geometry(s);
  const ArrivalSchedule sched = sample_arrivals(s, replication_seed(opt.seed, 1));
  const AssignmentProblem p = build_problem(s, g, sched);
  const Assignment a = solve_exact(p);

  if (assignment_cost(a, p) != a.total_cost_ms) {
    throw ValidationFailure("objective recomputation disagrees with solver");
  }
  if (!certify_optimal(a, p)) throw ValidationFailure("optimality certificate failed");

  fs::create_directories(opt.out);
  write_assignment_csv(a, p, fs::path(opt.out) / "assignment.csv");
  if (!opt.quiet) {
    const double mean = p.vehicle_count > 0 ? a.total_cost / p.vehicle_count : 0.0;
    std::cout << "optimal assignment: " << p.vehicle_count << " vehicles, total "
              << minutes(a.total_cost) << " min, mean " << minutes(mean)
              << " min per vehicle\n";
  }
  return 0;
}

void check_runs(const Scenario& s, const std::vector<Replication>& reps) {
  for (const auto& rep : reps) {
    auto problems = replay_check(s, rep.run);
    if (!problems.empty()) {
      throw ValidationFailure("replication " + std::to_string(rep.index) +
                              ": " + problems.front());
    }
    if (s.vehicle_count == s.total_capacity()) {
      const auto f = lot_failures(rep.run, s);
      if (f.total_failed != f.total_unused) {
        throw ValidationFailure("failed searches do not match unused spaces");
      }
    }
  }
}

int cmd_simulate(const GlobalOptions& opt, bool write_logs) {
  const Scenario s = load_with_overrides(opt);
  if (opt.runs < 1) throw std::invalid_argument("--runs must be >= 1");
  RunManyOptions ro;
  ro.replications = opt.runs;
  ro.seed_base = opt.seed;
  ro.record_events = true;
  ro.threads = opt.threads;
  const RunManyResult res = run_many(s, ro);
  check_runs(s, res.replications);

  const fs::path out(opt.out);
  fs::create_directories(out);
  const MetricsReport report = build_report(s, res.replications);
  emit_report(report, ReportFormat::kCsv, out);
  emit_report(report, ReportFormat::kJson, out / "report.json");
  write_profiles_csv(res.replications.front().profiles, out / "profiles.csv");
  write_arrivals_csv(res.replications.front().schedule, out / "arrivals.csv");
  if (write_logs) {
    for (const auto& rep : res.replications) {
      write_event_log(rep.run, s, out / ("events_r" + std::to_string(rep.index) + ".csv"));
    }
  }
  if (!opt.quiet) {
    std::cout << "replications: " << opt.runs << "\n"
              << "average rerouting: " << io::fixed(report.avg_rerouting_min, 1)
              << " min per parked vehicle\n"
              << "failed searches: "
              << io::fixed(static_cast<double>(report.abandoned_total) / opt.runs, 1)
              << " per replication\n";
  }
  return 0;
}

int cmd_compare(const GlobalOptions& opt) {
  const Scenario s = load_with_overrides(opt);
  if (opt.runs < 1) throw std::invalid_argument("--runs must be >= 1");
  const auto rows = compare_methods(s, opt.runs, opt.seed);
  fs::create_directories(opt.out);
  write_comparison_csv(rows, fs::path(opt.out) / "comparison.csv");
  if (!opt.quiet) {
    std::printf("%-12s %15s %13s\n", "method", "rerouting(min)", "failures/run");
    for (const auto& r : rows) {
      std::printf("%-12s %15s %13s\n", r.method.c_str(),
                  io::fixed(r.mean_rerouting_min, 1).c_str(),
                  io::fixed(r.mean_failures, 1).c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parking assignment for large events: optimal lot assignment "
               "and heterogeneous search simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opt;
  app.add_option("--scenario", opt.scenario, "Scenario file (JSON with comments)");
  app.add_option("--seed", opt.seed, "Random seed (64-bit)")->capture_default_str();
  app.add_option("--runs", opt.runs, "Number of replications")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out", opt.out, "Output directory")->capture_default_str();
  app.add_option("--arrival-mode", opt.arrival_mode,
                 "Override arrival mode: poisson or uniform")
      ->check(CLI::IsMember({"poisson", "uniform"}));
  app.add_option("--mix", opt.mix, "Override strategy weights g1,g2,g3,g4");
  app.add_option("--random-fraction", opt.random_fraction,
                 "Override the share of drivers choosing lots at random")
      ->check(CLI::Range(0.0, 1.0));
  app.add_flag("--quiet", opt.quiet, "Suppress the summary");
  app.add_option("--threads", opt.threads,
                 "Worker threads for replications (0 = all cores)");

  SyntheticSpec spec;
  std::string output;
  auto* generate = app.add_subcommand("generate", "Write a synthetic scenario");
  generate->add_option("--lots", spec.n_lots, "Number of lots")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  generate->add_option("--capacity", spec.total_capacity, "Total spaces")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  generate->add_option("--entries", spec.n_entries, "Number of entry links")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  generate->add_option("--vehicles", spec.vehicle_count,
                       "Vehicle demand (default: equal to capacity)");
  generate->add_option("--max-floors", spec.max_floors, "Most floors per lot")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  generate->add_option("-o,--output", output,
                       "Scenario path (default: <out>/scenario.json)");

  app.add_subcommand("solve", "Solve the optimal assignment, write assignment.csv");
  bool write_logs = false;
  auto* simulate = app.add_subcommand(
      "simulate", "Run replications and write rerouting, failure and "
                  "convergence reports");
  simulate->add_flag("--log", write_logs, "Also write per-replication event logs");
  app.add_subcommand("compare", "Compare G3-only, G4-only and the combined mix");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (name == "generate") return cmd_generate(opt, spec, output);
    if (name == "solve") return cmd_solve(opt);
    if (name == "simulate") return cmd_simulate(opt, write_logs);
    if (name == "compare") return cmd_compare(opt);
  } catch (const ValidationFailure& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
