#pragma once

#include "hems/methods.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hems {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_validation = 2, exit_runtime = 3 };

/// Everything `schedule` reports about one run.
struct RunReport {
    std::string method;
    std::uint64_t seed = 0;
    std::size_t budget = 0;
    ObjectiveVector objectives;                                   // on the metered load
    std::vector<std::pair<std::string, LoadProfile>> appliances; // kW per slot, per appliance
    StoragePlan storage;
    LoadProfile total;
    std::optional<double> par; // empty when the metered load is all zero
    double wall_seconds = 0.0;
};

/// Per-appliance power table of a schedule, inflexible first, then flexible,
/// then shiftable.
std::vector<std::pair<std::string, LoadProfile>> appliance_table(const Scenario& s, const ScheduleGenome& g);

RunReport make_run_report(const Scenario& s, const MethodResult& r, const RunSettings& settings, double wall_seconds);

/// Percentage change of `value` relative to `reference` (positive = larger).
double percent_change(double value, double reference);

/// Entry point of the `hems` tool. Returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hems
