#pragma once

#include "hems/baselines.hpp"
#include "hems/hybrid.hpp"

#include <string>
#include <vector>

namespace hems {

/// Knobs shared by every scheduler when run by name.
struct RunSettings {
    std::uint64_t seed = 0;
    std::size_t budget = 25000; // objective evaluations
    double epsilon = kDefaultEpsilon;
    double omega = 0.5; // weighted-sum only
    double k1 = 1e3;    // penalty weight
    std::size_t workers = 1;
};

struct MethodResult {
    std::string method;
    DispatchPlan plan;
    /// Final archive as searched (for the hybrid: battery-free objectives).
    std::vector<ObjectiveVector> archive;
    /// Non-dominated metered-load objectives reachable by the method.
    std::vector<ObjectiveVector> front;
    std::vector<ConvergenceRecord> convergence;
};

/// Registered scheduler names: hybrid, weighted-sum (uses RunSettings::omega),
/// ws0, ws0.5, ws1 (weighted-sum at a fixed omega), moia, nsga2, moead.
const std::vector<std::string>& method_names();
bool is_method(const std::string& name);

OptimizerConfig optimizer_config(const RunSettings& r);

/// Runs a scheduler by name. Throws ValidationError for an unknown name.
MethodResult run_method(const Scenario& s, const std::string& name, const RunSettings& r);

} // namespace hems
