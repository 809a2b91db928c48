#pragma once

#include "hems/battery.hpp"
#include "hems/genome.hpp"
#include "hems/objectives.hpp"

#include <string>
#include <vector>

namespace hems {

/// A complete day plan: appliance schedule, battery trajectory, metered load
/// and the objectives evaluated on the metered load.
struct DispatchPlan {
    ScheduleGenome genome;
    LoadProfile appliance; // P_HA
    StoragePlan storage;
    LoadProfile total; // P = P_HA + S
    ObjectiveVector objectives;
};

/// Assembles a plan from a schedule and a storage profile, computing the
/// metered load and objectives.
DispatchPlan assemble_plan(const Scenario& s, ScheduleGenome genome, StoragePlan storage);

/// Every violated constraint of `plan` against `s`: appliance feasibility,
/// storage invariants, metered-load consistency and objective consistency.
std::vector<std::string> audit_plan(const Scenario& s, const DispatchPlan& plan);

/// Throws Error listing the violations when `audit_plan` is non-empty.
void require_valid_plan(const Scenario& s, const DispatchPlan& plan);

} // namespace hems
