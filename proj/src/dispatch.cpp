#include "hems/dispatch.hpp"

#include "hems/errors.hpp"

#include <cmath>

namespace hems {

DispatchPlan assemble_plan(const Scenario& s, ScheduleGenome genome, StoragePlan storage)
{
    DispatchPlan plan;
    plan.appliance = appliance_load(s, genome);
    plan.genome = std::move(genome);
    plan.storage = std::move(storage);
    plan.total = total_load(plan.appliance, plan.storage.s);
    plan.objectives = evaluate_profile(s, plan.total);
    return plan;
}

std::vector<std::string> audit_plan(const Scenario& s, const DispatchPlan& plan)
{
    std::vector<std::string> issues;
    try {
        check_genome(s, plan.genome);
    } catch (const FeasibilityError& e) {
        issues.emplace_back(e.what());
        return issues;
    }
    const LoadProfile appliance = appliance_load(s, plan.genome);
    if (appliance.size() != plan.appliance.size()) {
        issues.emplace_back("appliance profile length mismatch");
        return issues;
    }
    for (std::size_t h = 0; h < appliance.size(); ++h)
        if (std::abs(appliance[h] - plan.appliance[h]) > 1e-9)
            issues.push_back("slot " + std::to_string(h) + ": appliance load inconsistent with schedule");

    auto storage_issues = audit_storage(plan.storage, appliance, s.battery(), s.slot_hours());
    issues.insert(issues.end(), storage_issues.begin(), storage_issues.end());
    if (!storage_issues.empty() || plan.total.size() != appliance.size())
        return issues;

    for (std::size_t h = 0; h < appliance.size(); ++h) {
        if (std::abs(plan.total[h] - (appliance[h] + plan.storage.s[h])) > 1e-9)
            issues.push_back("slot " + std::to_string(h) + ": total load differs from P_HA + S");
        if (plan.total[h] < -1e-9)
            issues.push_back("slot " + std::to_string(h) + ": negative metered load");
    }
    const ObjectiveVector v = evaluate_profile(s, plan.total);
    if (std::abs(v.cost - plan.objectives.cost) > 1e-9 * std::max(1.0, std::abs(v.cost)) ||
        std::abs(v.privacy - plan.objectives.privacy) > 1e-9 * std::max(1.0, v.privacy))
        issues.emplace_back("reported objectives differ from the metered load");
    return issues;
}

void require_valid_plan(const Scenario& s, const DispatchPlan& plan)
{
    const auto issues = audit_plan(s, plan);
    if (issues.empty())
        return;
    std::string msg = "infeasible plan:";
    for (const auto& i : issues)
        msg += "\n  " + i;
    throw Error(msg);
}

} // namespace hems
