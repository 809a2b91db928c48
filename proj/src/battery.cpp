#include "hems/battery.hpp"

#include "hems/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hems {

namespace {

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

} // namespace

double efficiency(double s_now, const BatteryParams& p)
{
    if (s_now > 0.0)
        return p.beta_plus;
    if (s_now < 0.0)
        return p.beta_minus;
    return 1.0;
}

double step_battery(double b_now, double s_now, const BatteryParams& p, double slot_hours)
{
    const double beta = efficiency(s_now, p);
    if (beta * std::abs(s_now) > p.s_max + kBatteryTolerance)
        throw BoundError("transfer " + fmt(s_now) + " kW exceeds s_max " + fmt(p.s_max) + " after efficiency " +
                         fmt(beta));
    const double next = p.alpha * b_now + beta * s_now * slot_hours;
    if (next < p.b_min - kBatteryTolerance)
        throw BoundError("next state " + fmt(next) + " kWh below b_min " + fmt(p.b_min));
    if (next > p.b_max + kBatteryTolerance)
        throw BoundError("next state " + fmt(next) + " kWh above b_max " + fmt(p.b_max));
    return std::clamp(next, p.b_min, p.b_max);
}

std::pair<double, double> admissible_range(double b_now, const BatteryParams& p, double slot_hours)
{
    const double ab = p.alpha * b_now;
    const double reach = p.s_max * slot_hours;
    return {std::max(p.b_min, ab - reach), std::min(p.b_max, ab + reach)};
}

StoragePlan smoothing_controller(std::span<const double> appliance, const BatteryParams& p, double epsilon,
    double slot_hours)
{
    if (!(epsilon > 0.0))
        throw Error("smoothing_controller: epsilon must be > 0");
    const std::size_t n = appliance.size();
    StoragePlan plan;
    plan.s.assign(n, 0.0);
    plan.b.assign(n + 1, 0.0);
    plan.b[0] = p.b_init;

    double previous_total = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
        const double ab = p.alpha * plan.b[h];
        // kW limits; energy headroom is converted through efficiency so the
        // post-state lands on the bound rather than past it.
        const double charge_cap = std::max(0.0, std::min(p.s_max, (p.b_max - ab) / (p.beta_plus * slot_hours)));
        const double discharge_cap = std::max(0.0,
            std::min({p.s_max / p.beta_minus, (ab - p.b_min) / (p.beta_minus * slot_hours), appliance[h]}));

        double s = 0.0;
        if (h > 0) {
            const double delta = appliance[h] - previous_total;
            if (delta < -epsilon)
                s = std::min(-delta, charge_cap);
            else if (delta > epsilon)
                s = -std::min(delta, discharge_cap);
        }
        if (ab < p.b_min) {
            const double needed = (p.b_min - ab) / (p.beta_plus * slot_hours);
            s = std::min(std::max(s, needed), std::max(charge_cap, needed));
        }

        plan.s[h] = s;
        plan.b[h + 1] = step_battery(plan.b[h], s, p, slot_hours);
        previous_total = appliance[h] + s;
    }
    return plan;
}

std::vector<std::string> audit_storage(const StoragePlan& plan, std::span<const double> appliance,
    const BatteryParams& p, double slot_hours)
{
    std::vector<std::string> issues;
    const std::size_t n = appliance.size();
    if (plan.s.size() != n || plan.b.size() != n + 1) {
        issues.push_back("storage plan has " + std::to_string(plan.s.size()) + " transfers and " +
                         std::to_string(plan.b.size()) + " states for " + std::to_string(n) + " slots");
        return issues;
    }
    const double tol = kBatteryTolerance;
    if (std::abs(plan.b[0] - p.b_init) > tol)
        issues.push_back("B(0) = " + fmt(plan.b[0]) + " differs from b_init " + fmt(p.b_init));
    for (std::size_t h = 0; h <= n; ++h) {
        const double b = plan.b[h];
        if (!std::isfinite(b) || b < p.b_min - tol || b > p.b_max + tol)
            issues.push_back("B(" + std::to_string(h) + ") = " + fmt(b) + " outside [b_min, b_max]");
    }
    for (std::size_t h = 0; h < n; ++h) {
        const double s = plan.s[h];
        const double beta = efficiency(s, p);
        const std::string at = "slot " + std::to_string(h) + ": ";
        if (!std::isfinite(s)) {
            issues.push_back(at + "non-finite transfer");
            continue;
        }
        if (beta * std::abs(s) > p.s_max + tol)
            issues.push_back(at + "beta*|S| = " + fmt(beta * std::abs(s)) + " exceeds s_max");
        const double ab = p.alpha * plan.b[h];
        const double reach = p.s_max * slot_hours;
        if (plan.b[h + 1] < ab - reach - tol || plan.b[h + 1] > ab + reach + tol)
            issues.push_back(at + "B(h+1) outside [alpha B - s_max, alpha B + s_max]");
        const double expected = ab + beta * s * slot_hours;
        if (std::abs(plan.b[h + 1] - expected) > tol)
            issues.push_back(at + "state recursion off by " + fmt(plan.b[h + 1] - expected));
        if (s < 0.0 && -s > appliance[h] + tol)
            issues.push_back(at + "discharge " + fmt(-s) + " kW exceeds appliance load " + fmt(appliance[h]));
    }
    return issues;
}

} // namespace hems
