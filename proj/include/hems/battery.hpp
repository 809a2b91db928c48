#pragma once

#include "hems/scenario.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hems {

/// Absolute tolerance for battery bound and recursion checks.
inline constexpr double kBatteryTolerance = 1e-9;

/// Default dead band of the smoothing controller, kW.
inline constexpr double kDefaultEpsilon = 1e-3;

/// Charge/discharge profile over a day. `s[h]` is kW drawn by the battery in
/// slot h (positive charges, negative discharges); `b[h]` is the stored
/// energy at the start of slot h, so `b` has one more entry than `s`.
struct StoragePlan {
    std::vector<double> s;
    std::vector<double> b;
};

/// Efficiency applied to a transfer of sign `s_now`: beta_plus when
/// charging, beta_minus when discharging, 1 when idle.
double efficiency(double s_now, const BatteryParams& p);

/// B(h+1) = alpha B(h) + beta(h) S(h) slot_hours. Throws BoundError when the
/// transfer exceeds the rate limit or the result leaves [b_min, b_max].
double step_battery(double b_now, double s_now, const BatteryParams& p, double slot_hours = 1.0);

/// Reachable next-slot energy: [max(b_min, alpha b - s_max dt), min(b_max, alpha b + s_max dt)].
std::pair<double, double> admissible_range(double b_now, const BatteryParams& p, double slot_hours = 1.0);

/// Deterministic smoothing rule. For every slot the controller compares the
/// appliance load with the metered total of the previous slot; inside the
/// dead band `epsilon` it idles, otherwise it charges on a drop and
/// discharges on a rise, each clipped to the rate limit, the remaining
/// headroom and (for discharge) the appliance load itself. The first slot has
/// no predecessor and idles. Whenever leakage alone would take the battery
/// below b_min, it charges at least enough to stay at b_min.
StoragePlan smoothing_controller(std::span<const double> appliance, const BatteryParams& p, double epsilon,
    double slot_hours = 1.0);

/// Lists every violated storage invariant (capacity bounds, rate limit,
/// reachable range, state recursion, no grid export). Empty when valid.
std::vector<std::string> audit_storage(const StoragePlan& plan, std::span<const double> appliance,
    const BatteryParams& p, double slot_hours = 1.0);

} // namespace hems
