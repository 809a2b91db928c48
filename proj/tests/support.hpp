#pragma once

#include "hems/rng.hpp"
#include "hems/scenario.hpp"

#include <cmath>
#include <random>

namespace hems::testing {

inline BatteryParams ideal_battery(double b_min, double b_max, double b_init, double s_max)
{
    BatteryParams b;
    b.alpha = 1.0;
    b.beta_plus = 1.0;
    b.beta_minus = 1.0;
    b.s_max = s_max;
    b.b_min = b_min;
    b.b_max = b_max;
    b.b_init = b_init;
    return b;
}

/// Battery that can barely move: zero floor, empty start, tiny rate.
inline BatteryParams negligible_battery()
{
    return ideal_battery(0.0, 1e-6, 0.0, 1e-12);
}

/// 24 one-hour slots, given prices, no appliances.
inline ScenarioSpec empty_spec(std::vector<double> prices, BatteryParams battery)
{
    ScenarioSpec spec;
    spec.horizon = {prices.size(), 24.0 / static_cast<double>(prices.size())};
    spec.prices.prices = std::move(prices);
    spec.battery = battery;
    return spec;
}

inline std::vector<double> flat(std::size_t n, double v) { return std::vector<double>(n, v); }

/// Random valid scenario. Horizons, fleets, prices and battery parameters
/// all vary; a few slots may carry no appliance load at all.
inline Scenario random_scenario(Rng& rng, bool allow_fine_horizons = true)
{
    auto u = [&](double lo, double hi) { return lo + uniform01(rng) * (hi - lo); };
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    ScenarioSpec spec;
    const std::size_t kind = allow_fine_horizons ? pick(0, 9) : 0;
    spec.horizon = kind == 8 ? TimeHorizon{48, 0.5} : kind == 9 ? TimeHorizon{96, 0.25} : TimeHorizon{24, 1.0};
    const std::size_t n = spec.horizon.slot_count;

    spec.prices.prices.resize(n);
    const double base_price = u(0.0, 20.0);
    for (auto& p : spec.prices.prices)
        p = pick(0, 9) == 0 ? 0.0 : base_price * u(0.2, 2.0);

    for (std::size_t i = 0, k = pick(0, 4); i < k; ++i) {
        InflexibleAppliance a{"fixed" + std::to_string(i), LoadProfile(n, 0.0)};
        const double kw = u(0.01, 2.0);
        for (auto& x : a.load)
            x = pick(0, 2) == 0 ? 0.0 : kw;
        spec.inflexible.push_back(std::move(a));
    }
    for (std::size_t i = 0, k = pick(0, 2); i < k; ++i) {
        FlexibleAppliance a;
        a.id = "flex" + std::to_string(i);
        a.p_min = pick(0, 3) == 0 ? 0.0 : u(0.0, 1.5);
        a.p_max = a.p_min + u(0.05, 2.5);
        a.start_slot = pick(0, n - 2);
        a.end_slot = pick(a.start_slot + 1, n - 1);
        spec.flexible.push_back(a);
    }
    for (std::size_t i = 0, k = pick(0, 2); i < k; ++i) {
        ShiftableAppliance c;
        c.id = "shift" + std::to_string(i);
        c.rated_power = u(0.1, 3.0);
        c.window_start = pick(0, n - 2);
        c.window_end = pick(c.window_start + 1, std::min(n - 1, c.window_start + 12));
        c.duration = pick(1, std::min<std::size_t>(4, c.window_length()));
        spec.shiftable.push_back(c);
    }

    BatteryParams& b = spec.battery;
    b.alpha = pick(0, 3) == 0 ? 1.0 : u(0.95, 1.0);
    b.beta_plus = u(0.7, 1.0);
    b.beta_minus = u(1.0, 1.3);
    b.s_max = u(0.05, 2.0);
    b.b_min = u(0.0, 2.0);
    b.b_max = b.b_min + u(0.1, 5.0);
    b.b_init = u(b.b_min, b.b_max);
    // Keep leakage from the floor recoverable within one slot.
    const double limit = b.beta_plus * b.s_max * spec.horizon.slot_hours;
    if ((1.0 - b.alpha) * b.b_min > limit)
        b.alpha = 1.0 - 0.5 * limit / b.b_min;
    return Scenario(std::move(spec));
}

/// Shiftable-only scenario with a small enumerable decision space.
inline Scenario random_shiftable_scenario(Rng& rng)
{
    auto u = [&](double lo, double hi) { return lo + uniform01(rng) * (hi - lo); };
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    ScenarioSpec spec;
    spec.horizon = {24, 1.0};
    spec.prices.prices.resize(24);
    for (auto& p : spec.prices.prices)
        p = static_cast<double>(pick(1, 20));
    InflexibleAppliance base{"base", LoadProfile(24, 0.0)};
    for (auto& x : base.load)
        x = std::round(u(0.0, 3.0) * 4.0) / 4.0;
    spec.inflexible.push_back(std::move(base));
    for (std::size_t i = 0, k = pick(1, 3); i < k; ++i) {
        ShiftableAppliance c;
        c.id = "shift" + std::to_string(i);
        c.rated_power = std::round(u(0.5, 3.0) * 4.0) / 4.0;
        c.window_start = pick(0, 14);
        c.window_end = c.window_start + pick(3, 9);
        c.duration = pick(1, 3);
        spec.shiftable.push_back(c);
    }
    spec.battery = negligible_battery();
    return Scenario(std::move(spec));
}

} // namespace hems::testing
