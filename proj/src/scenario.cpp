#include "hems/scenario.hpp"

#include "hems/errors.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace hems {

namespace {

bool finite(double x) { return std::isfinite(x); }

template <class T>
std::string str(const T& v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

void require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok)
        throw ValidationError(field, what);
}

void validate_horizon(const TimeHorizon& h)
{
    constexpr std::array<std::pair<std::size_t, double>, 3> supported{{{24, 1.0}, {48, 0.5}, {96, 0.25}}};
    for (const auto& [count, hours] : supported) {
        if (h.slot_count == count && h.slot_hours == hours)
            return;
    }
    throw ValidationError("horizon",
        "unsupported (slot_count, slot_hours) = (" + str(h.slot_count) + ", " + str(h.slot_hours) +
            "); expected (24, 1), (48, 0.5) or (96, 0.25)");
}

void validate_battery(const BatteryParams& b, double slot_hours)
{
    require(finite(b.alpha) && b.alpha > 0.0 && b.alpha <= 1.0, "battery.alpha", "must lie in (0, 1], got " + str(b.alpha));
    require(finite(b.beta_plus) && b.beta_plus > 0.0 && b.beta_plus <= 1.0, "battery.beta_plus",
        "must lie in (0, 1], got " + str(b.beta_plus));
    require(finite(b.beta_minus) && b.beta_minus >= 1.0, "battery.beta_minus", "must be >= 1, got " + str(b.beta_minus));
    require(finite(b.s_max) && b.s_max > 0.0, "battery.s_max", "must be > 0, got " + str(b.s_max));
    require(finite(b.b_min) && b.b_min >= 0.0, "battery.b_min", "must be >= 0, got " + str(b.b_min));
    require(finite(b.b_max) && b.b_max > b.b_min, "battery.b_min/b_max",
        "b_min (" + str(b.b_min) + ") must be below b_max (" + str(b.b_max) + ")");
    require(finite(b.b_init) && b.b_init >= b.b_min && b.b_init <= b.b_max, "battery.b_init",
        "must lie in [b_min, b_max], got " + str(b.b_init));
    // Leakage from the floor must be recoverable within one slot, otherwise
    // B(h) >= b_min cannot be held.
    require((1.0 - b.alpha) * b.b_min <= b.beta_plus * b.s_max * slot_hours, "battery.alpha",
        "leakage (1 - alpha) * b_min exceeds the per-slot charge limit beta_plus * s_max * slot_hours");
}

} // namespace

void validate(const ScenarioSpec& spec)
{
    validate_horizon(spec.horizon);
    const std::size_t n = spec.horizon.slot_count;

    require(spec.prices.prices.size() == n, "prices",
        "expected " + str(n) + " entries, got " + str(spec.prices.prices.size()));
    for (std::size_t h = 0; h < n; ++h) {
        const double p = spec.prices.prices[h];
        require(finite(p) && p >= 0.0, "prices[" + str(h) + "]", "must be finite and >= 0, got " + str(p));
    }

    for (std::size_t i = 0; i < spec.inflexible.size(); ++i) {
        const auto& a = spec.inflexible[i];
        const std::string f = "inflexible[" + str(i) + "]";
        require(a.load.size() == n, f + ".load", "expected " + str(n) + " entries, got " + str(a.load.size()));
        for (std::size_t h = 0; h < n; ++h)
            require(finite(a.load[h]) && a.load[h] >= 0.0, f + ".load[" + str(h) + "]",
                "must be finite and >= 0, got " + str(a.load[h]));
    }

    for (std::size_t i = 0; i < spec.flexible.size(); ++i) {
        const auto& a = spec.flexible[i];
        const std::string f = "flexible[" + str(i) + "]";
        require(finite(a.p_min) && a.p_min >= 0.0, f + ".p_min", "must be finite and >= 0, got " + str(a.p_min));
        require(finite(a.p_max) && a.p_max > a.p_min, f + ".p_min/p_max",
            "p_min (" + str(a.p_min) + ") must be below p_max (" + str(a.p_max) + ")");
        require(a.start_slot < a.end_slot, f + ".start/end", "start slot must precede end slot");
        require(a.end_slot < n, f + ".end", "end slot outside the horizon");
    }

    for (std::size_t i = 0; i < spec.shiftable.size(); ++i) {
        const auto& a = spec.shiftable[i];
        const std::string f = "shiftable[" + str(i) + "]";
        require(finite(a.rated_power) && a.rated_power > 0.0, f + ".power", "must be > 0, got " + str(a.rated_power));
        require(a.window_start < a.window_end, f + ".window_start/window_end", "window start must precede window end");
        require(a.window_end < n, f + ".window_end", "window end outside the horizon");
        require(a.duration >= 1 && a.duration <= a.window_end - a.window_start + 1, f + ".duration",
            "duration " + str(a.duration) + " does not fit a window of " + str(a.window_end - a.window_start + 1) +
                " slots");
    }

    validate_battery(spec.battery, spec.horizon.slot_hours);
}

Scenario::Scenario(ScenarioSpec spec) : spec_(std::move(spec))
{
    validate(spec_);
    base_load_.assign(spec_.horizon.slot_count, 0.0);
    for (const auto& a : spec_.inflexible)
        for (std::size_t h = 0; h < base_load_.size(); ++h)
            base_load_[h] += a.load[h];
}

std::size_t decision_variable_count(const Scenario& s)
{
    std::size_t count = s.slot_count() * (s.flexible().size() + 1);
    for (const auto& c : s.shiftable())
        count += c.window_length();
    return count;
}

double default_b_init(double b_min, double b_max) { return 0.5 * (b_min + b_max); }

Scenario with_prices(const Scenario& s, PriceSignal prices)
{
    ScenarioSpec spec = s.spec();
    spec.prices = std::move(prices);
    return Scenario(std::move(spec));
}

Scenario with_shiftable_window(const Scenario& s, std::size_t index, std::size_t window_start)
{
    ScenarioSpec spec = s.spec();
    if (index >= spec.shiftable.size())
        throw ValidationError("shiftable", "no shiftable appliance at index " + str(index));
    auto& c = spec.shiftable[index];
    const std::size_t span = c.window_end - c.window_start;
    c.window_start = window_start;
    c.window_end = window_start + span;
    return Scenario(std::move(spec));
}

PriceSignal two_tier_prices(const TimeHorizon& horizon, double off_peak, double peak)
{
    PriceSignal p;
    p.prices.resize(horizon.slot_count);
    for (std::size_t h = 0; h < horizon.slot_count; ++h) {
        const double t = static_cast<double>(h) * horizon.slot_hours;
        p.prices[h] = (t >= 7.0 && t < 21.0) ? peak : off_peak;
    }
    return p;
}

Scenario table1_scenario(std::size_t washer_start)
{
    // Rated powers of the reference household; each runs all day.
    const std::vector<std::pair<const char*, double>> fleet{
        {"a1", 0.015}, {"a2", 0.15}, {"a3", 0.02}, {"a4", 0.15}, {"a5", 0.9}, {"a6", 1.3}, {"a7", 0.2},
        {"a8", 0.1}, {"a9", 0.05}, {"a10", 1.5}, {"a11", 1.4}, {"a12", 0.2}, {"a13", 0.8}, {"a14", 0.5},
    };

    ScenarioSpec spec;
    spec.horizon = {24, 1.0};
    spec.prices = two_tier_prices(spec.horizon);
    for (const auto& [id, kw] : fleet)
        spec.inflexible.push_back({id, LoadProfile(24, kw)});
    spec.flexible.push_back({"air_conditioner", 1.0, 3.0, 0, 23});
    spec.shiftable.push_back({"washing_machine", 1.0, washer_start, washer_start + 7, 1});
    spec.battery.alpha = std::pow(0.9, 1.0 / 24.0);
    spec.battery.beta_plus = 0.9;
    spec.battery.beta_minus = 1.1;
    spec.battery.s_max = 0.5;
    spec.battery.b_min = 1.0;
    spec.battery.b_max = 4.0;
    spec.battery.b_init = default_b_init(1.0, 4.0);
    return Scenario(std::move(spec));
}

} // namespace hems
