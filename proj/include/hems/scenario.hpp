#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hems {

using LoadProfile = std::vector<double>;

/// Day split into equal slots. Only (24, 1 h), (48, 0.5 h) and (96, 0.25 h)
/// are accepted.
struct TimeHorizon {
    std::size_t slot_count = 24;
    double slot_hours = 1.0;
};

struct PriceSignal {
    std::vector<double> prices; // currency per kWh, one per slot
};

/// Fixed time of use and fixed power.
struct InflexibleAppliance {
    std::string id;
    LoadProfile load; // kW per slot
};

/// Power is a decision variable in (p_min, p_max] on every slot of
/// [start_slot, end_slot] and zero elsewhere. Slots are 0-based.
struct FlexibleAppliance {
    std::string id;
    double p_min = 0.0;
    double p_max = 0.0;
    std::size_t start_slot = 0;
    std::size_t end_slot = 0;

    std::size_t window_length() const { return end_slot - start_slot + 1; }
};

/// Runs at rated power for `duration` slots chosen inside
/// [window_start, window_end]. Slots are 0-based.
struct ShiftableAppliance {
    std::string id;
    double rated_power = 0.0;
    std::size_t window_start = 0;
    std::size_t window_end = 0;
    std::size_t duration = 1;

    std::size_t window_length() const { return window_end - window_start + 1; }
    /// Number of distinct contiguous placements.
    std::size_t start_choices() const { return window_length() - duration + 1; }
};

/// Battery model parameters. `alpha` is per-slot retention, `beta_plus` the
/// charge efficiency, `beta_minus` the discharge factor (>= 1).
struct BatteryParams {
    double alpha = 1.0;
    double beta_plus = 1.0;
    double beta_minus = 1.0;
    double s_max = 0.0; // kW
    double b_min = 0.0; // kWh
    double b_max = 0.0; // kWh
    double b_init = 0.0; // kWh
};

/// Raw, unvalidated scenario contents.
struct ScenarioSpec {
    TimeHorizon horizon;
    PriceSignal prices;
    std::vector<InflexibleAppliance> inflexible;
    std::vector<FlexibleAppliance> flexible;
    std::vector<ShiftableAppliance> shiftable;
    BatteryParams battery;
};

/// Immutable, validated problem instance. Construction checks every
/// invariant and throws ValidationError naming the offending field.
class Scenario {
public:
    explicit Scenario(ScenarioSpec spec);

    const TimeHorizon& horizon() const noexcept { return spec_.horizon; }
    std::size_t slot_count() const noexcept { return spec_.horizon.slot_count; }
    double slot_hours() const noexcept { return spec_.horizon.slot_hours; }
    const PriceSignal& prices() const noexcept { return spec_.prices; }
    const std::vector<InflexibleAppliance>& inflexible() const noexcept { return spec_.inflexible; }
    const std::vector<FlexibleAppliance>& flexible() const noexcept { return spec_.flexible; }
    const std::vector<ShiftableAppliance>& shiftable() const noexcept { return spec_.shiftable; }
    const BatteryParams& battery() const noexcept { return spec_.battery; }
    const ScenarioSpec& spec() const noexcept { return spec_; }

    /// Sum of all inflexible loads per slot.
    const LoadProfile& base_load() const noexcept { return base_load_; }

private:
    ScenarioSpec spec_;
    LoadProfile base_load_;
};

void validate(const ScenarioSpec& spec);

/// |H| x (|A_F| + 1) + sum over shiftable appliances of their window length.
std::size_t decision_variable_count(const Scenario& s);

/// Default initial charge when a scenario file omits it.
double default_b_init(double b_min, double b_max);

/// Reads a scenario document. Relative price CSV paths resolve against the
/// document's directory.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});

/// Reads a `slot,price` CSV with exactly `slot_count` rows.
PriceSignal load_price_csv(const std::filesystem::path& path, std::size_t slot_count);
PriceSignal parse_price_csv(const std::string& text, std::size_t slot_count);

/// Returns a copy of `s` with its price signal replaced.
Scenario with_prices(const Scenario& s, PriceSignal prices);

/// Returns a copy of `s` with shiftable appliance `index` moved to a window
/// starting at `window_start` (same window length and duration).
Scenario with_shiftable_window(const Scenario& s, std::size_t index, std::size_t window_start);

/// Built-in household: fourteen fixed appliances, one air conditioner, one
/// washing machine and a lithium-ion battery, priced with a two-tier tariff.
/// `washer_start` is the 0-based first slot of the washing-machine window.
Scenario table1_scenario(std::size_t washer_start = 9);

/// Two-tier day-ahead tariff in cents/kWh: `peak` for slots starting in
/// [07:00, 21:00), `off_peak` otherwise. Works for any supported horizon.
PriceSignal two_tier_prices(const TimeHorizon& horizon, double off_peak = 6.0, double peak = 12.0);

} // namespace hems
