#pragma once

#include "hems/methods.hpp"

#include <optional>
#include <vector>

namespace hems {

/// Per-house randomisation: shiftable appliance `appliance` gets a window
/// starting uniformly in [first_start, last_start] (0-based slots).
struct ShiftableStartDraw {
    std::size_t appliance = 0;
    std::size_t first_start = 0;
    std::size_t last_start = 0;
};

struct CommunitySpec {
    std::size_t house_count = 50;
    Scenario template_scenario;
    std::vector<ShiftableStartDraw> randomization;
    std::uint64_t seed = 0;
    std::size_t workers = 0; // 0 = hardware concurrency
};

/// The reference community: washing-machine start uniform over hours 10-13.
CommunitySpec default_community(std::size_t house_count, std::uint64_t seed);

/// House `index` of the community, with its draws applied.
Scenario community_house(const CommunitySpec& spec, std::size_t index);

struct CommunityResult {
    LoadProfile aggregate; // kW per slot, summed over houses
    double par = 0.0;
};

/// Schedules every house independently and sums metered loads in house
/// order. House seeds derive from `spec.seed`; `settings.seed` is ignored.
/// A failing house is reported with its index.
CommunityResult simulate_community(const CommunitySpec& spec, const std::string& method, RunSettings settings);

} // namespace hems
