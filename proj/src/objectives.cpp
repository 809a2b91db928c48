#include "hems/objectives.hpp"

#include "hems/errors.hpp"

#include <string>

namespace hems {

namespace {

constexpr double kExportTolerance = 1e-9;

void require_same_length(std::size_t a, std::size_t b, const char* what)
{
    if (a != b)
        throw Error(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

} // namespace

LoadProfile appliance_load(const Scenario& s, const ScheduleGenome& g)
{
    check_genome(s, g);
    LoadProfile load = s.base_load();
    for (std::size_t b = 0; b < s.flexible().size(); ++b) {
        const auto& a = s.flexible()[b];
        const auto& genes = g.flexible_power[b];
        for (std::size_t k = 0; k < genes.size(); ++k)
            load[a.start_slot + k] += genes[k];
    }
    for (std::size_t c = 0; c < s.shiftable().size(); ++c)
        for (std::size_t h : g.shiftable_slots[c])
            load[h] += s.shiftable()[c].rated_power;
    return load;
}

LoadProfile total_load(std::span<const double> appliance, std::span<const double> storage)
{
    require_same_length(appliance.size(), storage.size(), "total_load");
    LoadProfile total(appliance.size());
    for (std::size_t h = 0; h < total.size(); ++h) {
        total[h] = appliance[h] + storage[h];
        if (total[h] < -kExportTolerance)
            throw Error("total_load: slot " + std::to_string(h) + " exports " + std::to_string(-total[h]) +
                        " kW to the grid");
    }
    return total;
}

double cost(std::span<const double> profile, std::span<const double> prices, double slot_hours)
{
    require_same_length(profile.size(), prices.size(), "cost");
    double total = 0.0;
    for (std::size_t h = 0; h < profile.size(); ++h)
        total += profile[h] * slot_hours * prices[h];
    return total;
}

double privacy_variance(std::span<const double> profile)
{
    if (profile.empty())
        return 0.0;
    const double n = static_cast<double>(profile.size());
    double mean = 0.0;
    for (double x : profile)
        mean += x;
    mean /= n;
    // Centred form of E[x^2] - E[x]^2; stays non-negative and does not cancel
    // catastrophically on large offsets.
    double acc = 0.0;
    for (double x : profile)
        acc += (x - mean) * (x - mean);
    return acc / n;
}

ObjectiveVector normalize_objectives(const ObjectiveVector& v, const NormalizationConstants& k)
{
    return {v.cost / k.cost, v.privacy / k.privacy};
}

ObjectiveVector evaluate_profile(const Scenario& s, std::span<const double> profile)
{
    return {cost(profile, s.prices().prices, s.slot_hours()), privacy_variance(profile)};
}

} // namespace hems
