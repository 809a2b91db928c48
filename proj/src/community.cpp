#include "hems/community.hpp"

#include "hems/errors.hpp"
#include "parallel.hpp"

#include <thread>

namespace hems {

CommunitySpec default_community(std::size_t house_count, std::uint64_t seed)
{
    return CommunitySpec{house_count, table1_scenario(), {{0, 9, 12}}, seed, 0};
}

Scenario community_house(const CommunitySpec& spec, std::size_t index)
{
    Scenario house = spec.template_scenario;
    Rng rng = make_rng(spec.seed, {0xc0de, index});
    for (const auto& d : spec.randomization) {
        std::uniform_int_distribution<std::size_t> start(d.first_start, d.last_start);
        house = with_shiftable_window(house, d.appliance, start(rng));
    }
    return house;
}

CommunityResult simulate_community(const CommunitySpec& spec, const std::string& method, RunSettings settings)
{
    if (spec.house_count == 0)
        throw ValidationError("houses", "must be at least 1");
    if (!is_method(method))
        throw ValidationError("method", "unknown method '" + method + "'");

    const std::size_t n = spec.template_scenario.slot_count();
    std::vector<LoadProfile> loads(spec.house_count);
    const std::size_t workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
    settings.workers = 1;
    detail::parallel_for(spec.house_count, workers, [&](std::size_t i) {
        try {
            RunSettings local = settings;
            local.seed = derive_seed(spec.seed, {0x5eed, i});
            loads[i] = run_method(community_house(spec, i), method, local).plan.total;
        } catch (const std::exception& e) {
            throw Error("house " + std::to_string(i) + ": " + e.what());
        }
    });

    CommunityResult result;
    result.aggregate.assign(n, 0.0);
    for (const auto& load : loads)
        for (std::size_t h = 0; h < n; ++h)
            result.aggregate[h] += load[h];
    result.par = par(result.aggregate);
    return result;
}

} // namespace hems
