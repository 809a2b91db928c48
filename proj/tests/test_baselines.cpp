#include "hems/baselines.hpp"
#include "hems/dispatch.hpp"
#include "hems/errors.hpp"
#include "hems/methods.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hems;
using namespace hems::testing;

namespace {

OptimizerConfig small_config(std::uint64_t seed, std::size_t evaluations = 1500)
{
    OptimizerConfig cfg;
    cfg.rng_seed = seed;
    cfg.n_nom = 20;
    cfg.n_max = 200;
    cfg.max_evaluations = evaluations;
    return cfg;
}

RunSettings small_settings(std::uint64_t seed)
{
    RunSettings r;
    r.seed = seed;
    r.budget = 1500;
    return r;
}

} // namespace

TEST_CASE("constraint violation")
{
    const StoragePlan idle{flat(3, 0.0), flat(4, 1.0)};
    CHECK(constraint_u(idle, std::vector<double>{1, 1, 1}) == 0.0);
    const StoragePlan busy{{1.2, -0.5, 0.3}, flat(4, 1.0)};
    CHECK(constraint_u(busy, std::vector<double>{1.0, 1.0, 0.1}) == doctest::Approx(0.2 + 0.2));
    CHECK_THROWS_AS(constraint_u(busy, std::vector<double>{1.0}), Error);
}

TEST_CASE("weighted sum")
{
    CHECK(scalarize({0.4 * 2400, 0.6 * 1.4}, 0.5) == doctest::Approx(0.5));
    CHECK(scalarize({7.0, 3.0}, 1.0) == 7.0);
    CHECK(scalarize({7.0, 3.0}, 0.0) == 3.0);
    CHECK(scalarize({7.0, 3.0}, 1.0) == scalarize({7.0, 99.0}, 1.0));
}

TEST_CASE("penalty inflates both objectives")
{
    CHECK(penalized({1.0, 2.0}, 0.1, 1e3) == ObjectiveVector{101.0, 102.0});
    CHECK(penalized({1.0, 2.0}, 0.0, 1e3) == ObjectiveVector{1.0, 2.0});
    PenaltyConfig p;
    CHECK_NOTHROW(p.validate());
    p.omega = 1.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("Tchebycheff decomposition")
{
    const auto w = weight_vectors(2);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == ObjectiveVector{0, 1});
    CHECK(w[1] == ObjectiveVector{1, 0});
    CHECK(tchebycheff({3, 5}, w[0], {1, 1}) == 4.0);
    CHECK(tchebycheff({3, 5}, w[1], {1, 1}) == 2.0);
    CHECK(tchebycheff({3, 5}, {0.5, 0.5}, {1, 1}) == 2.0);
    const auto five = weight_vectors(5);
    for (const auto& v : five)
        CHECK(v.cost + v.privacy == doctest::Approx(1.0));
}

TEST_CASE("sampled battery genomes respect the reachable range")
{
    Rng rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const Scenario s = random_scenario(rng);
        const BatteryGenome g = sample_battery_genome(s, ShiftableMode::contiguous, rng);
        REQUIRE(g.b.size() == s.slot_count());
        const DispatchPlan p = battery_genome_plan(s, g);
        CHECK(audit_plan(s, p).empty());
    }
}

TEST_CASE("repair redraws states that leave the reachable range")
{
    const Scenario s = table1_scenario();
    Rng rng(4);
    BatteryGenome g = sample_battery_genome(s, ShiftableMode::contiguous, rng);
    const BatteryGenome before = g;
    repair_states(s, g, rng);
    CHECK(g == before);
    g.b[5] = 100.0;
    g.b[9] = -3.0;
    repair_states(s, g, rng);
    CHECK(g.b[5] <= s.battery().b_max);
    CHECK(g.b[9] >= s.battery().b_min);
    CHECK_NOTHROW(battery_genome_plan(s, g));
    for (std::size_t h = 0; h < 5; ++h)
        CHECK(g.b[h] == before.b[h]);
}

TEST_CASE("cost-only weighted sum finds the cheapest placement")
{
    // 24 slots; the single appliance may only run in a 4-slot window.
    ScenarioSpec spec = empty_spec(flat(24, 10.0), negligible_battery());
    spec.prices.prices[8] = 7.0;
    spec.prices.prices[9] = 3.0;
    spec.prices.prices[10] = 5.0;
    spec.prices.prices[11] = 9.0;
    spec.inflexible.push_back({"base", flat(24, 1.0)});
    spec.shiftable.push_back({"c", 2.0, 8, 11, 1});
    const Scenario s(spec);
    PenaltyConfig pc;
    pc.omega = 1.0;
    const DispatchPlan p = weighted_sum_optimize(s, pc, small_config(1));
    CHECK(p.genome.shiftable_slots[0] == std::vector<std::size_t>{9});
    CHECK(audit_plan(s, p).empty());
}

TEST_CASE("every method yields audited plans and dominance-free fronts")
{
    Rng rng(77);
    for (int trial = 0; trial < 8; ++trial) {
        const Scenario s = random_scenario(rng);
        for (const auto& name : method_names()) {
            const MethodResult r = run_method(s, name, small_settings(static_cast<std::uint64_t>(trial)));
            INFO(name);
            CHECK(audit_plan(s, r.plan).empty());
            CHECK(nondominated_indices(r.front).size() == r.front.size());
            REQUIRE_FALSE(r.convergence.empty());
            CHECK(r.convergence.back().evaluations <= 1500);
        }
    }
}

TEST_CASE("methods are deterministic under a seed")
{
    const Scenario s = table1_scenario();
    for (const auto& name : method_names()) {
        const MethodResult a = run_method(s, name, small_settings(5));
        const MethodResult b = run_method(s, name, small_settings(5));
        INFO(name);
        CHECK(a.plan.total == b.plan.total);
        CHECK(a.front == b.front);
    }
}

TEST_CASE("unknown method names are rejected")
{
    CHECK_FALSE(is_method("simulated-annealing"));
    CHECK_THROWS_AS(run_method(table1_scenario(), "simulated-annealing", RunSettings{}), ValidationError);
}

TEST_CASE("penalised searches return feasible members")
{
    const Scenario s = table1_scenario();
    PenaltyConfig pc;
    for (auto variant : {PenaltyVariant::nondominated_sorting, PenaltyVariant::decomposition}) {
        const BatteryArchive a = penalty_mop_optimize(s, variant, pc, small_config(3, 3000));
        REQUIRE_FALSE(a.members.empty());
        CHECK_FALSE(feasible_front(a).empty());
        CHECK(audit_plan(s, archive_plan(s, a)).empty());
    }
    const BatteryArchive m = moia_optimize(s, small_config(3, 3000));
    CHECK_FALSE(feasible_front(m).empty());
    CHECK(audit_plan(s, archive_plan(s, m)).empty());
}
