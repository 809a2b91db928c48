#include "hems/dispatch.hpp"
#include "hems/errors.hpp"
#include "hems/hybrid.hpp"
#include "hems/objectives.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace hems;
using namespace hems::testing;

namespace {

OptimizerConfig small_config(std::uint64_t seed)
{
    OptimizerConfig cfg;
    cfg.rng_seed = seed;
    cfg.t_max = 20;
    cfg.n_max = 200;
    cfg.n_nom = 20;
    return cfg;
}

std::set<std::pair<double, double>> as_set(const std::vector<ObjectiveVector>& v)
{
    std::set<std::pair<double, double>> out;
    for (const auto& p : v)
        out.insert({p.cost, p.privacy});
    return out;
}

std::vector<ObjectiveVector> brute_force_front(const Scenario& s)
{
    std::vector<ObjectiveVector> all;
    for (const auto& g : enumerate_shiftable_schedules(s, 1u << 20))
        all.push_back(schedule_objectives(s, g));
    std::vector<ObjectiveVector> front;
    for (auto i : nondominated_indices(all))
        front.push_back(all[i]);
    return front;
}

ScheduleArchive archive_with(std::size_t n)
{
    const Scenario s = table1_scenario();
    OptimizerConfig cfg;
    Rng rng(1);
    ScheduleArchive a;
    for (std::size_t i = 0; i < n; ++i) {
        const ScheduleGenome g = sample_genome(s, cfg.shiftable_mode, rng);
        a.members.push_back({g, schedule_objectives(s, g), 0.0});
    }
    return a;
}

} // namespace

TEST_CASE("configuration validation")
{
    OptimizerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.n_nom = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.mutation_rate = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.epsilon = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("clone counts follow floor(N_max / |A|)")
{
    const Scenario s = table1_scenario();
    OptimizerConfig cfg;
    CHECK(clone_and_mutate(s, archive_with(50), cfg, 0).size() == 1000);
    CHECK(clone_and_mutate(s, archive_with(3), cfg, 0).size() == 999);
    for (const auto& g : clone_and_mutate(s, archive_with(7), cfg, 1))
        CHECK(is_feasible(s, g));
}

TEST_CASE("zero mutation rate yields exact copies")
{
    const Scenario s = table1_scenario();
    OptimizerConfig cfg;
    cfg.mutation_rate = 0.0;
    const ScheduleArchive a = archive_with(4);
    const auto clones = clone_and_mutate(s, a, cfg, 0);
    REQUIRE(clones.size() == 1000);
    for (std::size_t i = 0; i < clones.size(); ++i)
        CHECK(clones[i] == a.members[i / 250].genome);
}

TEST_CASE("zero iterations return the initial archive")
{
    const Scenario s = table1_scenario();
    OptimizerConfig cfg = small_config(5);
    cfg.t_max = 0;
    std::vector<ConvergenceRecord> trace;
    const ScheduleArchive a = evolve(s, cfg, &trace);
    CHECK(a.objectives() == initialize_population(s, cfg).objectives());
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].evaluations == cfg.n_nom);
}

TEST_CASE("archives never hold dominated members")
{
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const Scenario s = random_scenario(rng);
        const ScheduleArchive a = evolve(s, small_config(static_cast<std::uint64_t>(trial)));
        const auto pts = a.objectives();
        REQUIRE_FALSE(pts.empty());
        CHECK(pts.size() <= 20);
        CHECK(nondominated_indices(pts).size() == pts.size());
        for (const auto& m : a.members)
            CHECK(is_feasible(s, m.genome));
    }
}

TEST_CASE("seeded runs are reproducible and independent of worker count")
{
    const Scenario s = table1_scenario();
    OptimizerConfig cfg = small_config(11);
    const ScheduleArchive a = evolve(s, cfg);
    const ScheduleArchive b = evolve(s, cfg);
    cfg.workers = 4;
    const ScheduleArchive c = evolve(s, cfg);
    REQUIRE(a.members.size() == b.members.size());
    REQUIRE(a.members.size() == c.members.size());
    for (std::size_t i = 0; i < a.members.size(); ++i) {
        CHECK(a.members[i].genome == b.members[i].genome);
        CHECK(a.members[i].genome == c.members[i].genome);
    }
    cfg.rng_seed = 12;
    CHECK_FALSE(evolve(s, cfg).objectives() == a.objectives());
}

TEST_CASE("evaluation budget is met exactly")
{
    const Scenario s = table1_scenario();
    OptimizerConfig cfg;
    cfg.max_evaluations = 2500;
    std::vector<ConvergenceRecord> trace;
    evolve(s, cfg, &trace);
    CHECK(trace.back().evaluations == 2500);
}

TEST_CASE("hypervolume never drops while the archive is not truncated")
{
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Scenario s = random_scenario(rng, false);
        OptimizerConfig cfg = small_config(static_cast<std::uint64_t>(trial));
        cfg.n_nom = 2000;
        cfg.n_max = 2000;
        cfg.t_max = 10;
        std::vector<ConvergenceRecord> trace;
        evolve(s, cfg, &trace);
        for (std::size_t i = 1; i < trace.size(); ++i)
            CHECK(trace[i].hypervolume >= trace[i - 1].hypervolume - 1e-12);
    }
}

TEST_CASE("one shiftable appliance: the archive is the enumerated front")
{
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        ScenarioSpec spec = empty_spec(flat(24, 0.0), negligible_battery());
        for (auto& p : spec.prices.prices)
            p = static_cast<double>(1 + rng() % 12);
        InflexibleAppliance base{"base", flat(24, 0.0)};
        for (auto& x : base.load)
            x = static_cast<double>(rng() % 8) * 0.5;
        spec.inflexible.push_back(base);
        spec.shiftable.push_back({"washer", 1.0, 6, 17, 2});
        const Scenario s(spec);
        OptimizerConfig cfg = small_config(static_cast<std::uint64_t>(trial));
        cfg.n_nom = 1000;
        cfg.n_max = 1000;
        CHECK(as_set(evolve(s, cfg).objectives()) == as_set(brute_force_front(s)));
    }
}

TEST_CASE("constant prices collapse the front to the minimum-variance schedule")
{
    ScenarioSpec spec = empty_spec(flat(24, 5.0), negligible_battery());
    InflexibleAppliance base{"base", flat(24, 1.0)};
    for (std::size_t h = 0; h < 24; ++h)
        base.load[h] = h % 5 == 0 ? 2.0 : 1.0;
    spec.inflexible.push_back(base);
    spec.shiftable.push_back({"a", 1.0, 0, 11, 2});
    spec.shiftable.push_back({"b", 0.5, 8, 20, 3});
    const Scenario s(spec);
    const auto front = brute_force_front(s);
    REQUIRE(front.size() == 1);
    const auto got = evolve(s, small_config(3)).objectives();
    REQUIRE(got.size() == 1);
    CHECK(got[0].privacy == doctest::Approx(front[0].privacy).epsilon(1e-12));
}

TEST_CASE("full plan on the reference household passes the audit")
{
    const Scenario s = table1_scenario();
    OptimizerConfig cfg = small_config(2024);
    std::vector<ConvergenceRecord> trace;
    ScheduleArchive archive;
    const DispatchPlan p = plan(s, cfg, &trace, &archive);
    CHECK(audit_plan(s, p).empty());
    CHECK_FALSE(archive.members.empty());
    CHECK(trace.size() == cfg.t_max + 1);
    // The chosen schedule is an archive member.
    CHECK(std::any_of(archive.members.begin(), archive.members.end(),
        [&](const auto& m) { return m.genome == p.genome; }));
    // Every smoothed archive member is a valid plan too.
    for (const auto& m : archive.members)
        CHECK(audit_plan(s, smooth_schedule(s, m.genome, cfg.epsilon)).empty());
}

TEST_CASE("without a battery the plan keeps the schedule's objectives")
{
    ScenarioSpec spec = empty_spec(flat(24, 6.0), negligible_battery());
    for (std::size_t h = 7; h < 21; ++h)
        spec.prices.prices[h] = 12.0;
    spec.inflexible.push_back({"base", flat(24, 1.0)});
    spec.flexible.push_back({"ac", 1.0, 3.0, 0, 23});
    spec.shiftable.push_back({"washer", 1.0, 9, 16, 1});
    const Scenario s(spec);
    const DispatchPlan p = plan(s, small_config(9));
    for (double x : p.storage.s)
        CHECK(std::abs(x) <= 1e-12);
    const ObjectiveVector raw = schedule_objectives(s, p.genome);
    CHECK(p.objectives.cost == doctest::Approx(raw.cost).epsilon(1e-9));
    CHECK(p.objectives.privacy == doctest::Approx(raw.privacy).epsilon(1e-9));
}

TEST_CASE("a constant appliance load gives zero privacy objective")
{
    ScenarioSpec spec = empty_spec(flat(24, 3.0), ideal_battery(0, 4, 2, 0.5));
    spec.inflexible.push_back({"base", flat(24, 2.0)});
    const Scenario s(spec);
    const DispatchPlan p = plan(s, small_config(1));
    CHECK(p.objectives.privacy <= 1e-12);
    CHECK(p.storage.s == flat(24, 0.0));
}

TEST_CASE("smoothed fronts are non-dominated and feasible")
{
    const Scenario s = table1_scenario();
    const ScheduleArchive a = evolve(s, small_config(4));
    const auto front = smoothed_front(s, a, kDefaultEpsilon);
    REQUIRE_FALSE(front.empty());
    CHECK(nondominated_indices(front).size() == front.size());
}
