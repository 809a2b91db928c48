// Acceptance harness: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "hems/battery.hpp"
#include "hems/community.hpp"
#include "hems/dispatch.hpp"
#include "hems/hybrid.hpp"
#include "hems/methods.hpp"
#include "hems/metrics.hpp"
#include "hems/objectives.hpp"
#include "hems/pareto.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

using namespace hems;
using namespace hems::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Outcome {
    bool pass;
    std::string detail;
};

// 1. Every plan of every method on fuzzed scenarios passes the audit.
Outcome constraint_audit()
{
    const auto t0 = Clock::now();
    Rng rng(1001);
    std::size_t plans = 0, violations = 0;
    std::string first;
    for (int i = 0; i < 1000; ++i) {
        const Scenario s = random_scenario(rng);
        RunSettings r;
        r.seed = static_cast<std::uint64_t>(i);
        r.budget = 400;
        for (const auto& name : method_names()) {
            std::vector<std::string> v;
            try {
                v = audit_plan(s, run_method(s, name, r).plan);
            } catch (const std::exception& e) {
                v = {e.what()};
            }
            ++plans;
            if (!v.empty()) {
                ++violations;
                if (first.empty())
                    first = "scenario " + std::to_string(i) + " " + name + ": " + v.front();
            }
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << plans << " plans, " << violations << " with violations, " << secs << " s";
    if (!first.empty())
        os << "; first: " << first;
    return {violations == 0 && secs < 300.0, os.str()};
}

// 2. The hybrid flattens the metered load when the battery can absorb every step.
Outcome flattening()
{
    Rng rng(2002);
    double worst = 0.0, worst_privacy = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double s_max = 0.5 + uniform01(rng);
        ScenarioSpec spec = empty_spec(flat(24, 0.0), ideal_battery(0.0, 500.0, 250.0, s_max));
        for (std::size_t h = 0; h < 24; ++h)
            spec.prices.prices[h] = h >= 7 && h < 21 ? 12.0 : 6.0;
        // The appliance load stays within 0.7 s_max of its first value, so
        // every step is within s_max and the battery can absorb the excursion.
        LoadProfile base(24);
        base[0] = 3.0 + uniform01(rng);
        for (std::size_t h = 1; h < 24; ++h)
            base[h] = base[0] + 0.3 * s_max * (2.0 * uniform01(rng) - 1.0);
        spec.inflexible.push_back({"base", base});
        spec.shiftable.push_back({"c", 0.4 * s_max, 8, 16, 2});
        const Scenario s(spec);

        OptimizerConfig cfg;
        cfg.rng_seed = static_cast<std::uint64_t>(trial);
        cfg.max_evaluations = 2000;
        cfg.epsilon = 1e-12;
        const DispatchPlan p = plan(s, cfg);
        for (std::size_t h = 1; h < 24; ++h)
            worst = std::max(worst, std::abs(p.total[h] - p.total[1]));
        const std::vector<double> tail(p.total.begin() + 1, p.total.end());
        worst_privacy = std::max(worst_privacy, privacy_variance(tail));
    }
    std::ostringstream os;
    os << "50 instances, max |P(h) - P(1)| = " << worst << ", max variance over h >= 1 = " << worst_privacy;
    return {worst <= 1e-9, os.str()};
}

// 3. On enumerable shiftable-only instances the archive is the exact front.
Outcome brute_force_equivalence()
{
    Rng rng(3003);
    int matched = 0, instances = 0;
    std::string first;
    while (instances < 20) {
        const Scenario s = random_shiftable_scenario(rng);
        const auto schedules = enumerate_shiftable_schedules(s, 10000);
        if (schedules.empty())
            continue;
        ++instances;
        std::vector<ObjectiveVector> all;
        for (const auto& g : schedules)
            all.push_back(schedule_objectives(s, g));
        std::set<std::pair<double, double>> want, got;
        for (std::size_t i : nondominated_indices(all))
            want.insert({all[i].cost, all[i].privacy});

        OptimizerConfig cfg;
        cfg.rng_seed = static_cast<std::uint64_t>(instances);
        cfg.n_nom = 2000;
        cfg.n_max = 2000;
        cfg.t_max = 60;
        for (const auto& v : evolve(s, cfg).objectives())
            got.insert({v.cost, v.privacy});
        if (got == want)
            ++matched;
        else if (first.empty())
            first = "instance " + std::to_string(instances) + ": " + std::to_string(got.size()) + " vs "
                + std::to_string(want.size()) + " points";
    }
    std::string detail = std::to_string(matched) + "/20 instances match";
    if (!first.empty())
        detail += "; first mismatch " + first;
    return {matched == 20, detail};
}

// Index of the member closest (Manhattan) to the normalised ideal point, ties
// to the lexicographically smallest vector.
ObjectiveVector mmd_oracle(const std::vector<ObjectiveVector>& pts)
{
    double lo_c = pts[0].cost, hi_c = lo_c, lo_p = pts[0].privacy, hi_p = lo_p;
    for (const auto& v : pts) {
        lo_c = std::min(lo_c, v.cost);
        hi_c = std::max(hi_c, v.cost);
        lo_p = std::min(lo_p, v.privacy);
        hi_p = std::max(hi_p, v.privacy);
    }
    auto dist = [&](const ObjectiveVector& v) {
        const double dc = hi_c > lo_c ? (v.cost - lo_c) / (hi_c - lo_c) : 0.0;
        const double dp = hi_p > lo_p ? (v.privacy - lo_p) / (hi_p - lo_p) : 0.0;
        return dc + dp;
    };
    double best = dist(pts[0]);
    for (const auto& v : pts)
        best = std::min(best, dist(v));
    std::vector<ObjectiveVector> ties;
    for (const auto& v : pts)
        if (dist(v) <= best + 1e-12)
            ties.push_back(v);
    return *std::min_element(ties.begin(), ties.end(), lex_less);
}

// 4. MMD selection against the oracle.
Outcome mmd_oracle_check()
{
    Rng rng(4004);
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ObjectiveVector> front;
        const int kind = trial % 5;
        const std::size_t n = 1 + static_cast<std::size_t>(rng() % 15);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = uniform01(rng);
            switch (kind) {
            case 0: // convex
                front.push_back({100.0 * x, 2.0 * (1.0 - std::sqrt(x))});
                break;
            case 1: // concave
                front.push_back({100.0 * x, 2.0 * (1.0 - x * x)});
                break;
            case 2: // zero cost spread
                front.push_back({5.0, uniform01(rng)});
                break;
            case 3: // symmetric integer points with exact ties
                front.push_back({double(i), double(n - 1 - i)});
                break;
            default: // zero spread in both objectives
                front.push_back({1.0, 1.0});
            }
        }
        Archive<std::size_t> a;
        for (std::size_t i = 0; i < front.size(); ++i)
            a.members.push_back({i, front[i], 0.0});
        if (front[select_mmd(a)] == mmd_oracle(front))
            ++agree;
    }
    Archive<int> tie;
    for (const ObjectiveVector& v : {ObjectiveVector{10, 0}, ObjectiveVector{5, 5}, ObjectiveVector{0, 10}})
        tie.members.push_back({static_cast<int>(tie.members.size()), v, 0.0});
    const bool tie_ok = tie.members[static_cast<std::size_t>(select_mmd(tie))].objectives == ObjectiveVector{0, 10};
    return {agree == 100 && tie_ok,
        std::to_string(agree) + "/100 fronts agree; tie fixture " + (tie_ok ? "ok" : "wrong")};
}

// 5. Exact hypervolume against Monte Carlo estimates.
Outcome hypervolume_oracle()
{
    Rng rng(5005);
    const bool hand = hypervolume_2d(std::vector<ObjectiveVector>{{1, 3}, {2, 1}}, {4, 4}) == 7.0;
    int within = 0;
    double worst_sigma = 0.0;
    constexpr std::size_t samples = 1000000;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ObjectiveVector> pts;
        for (int i = 0; i < 1 + trial % 20; ++i)
            pts.push_back({uniform01(rng), uniform01(rng)});
        const ObjectiveVector ref{1.0, 1.0};
        const double exact = hypervolume_2d(pts, ref);

        std::vector<ObjectiveVector> front;
        for (std::size_t i : nondominated_indices(pts))
            front.push_back(pts[i]);
        std::sort(front.begin(), front.end(), lex_less);
        double lo_c = 1.0, lo_p = 1.0;
        for (const auto& v : front) {
            lo_c = std::min(lo_c, v.cost);
            lo_p = std::min(lo_p, v.privacy);
        }
        const double box = (ref.cost - lo_c) * (ref.privacy - lo_p);
        std::size_t hits = 0;
        for (std::size_t k = 0; k < samples; ++k) {
            const double x = lo_c + uniform01(rng) * (ref.cost - lo_c);
            const double y = lo_p + uniform01(rng) * (ref.privacy - lo_p);
            // Last front point with cost <= x has the lowest privacy among them.
            auto it = std::upper_bound(front.begin(), front.end(), x,
                [](double c, const ObjectiveVector& v) { return c < v.cost; });
            if (it != front.begin() && std::prev(it)->privacy <= y)
                ++hits;
        }
        const double p = static_cast<double>(hits) / samples;
        const double estimate = box * p;
        const double sigma = box * std::sqrt(std::max(p * (1.0 - p), 1e-12) / samples);
        const double z = std::abs(estimate - exact) / sigma;
        worst_sigma = std::max(worst_sigma, z);
        if (z <= 3.0)
            ++within;
    }
    std::ostringstream os;
    os << within << "/50 fronts within 3 sigma (worst " << worst_sigma << " sigma); hand case "
       << (hand ? "7.0" : "wrong");
    return {within == 50 && hand, os.str()};
}

// 6. Median comparison over 20 seeds at the full budget.
Outcome directional_comparison()
{
    const Scenario s = table1_scenario();
    const std::vector<std::string> baselines{"ws0", "ws0.5", "ws1", "moia", "moead", "nsga2"};
    std::vector<std::vector<double>> hv(baselines.size() + 1);
    std::vector<double> hybrid_cost, hybrid_privacy, ws1_cost, ws1_privacy;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RunSettings r;
        r.seed = seed;
        r.budget = 25000;
        std::vector<MethodResult> results{run_method(s, "hybrid", r)};
        for (const auto& b : baselines)
            results.push_back(run_method(s, b, r));
        hybrid_cost.push_back(results[0].plan.objectives.cost);
        hybrid_privacy.push_back(results[0].plan.objectives.privacy);
        ws1_cost.push_back(results[3].plan.objectives.cost);
        ws1_privacy.push_back(results[3].plan.objectives.privacy);

        std::vector<std::vector<ObjectiveVector>> fronts;
        for (const auto& res : results) {
            std::vector<ObjectiveVector> f;
            for (const auto& v : res.front)
                f.push_back(normalize_objectives(v));
            fronts.push_back(std::move(f));
        }
        const ObjectiveVector ref = reference_point(fronts);
        for (std::size_t i = 0; i < fronts.size(); ++i)
            hv[i].push_back(hypervolume_2d(fronts[i], ref));
    }
    const double hc = median(hybrid_cost), hp = median(hybrid_privacy);
    const double wc = median(ws1_cost), wp = median(ws1_privacy);
    const double hh = median(hv[0]);
    bool hv_ok = true;
    std::ostringstream os;
    os << "median cost ws1 " << wc << " <= hybrid " << hc << "; median privacy hybrid " << hp << " <= ws1 " << wp
       << "; median HV hybrid " << hh;
    for (std::size_t i = 0; i < baselines.size(); ++i) {
        const double m = median(hv[i + 1]);
        os << ", " << baselines[i] << " " << m;
        hv_ok = hv_ok && hh >= m;
    }
    return {wc <= hc && hp <= wp && hv_ok, os.str()};
}

// 7. PAR properties and the community ordering.
Outcome par_properties()
{
    const bool constant = std::abs(par(flat(24, 4.2)) - 1.0) <= 1e-12;
    Rng rng(7007);
    bool at_least_one = true;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> p(24);
        for (auto& x : p)
            x = uniform01(rng) < 0.2 ? 0.0 : 10.0 * uniform01(rng);
        p[0] += 1e-3;
        at_least_one = at_least_one && par(p) >= 1.0;
    }
    std::vector<double> hybrid, ws1;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const CommunitySpec spec = default_community(50, seed);
        hybrid.push_back(simulate_community(spec, "hybrid", RunSettings{}).par);
        ws1.push_back(simulate_community(spec, "ws1", RunSettings{}).par);
    }
    const double mh = median(hybrid), mw = median(ws1);
    std::ostringstream os;
    os << "par(constant) " << (constant ? "= 1" : "!= 1") << "; par >= 1 on 10^4 profiles "
       << (at_least_one ? "holds" : "fails") << "; 50-house median PAR hybrid " << mh << " <= ws1 " << mw;
    return {constant && at_least_one && mh <= mw, os.str()};
}

// 8. Stepping the state recursion then inverting it returns the transfers.
Outcome round_trip()
{
    Rng rng(8008);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const Scenario s = random_scenario(rng);
        const BatteryParams& p = s.battery();
        const double dh = s.slot_hours();
        std::vector<double> transfers, states{p.b_init};
        for (std::size_t h = 0; h < s.slot_count(); ++h) {
            const auto [lo, hi] = admissible_range(states.back(), p, dh);
            const double next = lo + uniform01(rng) * (hi - lo);
            const double b = states.back();
            const double delta = next - p.alpha * b;
            const double x = delta >= 0.0 ? delta / (p.beta_plus * dh) : delta / (p.beta_minus * dh);
            transfers.push_back(x);
            states.push_back(step_battery(b, x, p, dh));
        }
        const StoragePlan back = storage_from_states(states, p, dh);
        for (std::size_t h = 0; h < transfers.size(); ++h)
            worst = std::max(worst, std::abs(back.s[h] - transfers[h]));
    }
    std::ostringstream os;
    os << "10^4 trajectories, max |S - S'| = " << worst;
    return {worst <= 1e-9, os.str()};
}

// 9. One full-budget hybrid run on the reference household.
Outcome runtime_budget()
{
    RunSettings r;
    r.seed = 9;
    r.budget = 25000;
    const auto t0 = Clock::now();
    const MethodResult res = run_method(table1_scenario(), "hybrid", r);
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << secs << " s for " << res.convergence.back().evaluations << " evaluations";
    return {secs < 60.0 && res.convergence.back().evaluations == 25000, os.str()};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"constraint audit", constraint_audit},
        {"flattening", flattening},
        {"brute-force Pareto equivalence", brute_force_equivalence},
        {"MMD oracle", mmd_oracle_check},
        {"hypervolume oracle", hypervolume_oracle},
        {"directional comparison", directional_comparison},
        {"PAR properties", par_properties},
        {"round trip", round_trip},
        {"runtime budget", runtime_budget},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
