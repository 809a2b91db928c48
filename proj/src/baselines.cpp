#include "hems/baselines.hpp"

#include "hems/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hems {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRedraws = 10;

struct Evaluated {
    ObjectiveVector raw;
    double u = 0.0;
};

struct Reach {
    double lo;
    double hi;
};

/// Reachable next state, also bounded so that the discharge never exceeds
/// the appliance load of the slot.
Reach reach(double b_now, double appliance_kw, const Scenario& s)
{
    const auto& p = s.battery();
    auto [lo, hi] = admissible_range(b_now, p, s.slot_hours());
    lo = std::max(lo, p.alpha * b_now - p.beta_minus * appliance_kw * s.slot_hours());
    return {std::min(lo, hi), hi};
}

std::vector<double> full_states(const Scenario& s, const BatteryGenome& g)
{
    std::vector<double> states;
    states.reserve(g.b.size() + 1);
    states.push_back(s.battery().b_init);
    states.insert(states.end(), g.b.begin(), g.b.end());
    return states;
}

Evaluated evaluate(const Scenario& s, const BatteryGenome& g)
{
    const LoadProfile appliance = appliance_load(s, g.appliances);
    const StoragePlan storage = storage_from_states(full_states(s, g), s.battery(), s.slot_hours());
    const LoadProfile total = total_load(appliance, storage.s);
    return {evaluate_profile(s, total), constraint_u(storage, appliance)};
}

void mutate_battery(const Scenario& s, BatteryGenome& g, const OptimizerConfig& cfg, Rng& rng)
{
    mutate_genome(s, g.appliances, cfg.mutation_rate, cfg.mutation_scale, cfg.shiftable_mode, rng);
    if (cfg.mutation_rate > 0.0) {
        std::bernoulli_distribution hit(cfg.mutation_rate);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double sigma = cfg.mutation_scale * (s.battery().b_max - s.battery().b_min);
        for (auto& b : g.b)
            if (hit(rng))
                b += sigma * gauss(rng);
    }
    repair_states(s, g, rng);
}

BatteryGenome crossover_battery(const Scenario& s, const BatteryGenome& x, const BatteryGenome& y, Rng& rng)
{
    BatteryGenome child;
    child.appliances = crossover_genomes(x.appliances, y.appliances, rng);
    std::uniform_int_distribution<std::size_t> cut_at(0, x.b.size());
    const std::size_t cut = cut_at(rng);
    child.b = x.b;
    std::copy(y.b.begin() + static_cast<std::ptrdiff_t>(cut), y.b.end(), child.b.begin() + static_cast<std::ptrdiff_t>(cut));
    repair_states(s, child, rng);
    return child;
}

std::size_t budget_of(const OptimizerConfig& cfg, std::size_t per_iteration)
{
    if (cfg.max_evaluations)
        return *cfg.max_evaluations;
    return per_iteration * (cfg.t_max + 1);
}

std::vector<ObjectiveVector> normalized_feasible(const std::vector<Member<BatteryGenome>>& members,
    const NormalizationConstants& k)
{
    std::vector<ObjectiveVector> pts;
    for (const auto& m : members)
        if (m.violation == 0.0)
            pts.push_back(normalize_objectives(m.objectives, k));
    return pts;
}

void record(std::vector<ConvergenceRecord>* trace, std::size_t evaluations, std::size_t size,
    const std::vector<ObjectiveVector>& normalized, const OptimizerConfig& cfg)
{
    if (trace)
        trace->push_back({evaluations, size, hypervolume_2d(normalized, cfg.hv_reference)});
}

std::vector<Member<BatteryGenome>> evaluate_members(const Scenario& s, std::vector<BatteryGenome> genomes,
    std::size_t workers, double k1)
{
    std::vector<Member<BatteryGenome>> out(genomes.size());
    detail::parallel_for(genomes.size(), workers, [&](std::size_t i) {
        const Evaluated e = evaluate(s, genomes[i]);
        out[i].objectives = k1 > 0.0 ? penalized(e.raw, e.u, k1) : e.raw;
        out[i].violation = e.u;
        out[i].genome = std::move(genomes[i]);
    });
    return out;
}

/// Feasibility-first archive update.
std::vector<Member<BatteryGenome>> feasibility_first(std::vector<Member<BatteryGenome>> members)
{
    std::vector<Member<BatteryGenome>> feasible;
    for (auto& m : members)
        if (m.violation == 0.0)
            feasible.push_back(std::move(m));
    if (!feasible.empty())
        return nondominated(std::move(feasible));
    canonical_sort(members);
    auto best = std::min_element(members.begin(), members.end(),
        [](const auto& a, const auto& b) { return a.violation < b.violation; });
    return {std::move(*best)};
}

// Rank + crowding survival of the combined population.
std::vector<Member<BatteryGenome>> survive(std::vector<Member<BatteryGenome>> pool, std::size_t n,
    std::vector<std::size_t>& rank_out, std::vector<double>& crowd_out)
{
    canonical_sort(pool);
    std::vector<ObjectiveVector> pts;
    for (const auto& m : pool)
        pts.push_back(m.objectives);
    const auto rank = pareto_ranks(pts);
    const std::size_t max_rank = pool.empty() ? 0 : *std::max_element(rank.begin(), rank.end());

    std::vector<Member<BatteryGenome>> next;
    rank_out.clear();
    crowd_out.clear();
    for (std::size_t r = 0; r <= max_rank && next.size() < n; ++r) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (rank[i] == r)
                front.push_back(i);
        std::vector<ObjectiveVector> fpts;
        for (std::size_t i : front)
            fpts.push_back(pts[i]);
        const auto crowd = crowding_distances(fpts);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        if (next.size() + front.size() > n)
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
        for (std::size_t j : order) {
            if (next.size() == n)
                break;
            next.push_back(std::move(pool[front[j]]));
            rank_out.push_back(r);
            crowd_out.push_back(crowd[j]);
        }
    }
    return next;
}

BatteryArchive nsga2(const Scenario& s, const PenaltyConfig& pcfg, const OptimizerConfig& ecfg,
    std::vector<ConvergenceRecord>* trace)
{
    const std::size_t n = pcfg.population;
    const std::size_t budget = budget_of(ecfg, n);
    Rng rng = make_rng(ecfg.rng_seed, {0x5a11});

    std::vector<BatteryGenome> init;
    for (std::size_t i = 0; i < std::min(n, budget); ++i)
        init.push_back(sample_battery_genome(s, ecfg.shiftable_mode, rng));
    std::size_t evaluations = init.size();
    std::vector<std::size_t> rank;
    std::vector<double> crowd;
    auto pop = survive(evaluate_members(s, std::move(init), ecfg.workers, pcfg.k1), n, rank, crowd);
    record(trace, evaluations, pop.size(), normalized_feasible(nondominated(pop), ecfg.normalization), ecfg);

    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    auto tournament = [&]() -> const BatteryGenome& {
        const std::size_t a = pick(rng), b = pick(rng);
        if (rank[a] != rank[b])
            return pop[rank[a] < rank[b] ? a : b].genome;
        if (crowd[a] != crowd[b])
            return pop[crowd[a] > crowd[b] ? a : b].genome;
        return pop[std::min(a, b)].genome;
    };

    while (evaluations < budget) {
        const std::size_t count = std::min(n, budget - evaluations);
        std::vector<BatteryGenome> children;
        children.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            BatteryGenome child = crossover_battery(s, tournament(), tournament(), rng);
            mutate_battery(s, child, ecfg, rng);
            children.push_back(std::move(child));
        }
        evaluations += count;
        auto pool = evaluate_members(s, std::move(children), ecfg.workers, pcfg.k1);
        pool.insert(pool.end(), std::make_move_iterator(pop.begin()), std::make_move_iterator(pop.end()));
        pop = survive(std::move(pool), n, rank, crowd);
        pick = std::uniform_int_distribution<std::size_t>(0, pop.size() - 1);
        record(trace, evaluations, pop.size(), normalized_feasible(nondominated(pop), ecfg.normalization), ecfg);
    }

    BatteryArchive archive;
    archive.nominal_size = n;
    archive.max_size = n;
    archive.members = nondominated(std::move(pop));
    return archive;
}

BatteryArchive moead(const Scenario& s, const PenaltyConfig& pcfg, const OptimizerConfig& ecfg,
    std::vector<ConvergenceRecord>* trace)
{
    const std::size_t n = std::max<std::size_t>(2, pcfg.population);
    const std::size_t budget = budget_of(ecfg, n);
    const auto weights = weight_vectors(n);
    const std::size_t t = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(pcfg.neighborhood_fraction * static_cast<double>(n))), 2, n);
    constexpr std::size_t max_replacements = 2;

    std::vector<std::vector<std::size_t>> hood(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            const auto da = a > i ? a - i : i - a;
            const auto db = b > i ? b - i : i - b;
            return da < db;
        });
        hood[i].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(t));
    }

    Rng rng = make_rng(ecfg.rng_seed, {0xdec0});
    std::vector<BatteryGenome> init;
    for (std::size_t i = 0; i < std::min(n, budget); ++i)
        init.push_back(sample_battery_genome(s, ecfg.shiftable_mode, rng));
    std::size_t evaluations = init.size();
    auto pop = evaluate_members(s, std::move(init), ecfg.workers, pcfg.k1);
    while (pop.size() < n) // budget smaller than the population
        pop.push_back(pop[pop.size() % std::max<std::size_t>(1, evaluations)]);

    auto scaled = [&](const ObjectiveVector& v) { return normalize_objectives(v, ecfg.normalization); };
    ObjectiveVector ideal{kInf, kInf};
    for (const auto& m : pop) {
        const auto v = scaled(m.objectives);
        ideal = {std::min(ideal.cost, v.cost), std::min(ideal.privacy, v.privacy)};
    }
    record(trace, evaluations, pop.size(), normalized_feasible(nondominated(pop), ecfg.normalization), ecfg);

    std::uniform_int_distribution<std::size_t> in_hood(0, t - 1);
    while (evaluations < budget) {
        for (std::size_t i = 0; i < n && evaluations < budget; ++i) {
            const auto& a = pop[hood[i][in_hood(rng)]].genome;
            const auto& b = pop[hood[i][in_hood(rng)]].genome;
            BatteryGenome child = crossover_battery(s, a, b, rng);
            mutate_battery(s, child, ecfg, rng);
            const Evaluated e = evaluate(s, child);
            ++evaluations;
            Member<BatteryGenome> m{std::move(child), penalized(e.raw, e.u, pcfg.k1), e.u};
            const auto v = scaled(m.objectives);
            ideal = {std::min(ideal.cost, v.cost), std::min(ideal.privacy, v.privacy)};

            std::vector<std::size_t> order = hood[i];
            std::shuffle(order.begin(), order.end(), rng);
            std::size_t replaced = 0;
            for (std::size_t j : order) {
                if (replaced == max_replacements)
                    break;
                if (tchebycheff(v, weights[j], ideal) <= tchebycheff(scaled(pop[j].objectives), weights[j], ideal)) {
                    pop[j] = m;
                    ++replaced;
                }
            }
        }
        record(trace, evaluations, pop.size(), normalized_feasible(nondominated(pop), ecfg.normalization), ecfg);
    }

    BatteryArchive archive;
    archive.nominal_size = n;
    archive.max_size = n;
    archive.members = nondominated(std::move(pop));
    return archive;
}

} // namespace

void PenaltyConfig::validate() const
{
    if (!(k1 > 0.0))
        throw ValidationError("k1", "must be > 0");
    if (!(omega >= 0.0 && omega <= 1.0))
        throw ValidationError("omega", "must lie in [0, 1]");
    if (population < 2)
        throw ValidationError("population", "must be at least 2");
    if (!(neighborhood_fraction > 0.0 && neighborhood_fraction <= 1.0))
        throw ValidationError("neighborhood_fraction", "must lie in (0, 1]");
}

StoragePlan storage_from_states(std::span<const double> states, const BatteryParams& p, double slot_hours)
{
    if (states.empty())
        throw Error("storage_from_states: empty state sequence");
    StoragePlan plan;
    plan.b.assign(states.begin(), states.end());
    plan.s.resize(states.size() - 1);
    for (std::size_t h = 0; h + 1 < states.size(); ++h) {
        const auto [lo, hi] = admissible_range(states[h], p, slot_hours);
        if (states[h + 1] < lo - kBatteryTolerance || states[h + 1] > hi + kBatteryTolerance)
            throw Error("storage_from_states: slot " + std::to_string(h) + " moves from " + std::to_string(states[h]) +
                        " to " + std::to_string(states[h + 1]) + " kWh, outside the reachable range");
        const double delta = states[h + 1] - p.alpha * states[h];
        if (delta > 0.0)
            plan.s[h] = delta / (p.beta_plus * slot_hours);
        else if (delta < 0.0)
            plan.s[h] = delta / (p.beta_minus * slot_hours);
        else
            plan.s[h] = 0.0;
    }
    return plan;
}

double constraint_u(const StoragePlan& plan, std::span<const double> appliance)
{
    if (plan.s.size() != appliance.size())
        throw Error("constraint_u: length mismatch");
    double u = 0.0;
    for (std::size_t h = 0; h < appliance.size(); ++h)
        u += std::max(plan.s[h] - appliance[h], 0.0);
    return u;
}

double scalarize(const ObjectiveVector& raw, double omega, const NormalizationConstants& k)
{
    const ObjectiveVector v = (omega == 0.0 || omega == 1.0) ? raw : normalize_objectives(raw, k);
    if (omega == 1.0)
        return v.cost;
    if (omega == 0.0)
        return v.privacy;
    return omega * v.cost + (1.0 - omega) * v.privacy;
}

ObjectiveVector penalized(const ObjectiveVector& raw, double u, double k1)
{
    return {raw.cost + k1 * u, raw.privacy + k1 * u};
}

double tchebycheff(const ObjectiveVector& f, const ObjectiveVector& weights, const ObjectiveVector& ideal)
{
    return std::max(weights.cost * std::abs(f.cost - ideal.cost), weights.privacy * std::abs(f.privacy - ideal.privacy));
}

std::vector<ObjectiveVector> weight_vectors(std::size_t count)
{
    std::vector<ObjectiveVector> w(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = count == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(count - 1);
        w[i] = {x, 1.0 - x};
    }
    return w;
}

BatteryGenome sample_battery_genome(const Scenario& s, ShiftableMode mode, Rng& rng)
{
    BatteryGenome g;
    g.appliances = sample_genome(s, mode, rng);
    const LoadProfile appliance = appliance_load(s, g.appliances);
    g.b.resize(s.slot_count());
    double b = s.battery().b_init;
    for (std::size_t h = 0; h < g.b.size(); ++h) {
        const Reach r = reach(b, appliance[h], s);
        b = r.lo + uniform01(rng) * (r.hi - r.lo);
        g.b[h] = b;
    }
    return g;
}

void repair_states(const Scenario& s, BatteryGenome& g, Rng& rng)
{
    const LoadProfile appliance = appliance_load(s, g.appliances);
    g.b.resize(s.slot_count(), s.battery().b_init);
    double b = s.battery().b_init;
    for (std::size_t h = 0; h < g.b.size(); ++h) {
        const Reach r = reach(b, appliance[h], s);
        const double x = g.b[h];
        if (!(x >= r.lo && x <= r.hi))
            g.b[h] = r.lo + uniform01(rng) * (r.hi - r.lo);
        b = g.b[h];
    }
}

DispatchPlan battery_genome_plan(const Scenario& s, const BatteryGenome& g)
{
    return assemble_plan(s, g.appliances, storage_from_states(full_states(s, g), s.battery(), s.slot_hours()));
}

DispatchPlan weighted_sum_optimize(const Scenario& s, const PenaltyConfig& pcfg, const OptimizerConfig& ecfg,
    std::vector<ConvergenceRecord>* trace)
{
    pcfg.validate();
    ecfg.validate();
    const std::size_t mu = pcfg.population;
    const std::size_t budget = budget_of(ecfg, mu);
    Rng rng = make_rng(ecfg.rng_seed, {0x3e1});

    struct Scored {
        BatteryGenome genome;
        ObjectiveVector raw;
        double score;
    };
    std::size_t evaluations = 0;

    // Death penalty: a violating candidate is discarded and redrawn.
    auto admit = [&](auto&& draw) -> std::optional<Scored> {
        for (int attempt = 0; attempt < kMaxRedraws && evaluations < budget; ++attempt) {
            BatteryGenome g = draw();
            const Evaluated e = evaluate(s, g);
            ++evaluations;
            if (e.u == 0.0)
                return Scored{std::move(g), e.raw, scalarize(e.raw, pcfg.omega, ecfg.normalization)};
            if (attempt + 1 == kMaxRedraws)
                return Scored{std::move(g), e.raw, kInf};
        }
        return std::nullopt;
    };
    auto by_score = [](const Scored& a, const Scored& b) {
        if (a.score != b.score)
            return a.score < b.score;
        return a.genome < b.genome;
    };
    auto trace_best = [&](const std::vector<Scored>& pop) {
        if (!trace)
            return;
        std::vector<ObjectiveVector> best;
        if (!pop.empty() && std::isfinite(pop.front().score))
            best.push_back(normalize_objectives(pop.front().raw, ecfg.normalization));
        trace->push_back({evaluations, pop.empty() ? 0 : std::size_t{1}, hypervolume_2d(best, ecfg.hv_reference)});
    };

    std::vector<Scored> pop;
    while (pop.size() < mu && evaluations < budget)
        if (auto c = admit([&] { return sample_battery_genome(s, ecfg.shiftable_mode, rng); }))
            pop.push_back(std::move(*c));
    std::sort(pop.begin(), pop.end(), by_score);
    trace_best(pop);

    while (evaluations < budget) {
        std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
        auto tournament = [&]() -> const BatteryGenome& {
            const std::size_t a = pick(rng), b = pick(rng);
            return pop[std::min(a, b)].genome; // pop is sorted by score
        };
        std::vector<Scored> children;
        for (std::size_t i = 0; i < mu && evaluations < budget; ++i) {
            auto c = admit([&] {
                BatteryGenome child = crossover_battery(s, tournament(), tournament(), rng);
                mutate_battery(s, child, ecfg, rng);
                return child;
            });
            if (c)
                children.push_back(std::move(*c));
        }
        pop.insert(pop.end(), std::make_move_iterator(children.begin()), std::make_move_iterator(children.end()));
        std::sort(pop.begin(), pop.end(), by_score);
        if (pop.size() > mu)
            pop.resize(mu);
        trace_best(pop);
    }

    DispatchPlan result = battery_genome_plan(s, pop.front().genome);
    require_valid_plan(s, result);
    return result;
}

BatteryArchive moia_optimize(const Scenario& s, const OptimizerConfig& ecfg, std::vector<ConvergenceRecord>* trace)
{
    ecfg.validate();
    const std::size_t budget = budget_of(ecfg, ecfg.n_max);
    Rng rng = make_rng(ecfg.rng_seed, {0x4101a});

    std::vector<BatteryGenome> init;
    for (std::size_t i = 0; i < std::min(ecfg.n_nom, budget); ++i)
        init.push_back(sample_battery_genome(s, ecfg.shiftable_mode, rng));
    std::size_t evaluations = init.size();

    BatteryArchive archive;
    archive.nominal_size = ecfg.n_nom;
    archive.max_size = ecfg.n_max;
    archive.members = feasibility_first(evaluate_members(s, std::move(init), ecfg.workers, 0.0));
    archive = truncate(std::move(archive), ecfg.n_nom);
    record(trace, evaluations, archive.members.size(), normalized_feasible(archive.members, ecfg.normalization), ecfg);

    for (std::size_t t = 0; t < ecfg.t_max && evaluations < budget; ++t) {
        const std::size_t clones = std::max<std::size_t>(1, ecfg.n_max / archive.members.size());
        std::vector<BatteryGenome> offspring(std::min(clones * archive.members.size(), budget - evaluations));
        detail::parallel_for(offspring.size(), ecfg.workers, [&](std::size_t i) {
            Rng local = make_rng(ecfg.rng_seed, {0x4101a, t + 1, i});
            offspring[i] = archive.members[i / clones].genome;
            mutate_battery(s, offspring[i], ecfg, local);
        });
        evaluations += offspring.size();
        auto merged = evaluate_members(s, std::move(offspring), ecfg.workers, 0.0);
        merged.insert(merged.end(), std::make_move_iterator(archive.members.begin()),
            std::make_move_iterator(archive.members.end()));
        archive.members = feasibility_first(std::move(merged));
        archive = truncate(std::move(archive), ecfg.n_nom);
        record(trace, evaluations, archive.members.size(), normalized_feasible(archive.members, ecfg.normalization),
            ecfg);
    }
    return archive;
}

BatteryArchive penalty_mop_optimize(const Scenario& s, PenaltyVariant variant, const PenaltyConfig& pcfg,
    const OptimizerConfig& ecfg, std::vector<ConvergenceRecord>* trace)
{
    pcfg.validate();
    ecfg.validate();
    return variant == PenaltyVariant::nondominated_sorting ? nsga2(s, pcfg, ecfg, trace) : moead(s, pcfg, ecfg, trace);
}

DispatchPlan archive_plan(const Scenario& s, const BatteryArchive& archive)
{
    if (archive.members.empty())
        throw Error("archive_plan: empty archive");
    double least = kInf;
    for (const auto& m : archive.members)
        least = std::min(least, m.violation);
    BatteryArchive candidates;
    for (const auto& m : archive.members)
        if (m.violation == least)
            candidates.members.push_back(m);
    DispatchPlan result = battery_genome_plan(s, select_mmd(candidates));
    require_valid_plan(s, result);
    return result;
}

std::vector<ObjectiveVector> feasible_front(const BatteryArchive& archive)
{
    std::vector<ObjectiveVector> pts;
    for (const auto& m : archive.members)
        if (m.violation == 0.0)
            pts.push_back(m.objectives);
    std::vector<ObjectiveVector> front;
    for (std::size_t i : nondominated_indices(pts))
        front.push_back(pts[i]);
    return front;
}

} // namespace hems
