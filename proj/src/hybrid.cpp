#include "hems/hybrid.hpp"

#include "hems/errors.hpp"
#include "parallel.hpp"

#include <algorithm>

namespace hems {

namespace {

enum Stream : std::uint64_t { init_stream = 0 };

double normalized_hypervolume(const ScheduleArchive& a, const OptimizerConfig& cfg)
{
    std::vector<ObjectiveVector> pts;
    pts.reserve(a.members.size());
    for (const auto& m : a.members)
        pts.push_back(normalize_objectives(m.objectives, cfg.normalization));
    return hypervolume_2d(pts, cfg.hv_reference);
}

std::vector<Member<ScheduleGenome>> evaluate_all(const Scenario& s, std::vector<ScheduleGenome> genomes,
    std::size_t workers)
{
    std::vector<Member<ScheduleGenome>> out(genomes.size());
    detail::parallel_for(genomes.size(), workers, [&](std::size_t i) {
        out[i].objectives = schedule_objectives(s, genomes[i]);
        out[i].genome = std::move(genomes[i]);
    });
    return out;
}

ScheduleArchive initialize(const Scenario& s, const OptimizerConfig& cfg, std::size_t count)
{
    Rng rng = make_rng(cfg.rng_seed, {init_stream});
    std::vector<ScheduleGenome> genomes;
    genomes.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        genomes.push_back(sample_genome(s, cfg.shiftable_mode, rng));
    ScheduleArchive archive;
    archive.nominal_size = cfg.n_nom;
    archive.max_size = cfg.n_max;
    archive.members = nondominated(evaluate_all(s, std::move(genomes), cfg.workers));
    return truncate(std::move(archive), cfg.n_nom);
}

} // namespace

void OptimizerConfig::validate() const
{
    if (n_nom == 0)
        throw ValidationError("n_nom", "must be positive");
    if (n_max == 0 || n_max < n_nom)
        throw ValidationError("n_max", "must be positive and >= n_nom");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
        throw ValidationError("mutation_rate", "must lie in [0, 1]");
    if (!(mutation_scale >= 0.0 && mutation_scale <= 1.0))
        throw ValidationError("mutation_scale", "must lie in [0, 1]");
    if (!(epsilon > 0.0))
        throw ValidationError("epsilon", "must be > 0");
    if (workers == 0)
        throw ValidationError("workers", "must be positive");
    if (!(normalization.cost > 0.0 && normalization.privacy > 0.0))
        throw ValidationError("normalization", "constants must be > 0");
    if (max_evaluations && *max_evaluations == 0)
        throw ValidationError("max_evaluations", "must be positive");
}

ObjectiveVector schedule_objectives(const Scenario& s, const ScheduleGenome& g)
{
    return evaluate_profile(s, appliance_load(s, g));
}

ScheduleArchive initialize_population(const Scenario& s, const OptimizerConfig& cfg)
{
    cfg.validate();
    return initialize(s, cfg, cfg.n_nom);
}

std::vector<ScheduleGenome> clone_and_mutate(const Scenario& s, const ScheduleArchive& archive,
    const OptimizerConfig& cfg, std::uint64_t stream)
{
    if (archive.members.empty())
        throw Error("clone_and_mutate: empty archive");
    const std::size_t clones = std::max<std::size_t>(1, cfg.n_max / archive.members.size());
    std::vector<ScheduleGenome> offspring(clones * archive.members.size());
    detail::parallel_for(offspring.size(), cfg.workers, [&](std::size_t i) {
        Rng rng = make_rng(cfg.rng_seed, {stream, i});
        offspring[i] = archive.members[i / clones].genome;
        mutate_genome(s, offspring[i], cfg.mutation_rate, cfg.mutation_scale, cfg.shiftable_mode, rng);
    });
    return offspring;
}

ScheduleArchive evolve(const Scenario& s, const OptimizerConfig& cfg, std::vector<ConvergenceRecord>* trace)
{
    cfg.validate();
    const std::size_t budget = cfg.max_evaluations.value_or(std::numeric_limits<std::size_t>::max());
    const std::size_t init_count = std::min(cfg.n_nom, budget);

    ScheduleArchive archive = initialize(s, cfg, init_count);
    std::size_t evaluations = init_count;
    if (trace)
        trace->push_back({evaluations, archive.members.size(), normalized_hypervolume(archive, cfg)});

    for (std::size_t t = 0; t < cfg.t_max && evaluations < budget; ++t) {
        auto offspring = clone_and_mutate(s, archive, cfg, t + 1);
        if (offspring.size() > budget - evaluations)
            offspring.resize(budget - evaluations);
        evaluations += offspring.size();

        auto merged = evaluate_all(s, std::move(offspring), cfg.workers);
        merged.insert(merged.end(), std::make_move_iterator(archive.members.begin()),
            std::make_move_iterator(archive.members.end()));
        archive.members = nondominated(std::move(merged));
        archive = truncate(std::move(archive), cfg.n_nom);

        if (trace)
            trace->push_back({evaluations, archive.members.size(), normalized_hypervolume(archive, cfg)});
    }
    return archive;
}

DispatchPlan smooth_schedule(const Scenario& s, const ScheduleGenome& g, double epsilon)
{
    LoadProfile appliance = appliance_load(s, g);
    StoragePlan storage = smoothing_controller(appliance, s.battery(), epsilon, s.slot_hours());
    return assemble_plan(s, g, std::move(storage));
}

DispatchPlan plan(const Scenario& s, const OptimizerConfig& cfg, std::vector<ConvergenceRecord>* trace,
    ScheduleArchive* archive_out)
{
    ScheduleArchive archive = evolve(s, cfg, trace);
    DispatchPlan result = smooth_schedule(s, select_mmd(archive), cfg.epsilon);
    require_valid_plan(s, result);
    if (archive_out)
        *archive_out = std::move(archive);
    return result;
}

std::vector<ObjectiveVector> smoothed_front(const Scenario& s, const ScheduleArchive& archive, double epsilon)
{
    std::vector<ObjectiveVector> pts;
    pts.reserve(archive.members.size());
    for (const auto& m : archive.members)
        pts.push_back(smooth_schedule(s, m.genome, epsilon).objectives);
    std::vector<ObjectiveVector> front;
    for (std::size_t i : nondominated_indices(pts))
        front.push_back(pts[i]);
    return front;
}

} // namespace hems
