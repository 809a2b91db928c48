#pragma once

#include "hems/battery.hpp"
#include "hems/dispatch.hpp"
#include "hems/genome.hpp"
#include "hems/metrics.hpp"
#include "hems/pareto.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hems {

using ScheduleArchive = Archive<ScheduleGenome>;

struct OptimizerConfig {
    std::size_t n_nom = 50;
    std::size_t n_max = 1000;
    std::size_t t_max = 2000;
    /// Stops once this many objective evaluations have been spent; the final
    /// batch is cut short so the count is met exactly.
    std::optional<std::size_t> max_evaluations;
    double mutation_rate = 0.5;
    double mutation_scale = 0.1;
    std::uint64_t rng_seed = 0;
    double epsilon = kDefaultEpsilon;
    ShiftableMode shiftable_mode = ShiftableMode::contiguous;
    /// Worker threads for offspring evaluation. Results do not depend on it.
    std::size_t workers = 1;
    NormalizationConstants normalization;
    /// Reference point, in normalised units, for convergence hypervolume.
    ObjectiveVector hv_reference{1.1, 1.1};

    /// Throws ValidationError on out-of-range settings.
    void validate() const;
};

/// Battery-free objectives of a schedule: cost and variance of P_HA.
ObjectiveVector schedule_objectives(const Scenario& s, const ScheduleGenome& g);

/// N_nom uniform feasible draws with dominated members removed.
ScheduleArchive initialize_population(const Scenario& s, const OptimizerConfig& cfg);

/// Each member is cloned floor(N_max / |archive|) times and every clone goes
/// through gene operations with its own random stream derived from
/// (cfg.rng_seed, stream, clone index). Returns the clones only.
std::vector<ScheduleGenome> clone_and_mutate(const Scenario& s, const ScheduleArchive& archive,
    const OptimizerConfig& cfg, std::uint64_t stream);

/// Runs the clonal search on the battery-free problem and returns the final
/// approximate Pareto set. When `trace` is given, one record is appended
/// after initialisation and after every iteration.
ScheduleArchive evolve(const Scenario& s, const OptimizerConfig& cfg, std::vector<ConvergenceRecord>* trace = nullptr);

/// Applies the smoothing controller to a schedule and assembles the plan.
DispatchPlan smooth_schedule(const Scenario& s, const ScheduleGenome& g, double epsilon);

/// Full pipeline: evolve, pick the MMD member, smooth with the battery.
/// The result is audited before it is returned.
DispatchPlan plan(const Scenario& s, const OptimizerConfig& cfg, std::vector<ConvergenceRecord>* trace = nullptr,
    ScheduleArchive* archive_out = nullptr);

/// Metered-load objectives of every archive member after smoothing,
/// reduced to the non-dominated set.
std::vector<ObjectiveVector> smoothed_front(const Scenario& s, const ScheduleArchive& archive, double epsilon);

} // namespace hems
