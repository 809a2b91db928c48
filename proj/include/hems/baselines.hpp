#pragma once

#include "hems/dispatch.hpp"
#include "hems/hybrid.hpp"

#include <span>
#include <vector>

namespace hems {

/// Comparison methods that search over battery states directly. A genome
/// carries an appliance schedule plus the stored energy at the end of every
/// slot; transfers are recovered by inverting the state recursion.
struct BatteryGenome {
    ScheduleGenome appliances;
    std::vector<double> b; // B(1) .. B(|H|); B(0) is the scenario's b_init

    friend bool operator==(const BatteryGenome&, const BatteryGenome&) = default;
    friend bool operator<(const BatteryGenome& x, const BatteryGenome& y)
    {
        if (!(x.appliances == y.appliances))
            return x.appliances < y.appliances;
        return x.b < y.b;
    }
};

using BatteryArchive = Archive<BatteryGenome>;

struct PenaltyConfig {
    double k1 = 1e3;
    double omega = 0.5;
    std::size_t population = 100;
    /// Neighbourhood size of the decomposition variant, as a fraction of the
    /// population.
    double neighborhood_fraction = 0.2;

    void validate() const;
};

enum class PenaltyVariant { nondominated_sorting, decomposition };

/// S(h) = (B(h+1) - alpha B(h)) / (beta slot_hours), beta picked by the sign
/// of the change. `states` holds B(0) .. B(|H|). Throws Error naming the slot
/// whose transition leaves the reachable range.
StoragePlan storage_from_states(std::span<const double> states, const BatteryParams& p, double slot_hours = 1.0);

/// Sum over slots of max(S(h) - P_HA(h), 0).
double constraint_u(const StoragePlan& plan, std::span<const double> appliance);

/// omega * cost + (1 - omega) * variance; objectives are normalised first
/// unless omega is exactly 0 or 1.
double scalarize(const ObjectiveVector& raw, double omega, const NormalizationConstants& k = {});

/// Both objectives inflated by k1 * u.
ObjectiveVector penalized(const ObjectiveVector& raw, double u, double k1);

/// Weighted Tchebycheff distance max_i w_i |f_i - z_i|.
double tchebycheff(const ObjectiveVector& f, const ObjectiveVector& weights, const ObjectiveVector& ideal);

/// `count` evenly spread weight vectors from (0, 1) to (1, 0).
std::vector<ObjectiveVector> weight_vectors(std::size_t count);

/// Appliance schedule drawn uniformly, then each next state drawn uniformly in
/// its reachable range (tightened so the battery never feeds more than the
/// appliances draw).
BatteryGenome sample_battery_genome(const Scenario& s, ShiftableMode mode, Rng& rng);

/// Walks the states in slot order and redraws any state outside its reachable
/// range uniformly within that range.
void repair_states(const Scenario& s, BatteryGenome& g, Rng& rng);

/// Storage profile, metered load and objectives of a battery genome.
DispatchPlan battery_genome_plan(const Scenario& s, const BatteryGenome& g);

/// Single-objective evolutionary search on the weighted sum; offspring that
/// violate the constraint are discarded and redrawn.
DispatchPlan weighted_sum_optimize(const Scenario& s, const PenaltyConfig& pcfg, const OptimizerConfig& ecfg,
    std::vector<ConvergenceRecord>* trace = nullptr);

/// Clonal archive search with feasibility-first comparison: feasible beats
/// infeasible, lower violation beats higher among infeasible.
BatteryArchive moia_optimize(const Scenario& s, const OptimizerConfig& ecfg,
    std::vector<ConvergenceRecord>* trace = nullptr);

/// Penalised two-objective search: rank + crowding generational selection,
/// or Tchebycheff decomposition with neighbourhood replacement.
BatteryArchive penalty_mop_optimize(const Scenario& s, PenaltyVariant variant, const PenaltyConfig& pcfg,
    const OptimizerConfig& ecfg, std::vector<ConvergenceRecord>* trace = nullptr);

/// Least-violating members, MMD choice among them, audited plan.
DispatchPlan archive_plan(const Scenario& s, const BatteryArchive& archive);

/// Raw objectives of the feasible archive members, non-dominated.
std::vector<ObjectiveVector> feasible_front(const BatteryArchive& archive);

} // namespace hems
