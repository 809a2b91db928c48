#pragma once

#include "hems/genome.hpp"
#include "hems/scenario.hpp"

#include <span>

namespace hems {

/// (energy cost, load variance). Both are minimised.
struct ObjectiveVector {
    double cost = 0.0;
    double privacy = 0.0;

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

/// Prior maxima used to bring cost and variance to a common scale.
struct NormalizationConstants {
    double cost = 2400.0;
    double privacy = 1.4;
};

/// Per-slot appliance consumption P_HA. Throws FeasibilityError if `g` is
/// infeasible for `s`.
LoadProfile appliance_load(const Scenario& s, const ScheduleGenome& g);

/// Metered load P = P_HA + S. Throws on length mismatch or when a slot would
/// export power to the grid (negative total).
LoadProfile total_load(std::span<const double> appliance, std::span<const double> storage);

/// Sum over slots of power x slot_hours x price.
double cost(std::span<const double> profile, std::span<const double> prices, double slot_hours);

/// Population variance of the profile (two-pass, centred).
double privacy_variance(std::span<const double> profile);

ObjectiveVector normalize_objectives(const ObjectiveVector& v, const NormalizationConstants& k = {});

/// (cost, variance) of a profile under the scenario's tariff.
ObjectiveVector evaluate_profile(const Scenario& s, std::span<const double> profile);

} // namespace hems
