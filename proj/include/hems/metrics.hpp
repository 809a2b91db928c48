#pragma once

#include "hems/objectives.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hems {

/// One sample of an optimiser's progress, keyed by cumulative objective
/// evaluations.
struct ConvergenceRecord {
    std::size_t evaluations = 0;
    std::size_t archive_size = 0;
    double hypervolume = 0.0;
};

/// Exact area dominated by `front` and bounded by `reference`. Points not
/// strictly better than the reference in both objectives are ignored.
double hypervolume_2d(std::span<const ObjectiveVector> front, const ObjectiveVector& reference);

/// Reference point at `margin` times the component-wise maxima of all
/// given fronts.
ObjectiveVector reference_point(std::span<const std::vector<ObjectiveVector>> fronts, double margin = 1.1);

/// Peak-to-average ratio. Throws Error for an all-zero (or empty) profile.
double par(std::span<const double> profile);

} // namespace hems
