#pragma once

#include "hems/rng.hpp"
#include "hems/scenario.hpp"

#include <cstddef>
#include <vector>

namespace hems {

/// Gap kept between a flexible gene and its exclusive lower bound p_min.
inline constexpr double kGeneMargin = 1e-9;

/// One candidate appliance schedule: the power of every flexible appliance
/// over its active window, and the chosen slot set of every shiftable one.
struct ScheduleGenome {
    std::vector<std::vector<double>> flexible_power;       // [appliance][slot - start_slot]
    std::vector<std::vector<std::size_t>> shiftable_slots; // [appliance] sorted absolute slots

    friend bool operator==(const ScheduleGenome&, const ScheduleGenome&) = default;
    friend bool operator<(const ScheduleGenome& a, const ScheduleGenome& b)
    {
        if (a.flexible_power != b.flexible_power)
            return a.flexible_power < b.flexible_power;
        return a.shiftable_slots < b.shiftable_slots;
    }
};

/// Contiguous blocks model a single uninterrupted run; arbitrary sets allow
/// any |h_c| slots inside the window.
enum class ShiftableMode { contiguous, arbitrary };

/// Throws FeasibilityError naming the appliance and slot when `g` leaves the
/// feasible region: flexible power in (p_min, p_max] on the window, shiftable
/// slots distinct, inside the window and exactly `duration` of them.
void check_genome(const Scenario& s, const ScheduleGenome& g);
bool is_feasible(const Scenario& s, const ScheduleGenome& g);

/// True when every shiftable slot set is one contiguous block.
bool is_contiguous(const ScheduleGenome& g);

/// Uniform draw from the feasible region.
ScheduleGenome sample_genome(const Scenario& s, ShiftableMode mode, Rng& rng);

/// Gene operations. Each flexible gene is perturbed with probability `rate`
/// by a Gaussian of standard deviation `scale * (p_max - p_min)` and clamped
/// back into (p_min, p_max]; each shiftable appliance is re-placed uniformly
/// with probability `rate`.
void mutate_genome(const Scenario& s, ScheduleGenome& g, double rate, double scale, ShiftableMode mode, Rng& rng);

/// Uniform crossover: each flexible gene and each shiftable slot set is taken
/// from either parent with equal probability.
ScheduleGenome crossover_genomes(const ScheduleGenome& a, const ScheduleGenome& b, Rng& rng);

/// Every contiguous schedule of a scenario without flexible appliances,
/// in lexicographic order of block starts. Returns an empty vector if the
/// count exceeds `limit`.
std::vector<ScheduleGenome> enumerate_shiftable_schedules(const Scenario& s, std::size_t limit);

} // namespace hems
