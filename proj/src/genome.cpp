#include "hems/genome.hpp"

#include "hems/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hems {

namespace {

double clamp_gene(double p, const FlexibleAppliance& a)
{
    return std::clamp(p, a.p_min + kGeneMargin, a.p_max);
}

std::vector<std::size_t> place_shiftable(const ShiftableAppliance& c, ShiftableMode mode, Rng& rng)
{
    std::vector<std::size_t> slots;
    if (mode == ShiftableMode::contiguous) {
        std::uniform_int_distribution<std::size_t> start(c.window_start, c.window_start + c.start_choices() - 1);
        const std::size_t s0 = start(rng);
        slots.resize(c.duration);
        std::iota(slots.begin(), slots.end(), s0);
        return slots;
    }
    // Partial Fisher-Yates over the window.
    std::vector<std::size_t> window(c.window_length());
    std::iota(window.begin(), window.end(), c.window_start);
    for (std::size_t i = 0; i < c.duration; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, window.size() - 1);
        std::swap(window[i], window[pick(rng)]);
    }
    slots.assign(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(c.duration));
    std::sort(slots.begin(), slots.end());
    return slots;
}

} // namespace

void check_genome(const Scenario& s, const ScheduleGenome& g)
{
    const auto& flex = s.flexible();
    if (g.flexible_power.size() != flex.size())
        throw FeasibilityError("genome has " + std::to_string(g.flexible_power.size()) + " flexible entries, scenario has " +
                               std::to_string(flex.size()));
    for (std::size_t b = 0; b < flex.size(); ++b) {
        const auto& a = flex[b];
        const auto& genes = g.flexible_power[b];
        if (genes.size() != a.window_length())
            throw FeasibilityError("flexible appliance '" + a.id + "': expected " + std::to_string(a.window_length()) +
                                   " genes, got " + std::to_string(genes.size()));
        for (std::size_t k = 0; k < genes.size(); ++k) {
            const double p = genes[k];
            if (!(p > a.p_min && p <= a.p_max + kGeneMargin))
                throw FeasibilityError("flexible appliance '" + a.id + "' slot " + std::to_string(a.start_slot + k) +
                                       ": power " + std::to_string(p) + " outside (p_min, p_max]");
        }
    }

    const auto& shift = s.shiftable();
    if (g.shiftable_slots.size() != shift.size())
        throw FeasibilityError("genome has " + std::to_string(g.shiftable_slots.size()) +
                               " shiftable entries, scenario has " + std::to_string(shift.size()));
    for (std::size_t c = 0; c < shift.size(); ++c) {
        const auto& a = shift[c];
        const auto& slots = g.shiftable_slots[c];
        if (slots.size() != a.duration)
            throw FeasibilityError("shiftable appliance '" + a.id + "': expected " + std::to_string(a.duration) +
                                   " slots, got " + std::to_string(slots.size()));
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i] < a.window_start || slots[i] > a.window_end)
                throw FeasibilityError("shiftable appliance '" + a.id + "' slot " + std::to_string(slots[i]) +
                                       ": outside window");
            if (i > 0 && slots[i] <= slots[i - 1])
                throw FeasibilityError("shiftable appliance '" + a.id + "' slot " + std::to_string(slots[i]) +
                                       ": slots must be distinct and sorted");
        }
    }
}

bool is_feasible(const Scenario& s, const ScheduleGenome& g)
{
    try {
        check_genome(s, g);
        return true;
    } catch (const FeasibilityError&) {
        return false;
    }
}

bool is_contiguous(const ScheduleGenome& g)
{
    for (const auto& slots : g.shiftable_slots)
        for (std::size_t i = 1; i < slots.size(); ++i)
            if (slots[i] != slots[i - 1] + 1)
                return false;
    return true;
}

ScheduleGenome sample_genome(const Scenario& s, ShiftableMode mode, Rng& rng)
{
    ScheduleGenome g;
    g.flexible_power.reserve(s.flexible().size());
    for (const auto& a : s.flexible()) {
        std::vector<double> genes(a.window_length());
        // p_max - u * range with u in [0, 1) covers exactly (p_min, p_max].
        for (auto& p : genes)
            p = clamp_gene(a.p_max - uniform01(rng) * (a.p_max - a.p_min), a);
        g.flexible_power.push_back(std::move(genes));
    }
    g.shiftable_slots.reserve(s.shiftable().size());
    for (const auto& c : s.shiftable())
        g.shiftable_slots.push_back(place_shiftable(c, mode, rng));
    return g;
}

void mutate_genome(const Scenario& s, ScheduleGenome& g, double rate, double scale, ShiftableMode mode, Rng& rng)
{
    if (rate <= 0.0)
        return;
    std::bernoulli_distribution hit(rate);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t b = 0; b < s.flexible().size(); ++b) {
        const auto& a = s.flexible()[b];
        const double sigma = scale * (a.p_max - a.p_min);
        for (auto& p : g.flexible_power[b])
            if (hit(rng))
                p = clamp_gene(p + sigma * gauss(rng), a);
    }
    for (std::size_t c = 0; c < s.shiftable().size(); ++c)
        if (hit(rng))
            g.shiftable_slots[c] = place_shiftable(s.shiftable()[c], mode, rng);
}

ScheduleGenome crossover_genomes(const ScheduleGenome& a, const ScheduleGenome& b, Rng& rng)
{
    std::bernoulli_distribution coin(0.5);
    ScheduleGenome child = a;
    for (std::size_t i = 0; i < child.flexible_power.size(); ++i)
        for (std::size_t k = 0; k < child.flexible_power[i].size(); ++k)
            if (coin(rng))
                child.flexible_power[i][k] = b.flexible_power[i][k];
    for (std::size_t c = 0; c < child.shiftable_slots.size(); ++c)
        if (coin(rng))
            child.shiftable_slots[c] = b.shiftable_slots[c];
    return child;
}

std::vector<ScheduleGenome> enumerate_shiftable_schedules(const Scenario& s, std::size_t limit)
{
    if (!s.flexible().empty())
        return {};
    std::size_t total = 1;
    for (const auto& c : s.shiftable()) {
        total *= c.start_choices();
        if (total > limit)
            return {};
    }
    std::vector<ScheduleGenome> out;
    out.reserve(total);
    std::vector<std::size_t> offset(s.shiftable().size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        ScheduleGenome g;
        g.flexible_power.resize(s.flexible().size());
        for (std::size_t c = 0; c < s.shiftable().size(); ++c) {
            const auto& a = s.shiftable()[c];
            std::vector<std::size_t> slots(a.duration);
            std::iota(slots.begin(), slots.end(), a.window_start + offset[c]);
            g.shiftable_slots.push_back(std::move(slots));
        }
        out.push_back(std::move(g));
        for (std::size_t c = s.shiftable().size(); c-- > 0;) {
            if (++offset[c] < s.shiftable()[c].start_choices())
                break;
            offset[c] = 0;
        }
    }
    return out;
}

} // namespace hems
