#pragma once

#include "hems/errors.hpp"
#include "hems/objectives.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace hems {

/// Pareto dominance for minimisation: a is no worse everywhere and differs.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Lexicographic (cost, privacy) order.
bool lex_less(const ObjectiveVector& a, const ObjectiveVector& b);

/// Indices of the non-dominated points, keeping only the first index of any
/// repeated vector. Result is ordered by (cost, privacy, index).
std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points);

/// Crowding distance of every point (infinite at per-objective extremes).
std::vector<double> crowding_distances(std::span<const ObjectiveVector> points);

/// Indices (ascending) that survive crowding truncation to `keep` points.
/// Exact duplicates go first; then the least crowded point is removed one at
/// a time, lowest index first on ties. Per-objective extremes are removed
/// only when nothing else remains.
std::vector<std::size_t> crowding_survivors(std::span<const ObjectiveVector> points, std::size_t keep);

/// Minimum-Manhattan-distance choice: each objective is divided by the
/// front's spread, and the point closest (L1) to the scaled ideal vector
/// wins. A zero spread contributes 0 in that dimension. Ties (within 1e-12) go to the
/// lowest position after sorting by (cost, privacy). Returns an index into
/// `points`.
std::size_t mmd_index(std::span<const ObjectiveVector> points);

/// Fast non-dominated sorting; returns the front rank of every point
/// (0 = non-dominated).
std::vector<std::size_t> pareto_ranks(std::span<const ObjectiveVector> points);

template <class Genome>
struct Member {
    Genome genome;
    ObjectiveVector objectives;
    double violation = 0.0; // aggregated constraint violation, 0 when feasible
};

/// Evolving non-dominated population.
template <class Genome>
struct Archive {
    std::vector<Member<Genome>> members;
    std::size_t nominal_size = 50;
    std::size_t max_size = 1000;

    std::vector<ObjectiveVector> objectives() const
    {
        std::vector<ObjectiveVector> out;
        out.reserve(members.size());
        for (const auto& m : members)
            out.push_back(m.objectives);
        return out;
    }
};

/// Orders members by (cost, privacy, violation, genome) so that downstream
/// tie-breaks do not depend on the order members were produced in.
template <class Genome>
void canonical_sort(std::vector<Member<Genome>>& members)
{
    std::sort(members.begin(), members.end(), [](const Member<Genome>& a, const Member<Genome>& b) {
        if (a.objectives.cost != b.objectives.cost)
            return a.objectives.cost < b.objectives.cost;
        if (a.objectives.privacy != b.objectives.privacy)
            return a.objectives.privacy < b.objectives.privacy;
        if (a.violation != b.violation)
            return a.violation < b.violation;
        return a.genome < b.genome;
    });
}

/// Canonically sorts `members` and drops dominated ones and repeated
/// objective vectors.
template <class Genome>
std::vector<Member<Genome>> nondominated(std::vector<Member<Genome>> members)
{
    canonical_sort(members);
    std::vector<ObjectiveVector> pts;
    pts.reserve(members.size());
    for (const auto& m : members)
        pts.push_back(m.objectives);
    std::vector<Member<Genome>> out;
    for (std::size_t i : nondominated_indices(pts))
        out.push_back(std::move(members[i]));
    return out;
}

/// Crowding-distance truncation down to `n_nom` members.
template <class Genome>
Archive<Genome> truncate(Archive<Genome> archive, std::size_t n_nom)
{
    if (archive.members.size() <= n_nom)
        return archive;
    const auto pts = archive.objectives();
    std::vector<Member<Genome>> kept;
    kept.reserve(n_nom);
    for (std::size_t i : crowding_survivors(pts, n_nom))
        kept.push_back(std::move(archive.members[i]));
    archive.members = std::move(kept);
    return archive;
}

template <class Genome>
const Genome& select_mmd(const Archive<Genome>& archive)
{
    if (archive.members.empty())
        throw Error("select_mmd: empty archive");
    const auto pts = archive.objectives();
    return archive.members[mmd_index(pts)].genome;
}

} // namespace hems
