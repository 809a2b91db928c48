#include "hems/pareto.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace hems {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double coord(const ObjectiveVector& v, int k) { return k == 0 ? v.cost : v.privacy; }

std::vector<std::size_t> lex_order(std::span<const ObjectiveVector> pts, std::span<const std::size_t> idx, int primary)
{
    std::vector<std::size_t> order(idx.begin(), idx.end());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double a0 = coord(pts[a], primary), b0 = coord(pts[b], primary);
        if (a0 != b0)
            return a0 < b0;
        const double a1 = coord(pts[a], 1 - primary), b1 = coord(pts[b], 1 - primary);
        if (a1 != b1)
            return a1 < b1;
        return a < b;
    });
    return order;
}

} // namespace

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b)
{
    return a.cost <= b.cost && a.privacy <= b.privacy && (a.cost < b.cost || a.privacy < b.privacy);
}

bool lex_less(const ObjectiveVector& a, const ObjectiveVector& b)
{
    if (a.cost != b.cost)
        return a.cost < b.cost;
    return a.privacy < b.privacy;
}

std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points)
{
    std::vector<std::size_t> all(points.size());
    std::iota(all.begin(), all.end(), 0);
    const auto order = lex_order(points, all, 0);
    std::vector<std::size_t> out;
    double best_privacy = kInf;
    for (std::size_t i : order) {
        if (out.empty() || points[i].privacy < best_privacy) {
            out.push_back(i);
            best_privacy = points[i].privacy;
        }
    }
    return out;
}

std::vector<double> crowding_distances(std::span<const ObjectiveVector> points)
{
    const std::size_t n = points.size();
    std::vector<double> d(n, 0.0);
    if (n == 0)
        return d;
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (int k = 0; k < 2; ++k) {
        const auto order = lex_order(points, all, k);
        const double range = coord(points[order.back()], k) - coord(points[order.front()], k);
        d[order.front()] = kInf;
        d[order.back()] = kInf;
        if (range <= 0.0)
            continue;
        for (std::size_t j = 1; j + 1 < n; ++j)
            d[order[j]] += (coord(points[order[j + 1]], k) - coord(points[order[j - 1]], k)) / range;
    }
    return d;
}

std::vector<std::size_t> crowding_survivors(std::span<const ObjectiveVector> points, std::size_t keep)
{
    // Drop repeated vectors first.
    std::vector<std::size_t> all(points.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> unique;
    {
        const auto order = lex_order(points, all, 0);
        for (std::size_t j = 0; j < order.size(); ++j)
            if (j == 0 || !(points[order[j]] == points[order[j - 1]]))
                unique.push_back(order[j]);
        std::sort(unique.begin(), unique.end());
    }
    if (unique.size() <= keep)
        return unique;

    const std::size_t n = points.size();
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> prev[2], next[2];
    double range[2];
    for (int k = 0; k < 2; ++k) {
        prev[k].assign(n, none);
        next[k].assign(n, none);
        const auto order = lex_order(points, unique, k);
        for (std::size_t j = 0; j < order.size(); ++j) {
            if (j > 0)
                prev[k][order[j]] = order[j - 1];
            if (j + 1 < order.size())
                next[k][order[j]] = order[j + 1];
        }
        range[k] = coord(points[order.back()], k) - coord(points[order.front()], k);
    }

    auto distance = [&](std::size_t i) {
        double d = 0.0;
        for (int k = 0; k < 2; ++k) {
            if (prev[k][i] == none || next[k][i] == none)
                return kInf;
            if (range[k] > 0.0)
                d += (coord(points[next[k][i]], k) - coord(points[prev[k][i]], k)) / range[k];
        }
        return d;
    };

    std::vector<double> dist(n, kInf);
    std::set<std::pair<double, std::size_t>> queue;
    for (std::size_t i : unique) {
        dist[i] = distance(i);
        queue.emplace(dist[i], i);
    }

    std::vector<bool> alive(n, false);
    for (std::size_t i : unique)
        alive[i] = true;
    std::size_t remaining = unique.size();
    while (remaining > keep) {
        const std::size_t victim = queue.begin()->second;
        queue.erase(queue.begin());
        alive[victim] = false;
        --remaining;
        std::size_t touched[4];
        int t = 0;
        for (int k = 0; k < 2; ++k) {
            const std::size_t p = prev[k][victim], q = next[k][victim];
            if (p != none)
                next[k][p] = q;
            if (q != none)
                prev[k][q] = p;
            touched[t++] = p;
            touched[t++] = q;
        }
        for (std::size_t i : touched) {
            if (i == none || !alive[i])
                continue;
            const double d = distance(i);
            if (d != dist[i]) {
                queue.erase({dist[i], i});
                dist[i] = d;
                queue.emplace(d, i);
            }
        }
    }

    std::vector<std::size_t> out;
    out.reserve(keep);
    for (std::size_t i : unique)
        if (alive[i])
            out.push_back(i);
    return out;
}

std::size_t mmd_index(std::span<const ObjectiveVector> points)
{
    if (points.empty())
        throw Error("mmd selection over an empty set");
    std::vector<std::size_t> all(points.size());
    std::iota(all.begin(), all.end(), 0);
    const auto order = lex_order(points, all, 0);

    double min_c = kInf, max_c = -kInf, min_p = kInf, max_p = -kInf;
    for (const auto& v : points) {
        min_c = std::min(min_c, v.cost);
        max_c = std::max(max_c, v.cost);
        min_p = std::min(min_p, v.privacy);
        max_p = std::max(max_p, v.privacy);
    }
    const double spread_c = max_c - min_c;
    const double spread_p = max_p - min_p;

    // Distance to the normalised ideal point; differences below the tolerance
    // count as ties and keep the earlier member in lexicographic order.
    constexpr double tie_tolerance = 1e-12;
    std::size_t best = order.front();
    double best_d = kInf;
    for (std::size_t i : order) {
        const double yc = spread_c > 0.0 ? (points[i].cost - min_c) / spread_c : 0.0;
        const double yp = spread_p > 0.0 ? (points[i].privacy - min_p) / spread_p : 0.0;
        const double d = yc + yp;
        if (d < best_d - tie_tolerance) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<std::size_t> pareto_ranks(std::span<const ObjectiveVector> points)
{
    const std::size_t n = points.size();
    std::vector<std::size_t> rank(n, 0), dominated_by(n, 0);
    std::vector<std::vector<std::size_t>> dominates_list(n);
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            if (dominates(points[i], points[j]))
                dominates_list[i].push_back(j);
            else if (dominates(points[j], points[i]))
                ++dominated_by[i];
        }
        if (dominated_by[i] == 0)
            front.push_back(i);
    }
    std::size_t r = 0;
    while (!front.empty()) {
        std::vector<std::size_t> next_front;
        for (std::size_t i : front) {
            rank[i] = r;
            for (std::size_t j : dominates_list[i])
                if (--dominated_by[j] == 0)
                    next_front.push_back(j);
        }
        front = std::move(next_front);
        ++r;
    }
    return rank;
}

} // namespace hems
