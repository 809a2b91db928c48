#include "hems/metrics.hpp"

#include "hems/errors.hpp"
#include "hems/pareto.hpp"

#include <algorithm>

namespace hems {

double hypervolume_2d(std::span<const ObjectiveVector> front, const ObjectiveVector& reference)
{
    std::vector<ObjectiveVector> pts;
    pts.reserve(front.size());
    for (const auto& v : front)
        if (v.cost < reference.cost && v.privacy < reference.privacy)
            pts.push_back(v);
    std::sort(pts.begin(), pts.end(), lex_less);

    // Sweep by increasing cost; each point adds the strip between its
    // privacy and the best privacy seen so far.
    double area = 0.0;
    double ceiling = reference.privacy;
    for (const auto& v : pts) {
        if (v.privacy >= ceiling)
            continue;
        area += (reference.cost - v.cost) * (ceiling - v.privacy);
        ceiling = v.privacy;
    }
    return area;
}

ObjectiveVector reference_point(std::span<const std::vector<ObjectiveVector>> fronts, double margin)
{
    ObjectiveVector ref{0.0, 0.0};
    bool any = false;
    for (const auto& f : fronts)
        for (const auto& v : f) {
            ref.cost = any ? std::max(ref.cost, v.cost) : v.cost;
            ref.privacy = any ? std::max(ref.privacy, v.privacy) : v.privacy;
            any = true;
        }
    return {ref.cost * margin, ref.privacy * margin};
}

double par(std::span<const double> profile)
{
    if (profile.empty())
        throw Error("par: empty profile");
    double peak = profile.front();
    double low = profile.front();
    double sum = 0.0;
    for (double x : profile) {
        peak = std::max(peak, x);
        low = std::min(low, x);
        sum += x;
    }
    if (sum <= 0.0)
        throw Error("par: undefined for an all-zero profile");
    // A flat profile is exactly 1; the summed mean could round past the peak.
    if (low == peak)
        return 1.0;
    return std::max(1.0, peak / (sum / static_cast<double>(profile.size())));
}

} // namespace hems
