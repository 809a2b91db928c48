#include "hems/methods.hpp"

#include "hems/errors.hpp"

#include <algorithm>

namespace hems {

const std::vector<std::string>& method_names()
{
    static const std::vector<std::string> names{"hybrid", "weighted-sum", "ws0", "ws0.5", "ws1", "moia", "nsga2", "moead"};
    return names;
}

bool is_method(const std::string& name)
{
    const auto& n = method_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

OptimizerConfig optimizer_config(const RunSettings& r)
{
    OptimizerConfig cfg;
    cfg.rng_seed = r.seed;
    cfg.max_evaluations = r.budget;
    cfg.epsilon = r.epsilon;
    cfg.workers = r.workers;
    return cfg;
}

MethodResult run_method(const Scenario& s, const std::string& name, const RunSettings& r)
{
    if (!is_method(name))
        throw ValidationError("method", "unknown method '" + name + "'");
    const OptimizerConfig cfg = optimizer_config(r);
    PenaltyConfig pcfg;
    pcfg.k1 = r.k1;
    pcfg.omega = r.omega;

    MethodResult out;
    out.method = name;
    if (name == "hybrid") {
        ScheduleArchive archive;
        out.plan = plan(s, cfg, &out.convergence, &archive);
        out.archive = archive.objectives();
        out.front = smoothed_front(s, archive, cfg.epsilon);
    } else if (name == "weighted-sum" || name.starts_with("ws")) {
        if (name == "ws0")
            pcfg.omega = 0.0;
        else if (name == "ws0.5")
            pcfg.omega = 0.5;
        else if (name == "ws1")
            pcfg.omega = 1.0;
        out.plan = weighted_sum_optimize(s, pcfg, cfg, &out.convergence);
        out.archive = {out.plan.objectives};
        out.front = out.archive;
    } else {
        BatteryArchive archive;
        if (name == "moia")
            archive = moia_optimize(s, cfg, &out.convergence);
        else
            archive = penalty_mop_optimize(s,
                name == "nsga2" ? PenaltyVariant::nondominated_sorting : PenaltyVariant::decomposition, pcfg, cfg,
                &out.convergence);
        out.plan = archive_plan(s, archive);
        out.archive = archive.objectives();
        out.front = feasible_front(archive);
        if (out.front.empty())
            out.front = {out.plan.objectives};
    }
    return out;
}

} // namespace hems
