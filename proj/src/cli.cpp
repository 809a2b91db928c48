#include "hems/cli.hpp"

#include "hems/community.hpp"
#include "hems/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace hems {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Files written by one command; removed again unless the command commits.
class OutputFiles {
public:
    explicit OutputFiles(fs::path dir) : dir_(std::move(dir)) {}
    OutputFiles(const OutputFiles&) = delete;
    OutputFiles& operator=(const OutputFiles&) = delete;
    ~OutputFiles()
    {
        if (committed_)
            return;
        std::error_code ec;
        for (const auto& p : written_)
            fs::remove(p, ec);
    }

    void write(const std::string& name, const std::string& content)
    {
        fs::create_directories(dir_);
        const fs::path p = dir_ / name;
        written_.push_back(p);
        std::ofstream f(p, std::ios::binary);
        if (!f)
            throw Error("cannot write " + p.string());
        f << content;
        if (!f)
            throw Error("failed writing " + p.string());
    }

    void commit() { committed_ = true; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool committed_ = false;
};

std::ostringstream csv_stream()
{
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    return os;
}

struct Options {
    std::string scenario = "table1";
    std::string prices;
    std::string method = "hybrid";
    std::string methods = "ws0,ws0.5,ws1,moia,moead,nsga2";
    std::optional<std::uint64_t> seed;
    std::size_t budget = 25000;
    std::string out = "out";
    std::size_t houses = 50;
    double epsilon = kDefaultEpsilon;
    double omega = 0.5;
    double k1 = 1e3;
    std::size_t workers = 1;
};

Scenario resolve_scenario(const Options& o)
{
    Scenario s = o.scenario == "table1" ? table1_scenario() : load_scenario(o.scenario);
    if (!o.prices.empty())
        s = with_prices(s, load_price_csv(o.prices, s.slot_count()));
    return s;
}

RunSettings settings_of(const Options& o, std::uint64_t seed)
{
    if (!(o.epsilon > 0.0))
        throw ValidationError("epsilon", "must be > 0");
    if (!(o.omega >= 0.0 && o.omega <= 1.0))
        throw ValidationError("omega", "must lie in [0, 1]");
    if (!(o.k1 > 0.0))
        throw ValidationError("k1", "must be > 0");
    if (o.budget == 0)
        throw ValidationError("budget", "must be positive");
    return RunSettings{seed, o.budget, o.epsilon, o.omega, o.k1, std::max<std::size_t>(1, o.workers)};
}

std::string convergence_csv(const std::vector<ConvergenceRecord>& records)
{
    auto os = csv_stream();
    os << "evaluations,archive_size,hypervolume\n";
    for (const auto& r : records)
        os << r.evaluations << ',' << r.archive_size << ',' << r.hypervolume << '\n';
    return os.str();
}

std::string front_csv(const std::vector<ObjectiveVector>& front)
{
    auto os = csv_stream();
    os << "cost,privacy\n";
    for (const auto& v : front)
        os << v.cost << ',' << v.privacy << '\n';
    return os.str();
}

json report_json(const RunReport& r)
{
    json j;
    j["method"] = r.method;
    j["seed"] = r.seed;
    j["budget"] = r.budget;
    j["objectives"] = {{"cost", r.objectives.cost}, {"privacy", r.objectives.privacy}};
    j["par"] = r.par ? json(*r.par) : json(nullptr);
    j["wall_clock_seconds"] = r.wall_seconds;
    json schedule = json::object();
    for (const auto& [id, load] : r.appliances)
        schedule[id] = load;
    j["schedule_kw"] = schedule;
    j["storage"] = {{"s_kw", r.storage.s}, {"b_kwh", r.storage.b}};
    j["total_kw"] = r.total;
    return j;
}

std::string schedule_csv(const RunReport& r)
{
    auto os = csv_stream();
    os << "slot";
    for (const auto& [id, load] : r.appliances)
        os << ',' << id;
    os << '\n';
    for (std::size_t h = 0; h < r.total.size(); ++h) {
        os << h + 1;
        for (const auto& [id, load] : r.appliances)
            os << ',' << load[h];
        os << '\n';
    }
    return os.str();
}

std::string storage_csv(const RunReport& r)
{
    auto os = csv_stream();
    os << "slot,s_kw,b_start_kwh,b_end_kwh,total_kw\n";
    for (std::size_t h = 0; h < r.total.size(); ++h)
        os << h + 1 << ',' << r.storage.s[h] << ',' << r.storage.b[h] << ',' << r.storage.b[h + 1] << ','
           << r.total[h] << '\n';
    return os.str();
}

std::string profile_csv(const LoadProfile& p)
{
    auto os = csv_stream();
    os << "slot,total_kw\n";
    for (std::size_t h = 0; h < p.size(); ++h)
        os << h + 1 << ',' << p[h] << '\n';
    return os.str();
}

std::vector<std::string> split_methods(const std::string& list)
{
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) {
            if (!is_method(item))
                throw ValidationError("methods", "unknown method '" + item + "'");
            out.push_back(item);
        }
    return out;
}

MethodResult run_checked(const Scenario& s, const std::string& method, const RunSettings& r)
{
    MethodResult result = run_method(s, method, r);
    // Nothing infeasible leaves the tool.
    require_valid_plan(s, result.plan);
    return result;
}

void cmd_schedule(const Options& o, std::uint64_t seed, std::ostream& out)
{
    const Scenario s = resolve_scenario(o);
    if (!is_method(o.method))
        throw ValidationError("method", "unknown method '" + o.method + "'");
    const RunSettings r = settings_of(o, seed);
    const auto t0 = std::chrono::steady_clock::now();
    const MethodResult result = run_checked(s, o.method, r);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const RunReport report = make_run_report(s, result, r, secs);

    OutputFiles files(o.out);
    files.write("report.json", report_json(report).dump(2) + "\n");
    files.write("schedule.csv", schedule_csv(report));
    files.write("storage.csv", storage_csv(report));
    files.write("total_load.csv", profile_csv(report.total));
    files.write("convergence.csv", convergence_csv(result.convergence));
    files.commit();
    out << "method " << report.method << ": cost " << report.objectives.cost << ", privacy "
        << report.objectives.privacy;
    if (report.par)
        out << ", PAR " << *report.par;
    out << " (" << secs << " s)\n";
}

void cmd_front(const Options& o, std::uint64_t seed, std::ostream& out)
{
    const Scenario s = resolve_scenario(o);
    if (!is_method(o.method))
        throw ValidationError("method", "unknown method '" + o.method + "'");
    const MethodResult result = run_checked(s, o.method, settings_of(o, seed));
    OutputFiles files(o.out);
    files.write("front.csv", front_csv(result.archive));
    files.commit();
    out << result.archive.size() << " archive members written to " << (files.dir() / "front.csv").string() << "\n";
}

void cmd_compare(const Options& o, std::uint64_t seed, std::ostream& out)
{
    const Scenario s = resolve_scenario(o);
    const auto methods = split_methods(o.methods);
    const RunSettings r = settings_of(o, seed);

    std::vector<MethodResult> results;
    results.push_back(run_checked(s, "hybrid", r));
    for (const auto& m : methods)
        results.push_back(run_checked(s, m, r));

    const NormalizationConstants k;
    std::vector<std::vector<ObjectiveVector>> fronts;
    for (const auto& res : results) {
        std::vector<ObjectiveVector> f;
        for (const auto& v : res.front)
            f.push_back(normalize_objectives(v, k));
        fronts.push_back(std::move(f));
    }
    const ObjectiveVector ref = reference_point(fronts);

    const ObjectiveVector base = results.front().plan.objectives;
    auto os = csv_stream();
    os << "method,cost,privacy,cost_increase_pct,privacy_degradation_pct,hypervolume\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& v = results[i].plan.objectives;
        os << results[i].method << ',' << v.cost << ',' << v.privacy << ',' << percent_change(v.cost, base.cost) << ','
           << percent_change(v.privacy, base.privacy) << ',' << hypervolume_2d(fronts[i], ref) << '\n';
    }
    OutputFiles files(o.out);
    files.write("comparison.csv", os.str());
    files.commit();
    out << os.str();
}

void cmd_community(const Options& o, std::uint64_t seed, std::ostream& out)
{
    Scenario s = resolve_scenario(o);
    if (!is_method(o.method))
        throw ValidationError("method", "unknown method '" + o.method + "'");
    if (o.houses == 0)
        throw ValidationError("houses", "must be at least 1");
    CommunitySpec spec{o.houses, s, {}, seed, 0};
    if (!s.shiftable().empty()) {
        // Shift the first washing window uniformly over three extra slots,
        // clipped to the horizon.
        const auto& c = s.shiftable().front();
        const std::size_t span = c.window_end - c.window_start;
        const std::size_t last = std::min(c.window_start + 3, s.slot_count() - 1 - span);
        spec.randomization.push_back({0, c.window_start, std::max(c.window_start, last)});
    }
    const CommunityResult result = simulate_community(spec, o.method, settings_of(o, seed));
    OutputFiles files(o.out);
    files.write("aggregate.csv", profile_csv(result.aggregate));
    json summary{{"method", o.method}, {"houses", o.houses}, {"seed", seed}, {"par", result.par}};
    files.write("community.json", summary.dump(2) + "\n");
    files.commit();
    out << o.houses << " houses, method " << o.method << ": PAR " << result.par << "\n";
}

} // namespace

std::vector<std::pair<std::string, LoadProfile>> appliance_table(const Scenario& s, const ScheduleGenome& g)
{
    check_genome(s, g);
    std::vector<std::pair<std::string, LoadProfile>> table;
    for (const auto& a : s.inflexible())
        table.emplace_back(a.id, a.load);
    for (std::size_t b = 0; b < s.flexible().size(); ++b) {
        const auto& a = s.flexible()[b];
        LoadProfile p(s.slot_count(), 0.0);
        for (std::size_t k = 0; k < g.flexible_power[b].size(); ++k)
            p[a.start_slot + k] = g.flexible_power[b][k];
        table.emplace_back(a.id, std::move(p));
    }
    for (std::size_t c = 0; c < s.shiftable().size(); ++c) {
        LoadProfile p(s.slot_count(), 0.0);
        for (std::size_t h : g.shiftable_slots[c])
            p[h] = s.shiftable()[c].rated_power;
        table.emplace_back(s.shiftable()[c].id, std::move(p));
    }
    return table;
}

RunReport make_run_report(const Scenario& s, const MethodResult& r, const RunSettings& settings, double wall_seconds)
{
    RunReport report;
    report.method = r.method;
    report.seed = settings.seed;
    report.budget = settings.budget;
    report.objectives = r.plan.objectives;
    report.appliances = appliance_table(s, r.plan.genome);
    report.storage = r.plan.storage;
    report.total = r.plan.total;
    try {
        report.par = par(r.plan.total);
    } catch (const Error&) {
        report.par.reset();
    }
    report.wall_seconds = wall_seconds;
    return report;
}

double percent_change(double value, double reference)
{
    if (reference == 0.0)
        return value == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), value);
    return (value - reference) / std::abs(reference) * 100.0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Day-ahead smart-home scheduler trading energy cost against load-variance privacy", "hems"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario, "Scenario JSON file, or 'table1' for the built-in household");
        sub->add_option("--prices", o.prices, "CSV (slot,price) overriding the scenario's prices");
        sub->add_option("--seed", o.seed, "Root random seed (drawn and printed when omitted)");
        sub->add_option("--budget", o.budget, "Objective evaluations per run")->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out, "Output directory");
        sub->add_option("--epsilon", o.epsilon, "Smoothing dead band, kW");
        sub->add_option("--omega", o.omega, "Weighted-sum coefficient in [0, 1]");
        sub->add_option("--k1", o.k1, "Penalty weight");
        sub->add_option("--workers", o.workers, "Worker threads for offspring evaluation");
    };

    auto* schedule = app.add_subcommand("schedule", "Run one method and write its report");
    common(schedule);
    schedule->add_option("--method", o.method, "Scheduler name");
    auto* compare = app.add_subcommand("compare", "Compare baselines against the hybrid at a matched budget");
    common(compare);
    compare->add_option("--methods", o.methods, "Comma-separated baselines");
    auto* community = app.add_subcommand("community", "Aggregate load and PAR of a community of houses");
    common(community);
    community->add_option("--method", o.method, "Scheduler name");
    community->add_option("--houses", o.houses, "Number of houses");
    auto* front = app.add_subcommand("front", "Dump the final archive as cost,privacy CSV");
    common(front);
    front->add_option("--method", o.method, "Scheduler name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        std::uint64_t seed = 0;
        if (o.seed) {
            seed = *o.seed;
        } else {
            std::random_device rd;
            seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            out << "seed: " << seed << "\n";
        }
        if (*schedule)
            cmd_schedule(o, seed, out);
        else if (*compare)
            cmd_compare(o, seed, out);
        else if (*community)
            cmd_community(o, seed, out);
        else
            cmd_front(o, seed, out);
        return exit_ok;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}

} // namespace hems
