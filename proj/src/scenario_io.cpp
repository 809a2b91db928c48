#include "hems/errors.hpp"
#include "hems/scenario.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace hems {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const json& at(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        throw ParseError(where + ": missing key '" + key + "'");
    return j.at(key);
}

double number(const json& j, const char* key, const std::string& where)
{
    const json& v = at(j, key, where);
    if (!v.is_number())
        throw ParseError(where + "." + key + ": expected a number");
    return v.get<double>();
}

/// 1-based slot index in the file, 0-based in memory.
std::size_t slot(const json& j, const char* key, const std::string& where)
{
    const json& v = at(j, key, where);
    if (!v.is_number_integer())
        throw ParseError(where + "." + key + ": expected an integer slot index");
    const auto raw = v.get<long long>();
    if (raw < 1)
        throw ValidationError(where + "." + key, "slot indices are 1-based, got " + std::to_string(raw));
    return static_cast<std::size_t>(raw - 1);
}

std::string label(const json& j, const std::string& where)
{
    if (!j.contains("id"))
        return where;
    if (!j.at("id").is_string())
        throw ParseError(where + ".id: expected a string");
    return j.at("id").get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& where)
{
    if (!v.is_array())
        throw ParseError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number())
            throw ParseError(where + ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

InflexibleAppliance parse_inflexible(const json& j, std::size_t n, const std::string& where)
{
    InflexibleAppliance a{label(j, where), {}};
    if (j.contains("load")) {
        a.load = numbers(j.at("load"), where + ".load");
        return a;
    }
    // Compact form: constant power over 1-based inclusive hour ranges.
    const double kw = number(j, "power", where);
    a.load.assign(n, 0.0);
    const json& ranges = at(j, "slots", where);
    if (!ranges.is_array())
        throw ParseError(where + ".slots: expected an array of [first, last] pairs");
    for (const auto& r : ranges) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
            throw ParseError(where + ".slots: expected an array of [first, last] pairs");
        const auto lo = r[0].get<long long>();
        const auto hi = r[1].get<long long>();
        if (lo < 1 || hi < lo || static_cast<std::size_t>(hi) > n)
            throw ValidationError(where + ".slots", "range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                                        "] outside 1.." + std::to_string(n));
        for (auto h = lo; h <= hi; ++h)
            a.load[static_cast<std::size_t>(h - 1)] = kw;
    }
    return a;
}

} // namespace

PriceSignal parse_price_csv(const std::string& text, std::size_t slot_count)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("price csv: empty document");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "slot,price")
        throw ParseError("price csv: header must be 'slot,price', got '" + line + "'");

    PriceSignal p;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        ++row;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("price csv row " + std::to_string(row) + ": expected 'slot,price'");
        long long idx = 0;
        const char* b = line.data();
        auto [ptr, ec] = std::from_chars(b, b + comma, idx);
        if (ec != std::errc{} || ptr != b + comma)
            throw ParseError("price csv row " + std::to_string(row) + ": bad slot index");
        if (idx != static_cast<long long>(row))
            throw ValidationError("prices.slot", "row " + std::to_string(row) + " has slot " + std::to_string(idx) +
                                                     "; slots must run 1.." + std::to_string(slot_count) + " in order");
        double price = 0.0;
        try {
            std::size_t used = 0;
            price = std::stod(line.substr(comma + 1), &used);
            if (used != line.size() - comma - 1)
                throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError("price csv row " + std::to_string(row) + ": bad price");
        }
        p.prices.push_back(price);
    }
    if (p.prices.size() != slot_count)
        throw ValidationError("prices", "expected " + std::to_string(slot_count) + " rows, got " +
                                            std::to_string(p.prices.size()));
    return p;
}

PriceSignal load_price_csv(const std::filesystem::path& path, std::size_t slot_count)
{
    return parse_price_csv(read_file(path), slot_count);
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("scenario: top level must be an object");

    ScenarioSpec spec;
    const json& horizon = at(doc, "horizon", "scenario");
    const json& count = at(horizon, "slot_count", "horizon");
    if (!count.is_number_integer() || count.get<long long>() <= 0)
        throw ParseError("horizon.slot_count: expected a positive integer");
    spec.horizon.slot_count = count.get<std::size_t>();
    spec.horizon.slot_hours = number(horizon, "slot_hours", "horizon");
    const std::size_t n = spec.horizon.slot_count;

    const json& prices = at(doc, "prices", "scenario");
    if (prices.is_array()) {
        spec.prices.prices = numbers(prices, "prices");
    } else if (prices.is_object() && prices.contains("csv") && prices.at("csv").is_string()) {
        std::filesystem::path p = prices.at("csv").get<std::string>();
        if (p.is_relative())
            p = base_dir / p;
        spec.prices = load_price_csv(p, n);
    } else {
        throw ParseError("prices: expected an array or {\"csv\": <path>}");
    }

    auto each = [&](const char* key, auto&& fn) {
        if (!doc.contains(key))
            return;
        const json& arr = doc.at(key);
        if (!arr.is_array())
            throw ParseError(std::string(key) + ": expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            fn(arr[i], std::string(key) + "[" + std::to_string(i) + "]");
    };

    each("inflexible", [&](const json& j, const std::string& w) { spec.inflexible.push_back(parse_inflexible(j, n, w)); });
    each("flexible", [&](const json& j, const std::string& w) {
        spec.flexible.push_back({label(j, w), number(j, "p_min", w), number(j, "p_max", w), slot(j, "start", w),
            slot(j, "end", w)});
    });
    each("shiftable", [&](const json& j, const std::string& w) {
        const json& d = at(j, "duration", w);
        if (!d.is_number_integer() || d.get<long long>() < 1)
            throw ValidationError(w + ".duration", "expected a positive integer");
        spec.shiftable.push_back({label(j, w), number(j, "power", w), slot(j, "window_start", w),
            slot(j, "window_end", w), d.get<std::size_t>()});
    });

    const json& bat = at(doc, "battery", "scenario");
    auto& b = spec.battery;
    b.alpha = number(bat, "alpha", "battery");
    b.beta_plus = number(bat, "beta_plus", "battery");
    b.beta_minus = number(bat, "beta_minus", "battery");
    b.s_max = number(bat, "s_max", "battery");
    b.b_min = number(bat, "b_min", "battery");
    b.b_max = number(bat, "b_max", "battery");
    b.b_init = bat.contains("b_init") ? number(bat, "b_init", "battery") : default_b_init(b.b_min, b.b_max);

    return Scenario(std::move(spec));
}

Scenario load_scenario(const std::filesystem::path& path)
{
    return parse_scenario(read_file(path), path.parent_path());
}

} // namespace hems
