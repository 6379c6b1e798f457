#include "decoheat/config.hpp"

#include "decoheat/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace decoheat::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long long> to_int(std::string_view s) {
    s = trim(s);
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

struct Entry {
    std::string value;
    int line;
};

// Reads typed values out of the raw entries and records every problem.
class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    std::vector<std::string>& errors() { return errors_; }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    void read(const std::string& key, double& out) {
        auto it = take(key);
        if (!it) return;
        if (auto v = to_double(*it)) out = *v;
        else mismatch(key, "real number", *it);
    }

    void read(const std::string& key, int& out) {
        auto it = take(key);
        if (!it) return;
        auto v = to_int(*it);
        if (v && *v >= std::numeric_limits<int>::min() && *v <= std::numeric_limits<int>::max())
            out = static_cast<int>(*v);
        else
            mismatch(key, "integer", *it);
    }

    void read(const std::string& key, std::optional<int>& out) {
        if (!has(key)) return;
        int v = 0;
        const std::size_t before = errors_.size();
        read(key, v);
        if (errors_.size() == before) out = v;
    }

    void read(const std::string& key, std::size_t& out) {
        auto it = take(key);
        if (!it) return;
        auto v = to_int(*it);
        if (v && *v >= 0) out = static_cast<std::size_t>(*v);
        else mismatch(key, "non-negative integer", *it);
    }

    void read(const std::string& key, std::string& out) {
        if (auto it = take(key)) out = *it;
    }

    void read(const std::string& key, std::vector<double>& out) {
        auto it = take(key);
        if (!it) return;
        std::vector<double> values;
        std::string_view rest = *it;
        while (true) {
            const auto comma = rest.find(',');
            const auto piece = rest.substr(0, comma);
            auto v = to_double(piece);
            if (!v) {
                mismatch(key, "comma-separated list of real numbers", *it);
                return;
            }
            values.push_back(*v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        out = std::move(values);
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        std::string v = it->second.value;
        entries_.erase(it);
        return v;
    }

    void mismatch(const std::string& key, const char* expected, const std::string& got) {
        errors_.push_back(key + ": expected " + expected + ", got '" + got + "'");
    }

    // Whatever is left over was never consumed.
    void report_unknown() {
        for (const auto& [key, entry] : entries_)
            errors_.push_back("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }

private:
    std::map<std::string, Entry> entries_;
    std::vector<std::string> errors_;
};

void apply_experiment_defaults(RunConfig& c, const Reader& r) {
    auto set_list = [&](const char* key, std::vector<double>& target, std::vector<double> values) {
        if (!r.has(key)) target = std::move(values);
    };
    switch (c.experiment) {
    case Experiment::Decoherence:
        set_list("sweeps.g", c.couplings, {0.1, 0.5, 1.0});
        set_list("sweeps.T", c.temperatures, {0.0, 0.01, 0.1});
        c.time = {TimeScale::Log, 0.1, 1000.0, 200};
        break;
    case Experiment::HeatVsTime:
        set_list("sweeps.g", c.couplings, {0.1, 0.5, 1.0});
        set_list("sweeps.T", c.temperatures, {0.0, 0.01, 0.1});
        c.time = {TimeScale::Linear, 0.0, 100.0, 400};
        break;
    case Experiment::HeatDistribution:
        set_list("sweeps.g", c.couplings, {0.5, 1.0});
        set_list("sweeps.T", c.temperatures, {0.1});
        c.time = {TimeScale::Linear, 0.0, 100.0, 400};
        break;
    case Experiment::HeatVsTemperature:
        set_list("sweeps.g", c.couplings, {0.1, 1.0});
        set_list("sweeps.T", c.temperatures, {0.01, 0.05, 0.1, 0.5, 1.0});
        c.time = {TimeScale::Linear, 0.0, 100.0, 400};
        break;
    case Experiment::Validate:
        set_list("sweeps.g", c.couplings, {0.1, 0.5, 1.0});
        set_list("sweeps.T", c.temperatures, {0.05, 0.5});
        c.time = {TimeScale::Linear, 0.5, 10.0, 5};
        break;
    }
}

void check(RunConfig& c, std::vector<std::string>& errors) {
    const auto& l = c.lattice;
    if (l.sites < 3) errors.push_back("lattice.L: must be >= 3 (got " + std::to_string(l.sites) + ")");
    else if (l.sites > 100000) errors.push_back("lattice.L: unreasonably large");
    if (!(l.hopping > 0)) errors.push_back("lattice.hopping: must be > 0");
    if (l.particles && (*l.particles <= 0 || *l.particles > l.sites))
        errors.push_back("lattice.N: must satisfy 0 < N <= L");
    if (l.impurity_site < 1 || l.impurity_site > l.sites)
        errors.push_back("lattice.impurity_site: must lie in [1, L]");
    if (c.couplings.empty()) errors.push_back("sweeps.g: must be nonempty");
    if (c.temperatures.empty()) errors.push_back("sweeps.T: must be nonempty");
    for (double T : c.temperatures)
        if (T < 0) errors.push_back("sweeps.T: temperatures must be >= 0");
    if (!(c.time.start < c.time.stop)) errors.push_back("time: start must be < stop");
    if (c.time.points < 2) errors.push_back("time.points: must be >= 2");
    if (c.time.scale == TimeScale::Log && !(c.time.start > 0))
        errors.push_back("time.start: log grids need start > 0");
    if (c.time.scale == TimeScale::Linear && c.time.start < 0)
        errors.push_back("time.start: must be >= 0");
    if (!(c.counting.q_max > 0)) errors.push_back("counting.qmax: must be > 0");
    if (!(c.counting.sigma > 0)) errors.push_back("counting.sigma: must be > 0");
    if (!(c.counting.tf >= 0)) errors.push_back("counting.tf: must be >= 0");
    if (!(c.window.start >= 0 && c.window.start < c.window.stop))
        errors.push_back("window: need 0 <= start < stop");
    if (c.window.points < 2) errors.push_back("window.points: must be >= 2");
    if (!(c.delta_u > 0)) errors.push_back("moments.delta_u: must be > 0");
    if (c.experiment == Experiment::HeatDistribution && l.hopping > 0) {
        double g_max = 0.0;
        for (double g : c.couplings) g_max = std::max(g_max, std::abs(g));
        const double need = 2.0 * l.hopping + g_max;
        if (c.counting.q_max < need)
            errors.push_back("counting.qmax: must be >= 2*hopping + max|g| = " + format_double(need) +
                             " to cover the spectral support");
    }
    if (c.experiment == Experiment::HeatVsTemperature)
        for (double T : c.temperatures)
            if (T == 0) errors.push_back("sweeps.T: heat-vs-temperature needs T > 0");
}

} // namespace

std::string_view to_string(Experiment e) {
    switch (e) {
    case Experiment::Decoherence: return "decoherence";
    case Experiment::HeatVsTime: return "heat-vs-time";
    case Experiment::HeatDistribution: return "heat-distribution";
    case Experiment::HeatVsTemperature: return "heat-vs-temperature";
    case Experiment::Validate: return "validate";
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
    for (Experiment e : {Experiment::Decoherence, Experiment::HeatVsTime, Experiment::HeatDistribution,
                         Experiment::HeatVsTemperature, Experiment::Validate})
        if (to_string(e) == name) return e;
    return std::nullopt;
}

std::vector<double> TimeGrid::values() const {
    if (scale == TimeScale::Linear) return heat::linspace(start, stop, points);
    std::vector<double> out(static_cast<std::size_t>(points));
    const double a = std::log(start), b = std::log(stop);
    for (int i = 0; i < points; ++i)
        out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
    out.front() = start;
    out.back() = stop;
    return out;
}

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, p);
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
        return s;
    };
    return {
        {"experiment", std::string(to_string(experiment))},
        {"lattice.L", std::to_string(lattice.sites)},
        {"lattice.hopping", format_double(lattice.hopping)},
        {"lattice.N", std::to_string(lattice.target_number())},
        {"lattice.epsilon", format_double(lattice.qubit_splitting)},
        {"lattice.impurity_site", std::to_string(lattice.impurity_site)},
        {"sweeps.g", list(couplings)},
        {"sweeps.T", list(temperatures)},
        {"time.scale", time.scale == TimeScale::Log ? "log" : "linear"},
        {"time.start", format_double(time.start)},
        {"time.stop", format_double(time.stop)},
        {"time.points", std::to_string(time.points)},
        {"counting.qmax", format_double(counting.q_max)},
        {"counting.sigma", format_double(counting.sigma)},
        {"counting.tf", format_double(counting.tf)},
        {"window.start", format_double(window.start)},
        {"window.stop", format_double(window.stop)},
        {"window.points", std::to_string(window.points)},
        {"moments.delta_u", format_double(delta_u)},
        {"output", output},
        {"threads", std::to_string(threads)},
    };
}

RunConfig parse_config(std::string_view text, std::optional<Experiment> experiment_override) {
    std::map<std::string, Entry> entries;
    std::vector<std::string> errors;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected key=value");
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            errors.push_back("line " + std::to_string(line_no) + ": empty key");
            continue;
        }
        if (!entries.emplace(key, Entry{value, line_no}).second)
            errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }

    Reader r(std::move(entries));
    RunConfig c;
    if (auto e = r.take("experiment")) {
        auto parsed = parse_experiment(*e);
        if (!parsed) r.errors().push_back("experiment: unknown experiment '" + *e + "'");
        else if (experiment_override && *experiment_override != *parsed)
            r.errors().push_back("experiment: config says '" + *e + "' but '" +
                                 std::string(to_string(*experiment_override)) + "' was requested");
        else c.experiment = *parsed;
    }
    if (experiment_override) c.experiment = *experiment_override;

    apply_experiment_defaults(c, r);

    r.read("lattice.L", c.lattice.sites);
    r.read("lattice.hopping", c.lattice.hopping);
    r.read("lattice.N", c.lattice.particles);
    r.read("lattice.epsilon", c.lattice.qubit_splitting);
    r.read("lattice.impurity_site", c.lattice.impurity_site);
    r.read("sweeps.g", c.couplings);
    r.read("sweeps.T", c.temperatures);
    if (auto s = r.take("time.scale")) {
        if (*s == "log") c.time.scale = TimeScale::Log;
        else if (*s == "linear") c.time.scale = TimeScale::Linear;
        else r.mismatch("time.scale", "'log' or 'linear'", *s);
    }
    r.read("time.start", c.time.start);
    r.read("time.stop", c.time.stop);
    r.read("time.points", c.time.points);
    r.read("counting.qmax", c.counting.q_max);
    r.read("counting.sigma", c.counting.sigma);
    r.read("counting.tf", c.counting.tf);
    r.read("window.start", c.window.start);
    r.read("window.stop", c.window.stop);
    r.read("window.points", c.window.points);
    r.read("moments.delta_u", c.delta_u);
    r.read("output", c.output);
    r.read("threads", c.threads);
    r.report_unknown();

    for (auto& e : r.errors()) errors.push_back(std::move(e));
    check(c, errors);
    if (c.output.empty()) c.output = std::string(to_string(c.experiment)) + ".csv";

    if (!errors.empty()) {
        std::ostringstream os;
        os << "invalid configuration:";
        for (const auto& e : errors) os << "\n  " << e;
        throw ValidationError(os.str());
    }
    return c;
}

std::string extract_echoed_config(std::string_view csv_text) {
    constexpr std::string_view prefix = "# config: ";
    std::string out;
    std::size_t pos = 0;
    while (pos < csv_text.size()) {
        const auto nl = csv_text.find('\n', pos);
        const auto line = csv_text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? csv_text.size() : nl + 1;
        if (line.substr(0, prefix.size()) == prefix) {
            out += line.substr(prefix.size());
            out += '\n';
        }
    }
    return out;
}

} // namespace decoheat::cli
