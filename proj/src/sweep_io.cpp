#include "magnoent/sweep_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "magnoent/errors.hpp"

namespace magnoent {

namespace {

std::optional<AxisScale> parse_scale(const std::string& s)
{
    if (s == "linear") {
        return AxisScale::Linear;
    }
    if (s == "log") {
        return AxisScale::Log;
    }
    return std::nullopt;
}

RunConfig::Threshold parse_threshold(const std::string& text)
{
    const auto parts = split_trimmed(text, ',');
    if (parts.size() < 3 || parts.size() > 5) {
        throw ConfigError("threshold: expected 'name, lo, hi[, linear|log][, relative_to]'");
    }
    RunConfig::Threshold t;
    std::string relative;
    if (parts.size() >= 4) {
        const auto s = parse_scale(parts[3]);
        if (!s) {
            throw ConfigError("threshold: scale must be 'linear' or 'log'");
        }
        t.scale = *s;
    }
    if (parts.size() == 5) {
        relative = parts[4];
    }
    t.axis = AxisTarget::parse(parts[0], relative);
    t.lo = parse_number(parts[1], "threshold lo");
    t.hi = parse_number(parts[2], "threshold hi");
    return t;
}

nlohmann::json axis_json(const Axis& a)
{
    return {{"parameter", a.target.field},
            {"label", a.target.label()},
            {"unit", a.target.unit_label()},
            {"min", a.min},
            {"max", a.max},
            {"count", a.count},
            {"scale", a.scale == AxisScale::Log ? "log" : "linear"}};
}

} // namespace

ModePair parse_pair(std::string_view text)
{
    std::string s(text);
    for (char& c : s) {
        if (c == ',') {
            c = ' ';
        }
    }
    std::istringstream in(s);
    std::string a;
    std::string b;
    std::string extra;
    if (!(in >> a >> b) || (in >> extra)) {
        throw ConfigError("pair: expected two modes, got '" + std::string(text) + "'");
    }
    try {
        return ModePair(parse_mode(a), parse_mode(b));
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("pair: ") + e.what());
    }
}

RunConfig run_config_from(const std::vector<KeyValue>& kvs)
{
    RunConfig rc;
    for (const auto& kv : kvs) {
        const std::string where = "line " + std::to_string(kv.line) + ": ";
        if (kv.key == "axis1" || kv.key == "axis2") {
            const std::size_t slot = kv.key == "axis1" ? 0 : 1;
            if (rc.axes.size() <= slot) {
                rc.axes.resize(slot + 1);
            }
            rc.axes[slot] = Axis::parse(kv.value);
        } else if (kv.key == "pair") {
            rc.pair = parse_pair(kv.value);
        } else if (kv.key == "output") {
            rc.output = kv.value;
        } else if (kv.key == "threshold") {
            rc.threshold = parse_threshold(kv.value);
        } else if (kv.key == "profile") {
            rc.profile = Axis::parse(kv.value);
        } else if (!rc.params.assign(kv.key, kv.value)) {
            throw ConfigError(where + "unknown key '" + kv.key + "'");
        }
    }
    if (rc.axes.size() == 2 && rc.axes[0].target.field.empty()) {
        throw ConfigError("axis2 given without axis1");
    }
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    return run_config_from(read_key_values(path));
}

SweepSpec RunConfig::sweep_spec() const
{
    if (axes.empty()) {
        throw ConfigError("sweep config has no axis1");
    }
    SweepSpec spec;
    spec.base = params;
    spec.axes = axes;
    if (pair) {
        spec.pair = *pair;
    }
    if (output) {
        spec.output = *output;
    }
    spec.validate();
    return spec;
}

ThresholdSpec RunConfig::threshold_spec() const
{
    if (!threshold) {
        throw ConfigError("config has no 'threshold' entry");
    }
    ThresholdSpec spec;
    spec.base = params;
    spec.axis = threshold->axis;
    spec.lo = threshold->lo;
    spec.hi = threshold->hi;
    spec.scale = threshold->scale;
    spec.profile = profile;
    if (pair) {
        spec.pair = *pair;
    }
    return spec;
}

std::string format_double(double x)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) {
        throw NumericalError("cannot format double");
    }
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const SweepResult& r)
{
    out << "axis1,axis2,E_N,status\n";
    const std::size_t n2 = r.axis2.empty() ? 1 : r.axis2.size();
    for (std::size_t i = 0; i < r.axis1.size(); ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const auto& p = r.at(i, j);
            out << format_double(r.axis1[i]) << ',';
            if (!r.axis2.empty()) {
                out << format_double(r.axis2[j]);
            }
            out << ',';
            if (p.status == PointStatus::Ok) {
                out << format_double(p.log_negativity);
            }
            out << ',' << to_string(p.status) << '\n';
        }
    }
}

std::string csv_text(const SweepResult& r)
{
    std::ostringstream out;
    write_csv(out, r);
    return out.str();
}

nlohmann::json params_json(const SystemParams& p)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& f : param_fields()) {
        j[std::string(f.name)] = p.*(f.member);
    }
    return j;
}

nlohmann::json sweep_metadata(const SweepResult& r)
{
    nlohmann::json links = nlohmann::json::array();
    for (const auto& l : r.links) {
        links.push_back({{"target", l.target}, {"factor", l.factor}, {"source", l.source}});
    }
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : r.axes) {
        axes.push_back(axis_json(a));
    }
    std::size_t first_max = 0;
    for (std::size_t k = 0; k < r.points.size(); ++k) {
        if (r.points[k].status == PointStatus::Ok
            && r.points[k].log_negativity > r.points[first_max].log_negativity) {
            first_max = k;
        }
    }
    return {{"version", r.version},
            {"timestamp", r.timestamp},
            {"pair", {std::string(to_string(r.pair.first())), std::string(to_string(r.pair.second()))}},
            {"units", "angular frequencies in rad/s, temperature in K"},
            {"base_params", params_json(r.base)},
            {"links", links},
            {"axes", axes},
            {"rows", r.rows()},
            {"ok", r.count(PointStatus::Ok)},
            {"unstable", r.count(PointStatus::Unstable)},
            {"error", r.count(PointStatus::Error)},
            {"max_E_N", r.max_log_negativity()},
            {"max_E_N_row", r.rows() == 0 ? 0 : first_max}};
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv)
{
    auto p = csv;
    p.replace_extension(".json");
    return p;
}

void write_sweep(const SweepResult& r, const std::filesystem::path& csv)
{
    {
        std::ofstream out(csv);
        if (!out) {
            throw ConfigError("cannot write '" + csv.string() + "'");
        }
        write_csv(out, r);
    }
    std::ofstream meta(sidecar_path(csv));
    if (!meta) {
        throw ConfigError("cannot write '" + sidecar_path(csv).string() + "'");
    }
    meta << sweep_metadata(r).dump(2) << '\n';
}

} // namespace magnoent
