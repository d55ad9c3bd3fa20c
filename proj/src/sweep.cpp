#include "magnoent/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

#include <omp.h>

#include "magnoent/errors.hpp"
#include "magnoent/version.hpp"

namespace magnoent {

namespace {

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

EntanglementResult evaluate_one(const GridPoint& point, const ModePair& pair)
{
    if (!point.error.empty()) {
        return {PointStatus::Error, 0.0, 0.0, point.error};
    }
    try {
        return entanglement_at(point.params, pair);
    } catch (const Error& e) {
        return {PointStatus::Error, 0.0, 0.0, e.what()};
    }
}

// Links whose target an axis overrides are dropped for the sweep.
std::vector<ParamLink> free_links(const ParamConfig& base, const std::vector<const AxisTarget*>& targets)
{
    std::vector<ParamLink> links = base.links;
    for (const AxisTarget* t : targets) {
        std::erase_if(links, [&](const ParamLink& l) { return l.target == t->field; });
    }
    return links;
}

SystemParams resolved_base(const ParamConfig& base)
{
    try {
        return base.resolved();
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("invalid base parameters: ") + e.what());
    }
}

GridPoint make_point(const ParamConfig& base, const std::vector<ParamLink>& links,
                     const SystemParams& reference,
                     const std::vector<std::pair<const AxisTarget*, double>>& settings)
{
    GridPoint gp;
    gp.params = base.values;
    try {
        for (const auto& [target, coord] : settings) {
            target->apply(gp.params, coord, reference);
        }
        apply_links(gp.params, links);
        gp.params.validate();
    } catch (const Error& e) {
        gp.error = e.what();
    }
    return gp;
}

} // namespace

AxisTarget AxisTarget::parse(std::string_view name, std::string_view relative_to)
{
    AxisTarget t;
    const std::string n(name);
    if (find_param_field(n) != nullptr) {
        t.field = n;
        t.unit = AxisUnit::Native;
    } else if (ends_with(n, "_hz")
               && find_param_field(n.substr(0, n.size() - 3)) != nullptr
               && find_param_field(n.substr(0, n.size() - 3))->quantity == Quantity::Frequency) {
        t.field = n.substr(0, n.size() - 3);
        t.unit = AxisUnit::Hertz;
    } else if (ends_with(n, "_k")
               && find_param_field(n.substr(0, n.size() - 2)) != nullptr
               && find_param_field(n.substr(0, n.size() - 2))->quantity == Quantity::Temperature) {
        t.field = n.substr(0, n.size() - 2);
        t.unit = AxisUnit::Kelvin;
    } else {
        throw ConfigError("axis: unknown parameter '" + n + "'");
    }
    if (!relative_to.empty()) {
        const ParamField* ref = find_param_field(relative_to);
        if (t.unit != AxisUnit::Native || ref == nullptr) {
            throw ConfigError("axis: relative unit '" + std::string(relative_to)
                              + "' must name a parameter and the axis must use a bare field name");
        }
        if (ref->quantity != find_param_field(t.field)->quantity) {
            throw ConfigError("axis: '" + t.field + "' cannot be measured in units of '"
                              + std::string(relative_to) + "'");
        }
        t.unit = AxisUnit::Relative;
        t.relative_to = std::string(relative_to);
    }
    return t;
}

std::string AxisTarget::label() const
{
    switch (unit) {
    case AxisUnit::Hertz:
        return field + "_hz";
    case AxisUnit::Kelvin:
        return field + "_k";
    case AxisUnit::Relative:
        return field + "/" + relative_to;
    case AxisUnit::Native:
        break;
    }
    return field;
}

std::string AxisTarget::unit_label() const
{
    switch (unit) {
    case AxisUnit::Hertz:
        return "Hz";
    case AxisUnit::Kelvin:
        return "K";
    case AxisUnit::Relative:
        return relative_to;
    case AxisUnit::Native:
        break;
    }
    return find_param_field(field)->quantity == Quantity::Temperature ? "K" : "rad/s";
}

void AxisTarget::apply(SystemParams& p, double coordinate, const SystemParams& reference) const
{
    const ParamField* f = find_param_field(field);
    double value = coordinate;
    switch (unit) {
    case AxisUnit::Hertz:
        value = constants::two_pi * coordinate;
        break;
    case AxisUnit::Relative:
        value = coordinate * (reference.*(find_param_field(relative_to)->member));
        break;
    case AxisUnit::Native:
    case AxisUnit::Kelvin:
        break;
    }
    p.*(f->member) = value;
}

Axis Axis::parse(std::string_view text)
{
    const auto parts = split_trimmed(text, ',');
    if (parts.size() < 4 || parts.size() > 6) {
        throw ConfigError("axis: expected 'name, min, max, count[, linear|log][, relative_to]', got '"
                          + std::string(text) + "'");
    }
    Axis a;
    std::string relative;
    if (parts.size() >= 5) {
        if (parts[4] == "linear") {
            a.scale = AxisScale::Linear;
        } else if (parts[4] == "log") {
            a.scale = AxisScale::Log;
        } else {
            throw ConfigError("axis: scale must be 'linear' or 'log', got '" + parts[4] + "'");
        }
    }
    if (parts.size() == 6) {
        relative = parts[5];
    }
    a.target = AxisTarget::parse(parts[0], relative);
    a.min = parse_number(parts[1], "axis min");
    a.max = parse_number(parts[2], "axis max");
    const double count = parse_number(parts[3], "axis count");
    if (count != std::floor(count) || count < 1 || count > 1e7) {
        throw ConfigError("axis: point count must be a positive integer");
    }
    a.count = static_cast<int>(count);
    a.validate();
    return a;
}

void Axis::validate() const
{
    if (find_param_field(target.field) == nullptr) {
        throw ConfigError("axis: unknown parameter '" + target.field + "'");
    }
    if (!std::isfinite(min) || !std::isfinite(max)) {
        throw ConfigError("axis '" + target.label() + "': bounds must be finite");
    }
    if (count == 1) {
        if (min != max) {
            throw ConfigError("axis '" + target.label() + "': a one-point axis needs min == max");
        }
    } else if (count < 2 || !(min < max)) {
        throw ConfigError("axis '" + target.label() + "': need count >= 2 and min < max");
    }
    if (scale == AxisScale::Log && !(min > 0.0)) {
        throw ConfigError("axis '" + target.label() + "': log scale needs min > 0");
    }
}

double Axis::coordinate(int i) const
{
    if (count == 1) {
        return min;
    }
    if (i == count - 1) {
        return max;
    }
    if (scale == AxisScale::Log) {
        return min * std::pow(max / min, static_cast<double>(i) / (count - 1));
    }
    return (min * (count - 1 - i) + max * i) / (count - 1);
}

std::vector<double> Axis::coordinates() const
{
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        out[i] = coordinate(i);
    }
    return out;
}

void SweepSpec::validate() const
{
    if (axes.empty() || axes.size() > 2) {
        throw ConfigError("a sweep needs one or two axes");
    }
    for (const auto& a : axes) {
        a.validate();
    }
    if (axes.size() == 2 && axes[0].target.field == axes[1].target.field) {
        throw ConfigError("both axes drive '" + axes[0].target.field + "'");
    }
}

const EntanglementResult& SweepResult::at(std::size_t i1, std::size_t i2) const
{
    const std::size_t n2 = axis2.empty() ? 1 : axis2.size();
    return points.at(i1 * n2 + i2);
}

double SweepResult::max_log_negativity() const
{
    double best = 0.0;
    for (const auto& r : points) {
        if (r.status == PointStatus::Ok) {
            best = std::max(best, r.log_negativity);
        }
    }
    return best;
}

std::size_t SweepResult::count(PointStatus s) const
{
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [&](const auto& r) { return r.status == s; }));
}

std::vector<GridPoint> expand_grid(const SweepSpec& spec)
{
    spec.validate();
    const SystemParams reference = resolved_base(spec.base);
    std::vector<const AxisTarget*> targets;
    for (const auto& a : spec.axes) {
        targets.push_back(&a.target);
    }
    const auto links = free_links(spec.base, targets);

    const auto c1 = spec.axes[0].coordinates();
    const auto c2 = spec.axes.size() == 2 ? spec.axes[1].coordinates() : std::vector<double>{};
    std::vector<GridPoint> out;
    out.reserve(c1.size() * std::max<std::size_t>(1, c2.size()));
    for (double x : c1) {
        if (c2.empty()) {
            out.push_back(make_point(spec.base, links, reference, {{targets[0], x}}));
            continue;
        }
        for (double y : c2) {
            out.push_back(make_point(spec.base, links, reference, {{targets[0], x}, {targets[1], y}}));
        }
    }
    return out;
}

std::vector<EntanglementResult> evaluate_points(const std::vector<GridPoint>& points,
                                                const ModePair& pair, int jobs)
{
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    std::vector<EntanglementResult> out(points.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        out[k] = evaluate_one(points[k], pair);
    }
    return out;
}

std::vector<EntanglementResult> evaluate_points_serial(const std::vector<GridPoint>& points,
                                                       const ModePair& pair)
{
    std::vector<EntanglementResult> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(evaluate_one(p, pair));
    }
    return out;
}

namespace {

SweepResult assemble(const SweepSpec& spec, std::vector<EntanglementResult> points)
{
    SweepResult r;
    r.axes = spec.axes;
    r.axis1 = spec.axes[0].coordinates();
    if (spec.axes.size() == 2) {
        r.axis2 = spec.axes[1].coordinates();
    }
    r.points = std::move(points);
    r.base = resolved_base(spec.base);
    r.links = spec.base.links;
    r.pair = spec.pair;
    r.timestamp = utc_timestamp();
    r.version = std::string(kVersion);
    return r;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, int jobs)
{
    return assemble(spec, evaluate_points(expand_grid(spec), spec.pair, jobs));
}

SweepResult run_sweep_serial(const SweepSpec& spec)
{
    return assemble(spec, evaluate_points_serial(expand_grid(spec), spec.pair));
}

EntanglementResult threshold_objective(const ThresholdSpec& spec, double coordinate, int jobs)
{
    const SystemParams reference = resolved_base(spec.base);
    std::vector<const AxisTarget*> targets{&spec.axis};
    if (spec.profile) {
        targets.push_back(&spec.profile->target);
    }
    const auto links = free_links(spec.base, targets);

    if (!spec.profile) {
        return evaluate_one(make_point(spec.base, links, reference, {{&spec.axis, coordinate}}),
                            spec.pair);
    }
    std::vector<GridPoint> grid;
    for (double y : spec.profile->coordinates()) {
        grid.push_back(make_point(spec.base, links, reference,
                                  {{&spec.axis, coordinate}, {&spec.profile->target, y}}));
    }
    const auto results = evaluate_points(grid, spec.pair, jobs);
    EntanglementResult best{PointStatus::Unstable, 0.0, 0.0, "no stable point on the profile axis"};
    for (const auto& r : results) {
        if (r.status != PointStatus::Ok) {
            continue;
        }
        if (best.status != PointStatus::Ok || r.log_negativity > best.log_negativity) {
            best = r;
        }
    }
    return best;
}

ThresholdResult find_threshold(const ThresholdSpec& spec, int jobs)
{
    if (spec.axis.field == (spec.profile ? spec.profile->target.field : std::string())) {
        throw ConfigError("threshold and profile axes drive the same parameter");
    }
    if (spec.profile) {
        spec.profile->validate();
    }
    if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi) || spec.lo == spec.hi) {
        throw ConfigError("threshold bracket needs two distinct finite ends");
    }
    if (spec.scale == AxisScale::Log && !(spec.lo > 0.0 && spec.hi > 0.0)) {
        throw ConfigError("log-scale bisection needs positive bracket ends");
    }

    ThresholdResult out;
    const auto eval = [&](double x) {
        ++out.evaluations;
        return threshold_objective(spec, x, jobs);
    };
    const auto at_lo = eval(spec.lo);
    const auto at_hi = eval(spec.hi);
    if (at_lo.status != PointStatus::Ok || at_hi.status != PointStatus::Ok) {
        const auto& bad = at_lo.status != PointStatus::Ok ? at_lo : at_hi;
        throw BracketError(std::string("threshold bracket end ")
                           + (at_lo.status != PointStatus::Ok ? "lo" : "hi") + " is "
                           + std::string(to_string(bad.status)) + " (" + bad.message + ")");
    }
    if (!(at_lo.log_negativity > kNegativityFloor) || at_hi.log_negativity > kNegativityFloor) {
        throw BracketError("threshold needs E_N(lo) > 0 and E_N(hi) = 0; got E_N(lo) = "
                           + std::to_string(at_lo.log_negativity)
                           + ", E_N(hi) = " + std::to_string(at_hi.log_negativity));
    }

    double ent = spec.lo;
    double sep = spec.hi;
    while (std::abs(sep - ent) > spec.relative_width * std::max(std::abs(ent), std::abs(sep))) {
        const double mid = spec.scale == AxisScale::Log ? std::sqrt(ent * sep) : 0.5 * (ent + sep);
        const auto r = eval(mid);
        if (r.status != PointStatus::Ok) {
            throw ThresholdInstability("non-stable point inside the threshold bracket at "
                                           + std::to_string(mid) + " (" + r.message + ")",
                                       mid);
        }
        (r.log_negativity > kNegativityFloor ? ent : sep) = mid;
    }
    out.entangled_side = ent;
    out.separable_side = sep;
    out.critical = 0.5 * (ent + sep);
    return out;
}

} // namespace magnoent
