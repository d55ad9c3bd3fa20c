// Command-line front end: point, sweep, threshold and stability subcommands.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical or stability error.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "magnoent/dynamics.hpp"
#include "magnoent/entanglement.hpp"
#include "magnoent/errors.hpp"
#include "magnoent/sweep.hpp"
#include "magnoent/sweep_io.hpp"
#include "magnoent/version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string config;
    std::string out;
    std::vector<std::string> pair;
    int jobs = 0;
};

magnoent::RunConfig load(const Options& o)
{
    if (o.config.empty()) {
        return {};
    }
    return magnoent::load_run_config(o.config);
}

magnoent::ModePair pair_of(const Options& o, const magnoent::RunConfig& rc)
{
    if (!o.pair.empty()) {
        return magnoent::parse_pair(o.pair[0] + "," + o.pair[1]);
    }
    return rc.pair.value_or(magnoent::ModePair(magnoent::Mode::M1, magnoent::Mode::M2));
}

int cmd_point(const Options& o)
{
    const auto rc = load(o);
    const auto pair = pair_of(o, rc);
    const auto p = rc.params.resolved();
    const auto r = magnoent::entanglement_at(p, pair);
    std::cout << std::setprecision(17);
    std::cout << "pair " << pair.label() << '\n';
    std::cout << "status " << magnoent::to_string(r.status) << '\n';
    std::cout << "margin_rad_s " << r.margin << '\n';
    if (r.status != magnoent::PointStatus::Ok) {
        std::cout << "E_N unavailable (" << r.message << ")\n";
        return kExitNumerical;
    }
    std::cout << "E_N " << r.log_negativity << '\n';
    return 0;
}

int cmd_sweep(const Options& o)
{
    const auto rc = load(o);
    auto spec = rc.sweep_spec();
    spec.pair = pair_of(o, rc);
    if (!o.out.empty()) {
        spec.output = o.out;
    }
    if (spec.output.empty()) {
        throw magnoent::ConfigError("no output path: set 'output' in the config or pass --out");
    }
    const auto result = magnoent::run_sweep(spec, o.jobs);
    magnoent::write_sweep(result, spec.output);
    std::cout << "wrote " << result.rows() << " rows to " << spec.output.string() << " ("
              << result.count(magnoent::PointStatus::Ok) << " ok, "
              << result.count(magnoent::PointStatus::Unstable) << " unstable, "
              << result.count(magnoent::PointStatus::Error) << " error); max E_N "
              << magnoent::format_double(result.max_log_negativity()) << '\n';
    return 0;
}

int cmd_threshold(const Options& o, const std::optional<double>& lo, const std::optional<double>& hi)
{
    const auto rc = load(o);
    auto spec = rc.threshold_spec();
    spec.pair = pair_of(o, rc);
    if (lo) {
        spec.lo = *lo;
    }
    if (hi) {
        spec.hi = *hi;
    }
    const auto t = magnoent::find_threshold(spec, o.jobs);
    std::cout << std::setprecision(10);
    std::cout << "axis " << spec.axis.label() << " [" << spec.axis.unit_label() << "]\n";
    std::cout << "critical " << t.critical << '\n';
    std::cout << "bracket " << t.entangled_side << ' ' << t.separable_side << '\n';
    std::cout << "evaluations " << t.evaluations << '\n';
    return 0;
}

int cmd_stability(const Options& o)
{
    const auto rc = load(o);
    const auto p = rc.params.resolved();
    const auto report = magnoent::stability(magnoent::build_drift(p));
    std::cout << std::setprecision(12);
    std::cout << (report.is_stable ? "stable" : "unstable") << '\n';
    std::cout << "margin_rad_s " << report.margin << '\n';
    std::cout << "threshold_rad_s " << report.threshold << '\n';
    std::cout << "# re_rad_s im_rad_s re/omega_1 im/omega_1\n";
    for (const auto& ev : report.eigenvalues) {
        std::cout << ev.real() << ' ' << ev.imag() << ' ' << ev.real() / p.omega_1 << ' '
                  << ev.imag() / p.omega_1 << '\n';
    }
    return report.is_stable ? 0 : kExitNumerical;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Steady-state Gaussian entanglement of a Coulomb-coupled optomechanical "
                 "cavity-magnonic system"};
    app.set_version_flag("--version", std::string(magnoent::kVersion));
    app.require_subcommand(1);

    Options opts;
    std::optional<double> lo;
    std::optional<double> hi;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "key = value configuration file");
        sub->add_option("--pair", opts.pair, "mode pair, e.g. --pair m1 m2")
            ->expected(2)
            ->check(CLI::IsMember({"m1", "m2", "cavity", "magnon"}, CLI::ignore_case));
        sub->add_option("--jobs", opts.jobs, "worker threads (0 = OpenMP default)")
            ->check(CLI::NonNegativeNumber);
    };

    auto* point = app.add_subcommand("point", "evaluate E_N at one parameter point");
    add_common(point);
    auto* sweep = app.add_subcommand("sweep", "run a 1D/2D sweep, write CSV and JSON");
    add_common(sweep);
    sweep->add_option("--out", opts.out, "CSV output path (overrides 'output')");
    auto* threshold = app.add_subcommand("threshold", "bisect for the entanglement-death point");
    add_common(threshold);
    threshold->add_option("--lo", lo, "entangled end of the bracket (axis units)");
    threshold->add_option("--hi", hi, "separable end of the bracket (axis units)");
    auto* stab = app.add_subcommand("stability", "print the drift-matrix spectrum");
    add_common(stab);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (point->parsed()) {
            return cmd_point(opts);
        }
        if (sweep->parsed()) {
            return cmd_sweep(opts);
        }
        if (threshold->parsed()) {
            return cmd_threshold(opts, lo, hi);
        }
        return cmd_stability(opts);
    } catch (const magnoent::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const magnoent::InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const magnoent::Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
