#ifndef MAGNOENT_SWEEP_IO_HPP
#define MAGNOENT_SWEEP_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "magnoent/config.hpp"
#include "magnoent/sweep.hpp"

namespace magnoent {

/*
 * Everything a run config file may hold: parameter keys (see ParamConfig)
 * plus
 *   axis1, axis2 = name, min, max, count[, linear|log][, relative_to]
 *   pair         = m1, m2
 *   output       = path of the CSV to write
 *   threshold    = name, lo, hi[, linear|log][, relative_to]
 *   profile      = axis maximised over at each threshold step
 * Any other key is a ConfigError.
 */
struct RunConfig {
    struct Threshold {
        AxisTarget axis;
        double lo = 0.0;
        double hi = 0.0;
        AxisScale scale = AxisScale::Linear;
    };

    ParamConfig params;
    std::vector<Axis> axes;
    std::optional<ModePair> pair;
    std::optional<std::filesystem::path> output;
    std::optional<Threshold> threshold;
    std::optional<Axis> profile;

    SweepSpec sweep_spec() const;
    ThresholdSpec threshold_spec() const;
};

RunConfig run_config_from(const std::vector<KeyValue>& kvs);
RunConfig load_run_config(const std::filesystem::path& path);

// "m1,m2", "m1 m2" or "cavity, m1".
ModePair parse_pair(std::string_view text);

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

// Header `axis1,axis2,E_N,status`; axis2 is empty for one-axis sweeps and
// E_N is empty unless status is ok.
void write_csv(std::ostream& out, const SweepResult& r);
std::string csv_text(const SweepResult& r);

nlohmann::json sweep_metadata(const SweepResult& r);
nlohmann::json params_json(const SystemParams& p);

// `out.csv` -> `out.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

// Writes the CSV and its JSON sidecar.
void write_sweep(const SweepResult& r, const std::filesystem::path& csv);

} // namespace magnoent

#endif
