#ifndef MAGNOENT_SWEEP_HPP
#define MAGNOENT_SWEEP_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magnoent/config.hpp"
#include "magnoent/entanglement.hpp"
#include "magnoent/params.hpp"

namespace magnoent {

enum class AxisUnit {
    Native,   // rad/s, or K for temperature
    Hertz,    // `_hz` suffix
    Kelvin,   // `_k` suffix
    Relative, // multiples of another parameter, e.g. delta_c in units of omega_1
};

enum class AxisScale { Linear, Log };

// Which parameter an axis drives and in what unit its coordinates are given.
struct AxisTarget {
    std::string field;
    AxisUnit unit = AxisUnit::Native;
    std::string relative_to;

    // "delta_c_hz", "temperature_k", "kappa"; with relative_to for Relative.
    static AxisTarget parse(std::string_view name, std::string_view relative_to = {});

    std::string label() const;
    std::string unit_label() const;

    // Sets the driven field from an axis coordinate. Relative units read the
    // reference parameter from `reference` (the resolved base point).
    void apply(SystemParams& p, double coordinate, const SystemParams& reference) const;
};

struct Axis {
    AxisTarget target;
    double min = 0.0;
    double max = 0.0;
    int count = 2;
    AxisScale scale = AxisScale::Linear;

    // Text form: "name, min, max, count[, linear|log][, relative_to]".
    static Axis parse(std::string_view text);

    // count >= 2 with min < max, or the degenerate count == 1 with min == max;
    // log scale needs min > 0. Throws ConfigError.
    void validate() const;
    double coordinate(int i) const;
    std::vector<double> coordinates() const;
};

struct SweepSpec {
    ParamConfig base;
    std::vector<Axis> axes; // one or two
    ModePair pair{Mode::M1, Mode::M2};
    std::filesystem::path output;

    void validate() const;
};

struct SweepResult {
    std::vector<Axis> axes;
    std::vector<double> axis1;
    std::vector<double> axis2; // empty for one-axis sweeps
    std::vector<EntanglementResult> points; // row-major over (axis1, axis2)
    SystemParams base;
    std::vector<ParamLink> links;
    ModePair pair{Mode::M1, Mode::M2};
    std::string timestamp;
    std::string version;

    std::size_t rows() const { return points.size(); }
    const EntanglementResult& at(std::size_t i1, std::size_t i2 = 0) const;
    // Largest E_N among Ok points, 0 if none.
    double max_log_negativity() const;
    std::size_t count(PointStatus s) const;
};

// Parameters of every grid point, row-major. Points that fail validation
// carry the error message instead.
struct GridPoint {
    SystemParams params;
    std::string error;
};
std::vector<GridPoint> expand_grid(const SweepSpec& spec);

// The per-point kernel over a prepared list: OpenMP-parallel and serial
// reference. Both are pure per point and give bit-identical results.
// jobs <= 0 uses the OpenMP default thread count.
std::vector<EntanglementResult> evaluate_points(const std::vector<GridPoint>& points,
                                                const ModePair& pair, int jobs = 0);
std::vector<EntanglementResult> evaluate_points_serial(const std::vector<GridPoint>& points,
                                                       const ModePair& pair);

SweepResult run_sweep(const SweepSpec& spec, int jobs = 0);
SweepResult run_sweep_serial(const SweepSpec& spec);

struct ThresholdSpec {
    ParamConfig base;
    AxisTarget axis;
    double lo = 0.0; // entangled end of the bracket
    double hi = 0.0; // separable end
    ModePair pair{Mode::M1, Mode::M2};
    // When set, E_N at each axis value is the maximum over this grid (e.g.
    // the largest E_N over a cavity-detuning scan).
    std::optional<Axis> profile;
    double relative_width = 1e-4;
    AxisScale scale = AxisScale::Linear;
};

struct ThresholdResult {
    double critical = 0.0; // axis units
    double entangled_side = 0.0;
    double separable_side = 0.0;
    int evaluations = 0;
};

// Bisects for the point where E_N drops to the 1e-9 floor. Throws
// BracketError unless E_N(lo) > 1e-9 >= E_N(hi) with both ends stable, and
// ThresholdInstability when an interior evaluation is unstable.
ThresholdResult find_threshold(const ThresholdSpec& spec, int jobs = 0);

// E_N at one axis value of a threshold spec, with the profile maximisation
// applied. Unstable when no profile point is stable.
EntanglementResult threshold_objective(const ThresholdSpec& spec, double coordinate, int jobs = 0);

} // namespace magnoent

#endif
