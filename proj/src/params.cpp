#include "magnoent/params.hpp"

#include <array>
#include <cmath>
#include <string>

#include "magnoent/errors.hpp"

namespace magnoent {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw InvalidParameter(what);
    }
}

void require_positive(double v, const char* name)
{
    require(std::isfinite(v) && v > 0.0,
            std::string(name) + " must be finite and > 0, got " + std::to_string(v));
}

void require_finite(double v, const char* name)
{
    require(std::isfinite(v), std::string(name) + " must be finite");
}

constexpr std::array<ParamField, 15> kFields{{
    {"omega_1", &SystemParams::omega_1, Quantity::Frequency},
    {"omega_2", &SystemParams::omega_2, Quantity::Frequency},
    {"kappa", &SystemParams::kappa, Quantity::Frequency},
    {"gamma_m", &SystemParams::gamma_m, Quantity::Frequency},
    {"gamma_1", &SystemParams::gamma_1, Quantity::Frequency},
    {"gamma_2", &SystemParams::gamma_2, Quantity::Frequency},
    {"g_m", &SystemParams::g_m, Quantity::Frequency},
    {"G_eff", &SystemParams::G_eff, Quantity::Frequency},
    {"G_c", &SystemParams::G_c, Quantity::Frequency},
    {"delta_c", &SystemParams::delta_c, Quantity::Frequency},
    {"delta_m", &SystemParams::delta_m, Quantity::Frequency},
    {"delta_K", &SystemParams::delta_K, Quantity::Frequency},
    {"temperature", &SystemParams::temperature, Quantity::Temperature},
    {"omega_c_abs", &SystemParams::omega_c_abs, Quantity::Frequency},
    {"omega_m_abs", &SystemParams::omega_m_abs, Quantity::Frequency},
}};

} // namespace

void SystemParams::validate() const
{
    require_positive(omega_1, "omega_1");
    require_positive(omega_2, "omega_2");
    require_positive(kappa, "kappa");
    require_positive(gamma_m, "gamma_m");
    require_positive(gamma_1, "gamma_1");
    require_positive(gamma_2, "gamma_2");
    require_positive(omega_c_abs, "omega_c_abs");
    require_positive(omega_m_abs, "omega_m_abs");
    require_finite(g_m, "g_m");
    require_finite(G_eff, "G_eff");
    require_finite(G_c, "G_c");
    require_finite(delta_c, "delta_c");
    require_finite(delta_m, "delta_m");
    require_finite(delta_K, "delta_K");
    require_finite(temperature, "temperature");
    require(g_m >= 0.0, "g_m must be >= 0");
    require(G_eff >= 0.0, "G_eff must be >= 0 (c_s is chosen real and positive)");
    require(temperature >= 0.0, "temperature must be >= 0");
}

SystemParams default_params()
{
    SystemParams p;
    p.omega_1 = angular(10e6);
    p.omega_2 = angular(10e6);
    p.kappa = angular(5.5e6);
    p.gamma_m = angular(0.1e6);
    p.gamma_1 = angular(200.0);
    p.gamma_2 = angular(200.0);
    p.g_m = angular(15e6);
    p.G_eff = 0.55 * p.kappa;
    p.G_c = 0.0;
    p.delta_c = p.omega_1;
    p.delta_m = p.omega_1;
    p.delta_K = 0.65 * p.omega_1;
    p.temperature = 0.010;
    p.omega_c_abs = angular(10e9);
    p.omega_m_abs = angular(10e9);
    return p;
}

double thermal_occupation(double omega, double temperature)
{
    require(std::isfinite(omega) && omega > 0.0, "thermal_occupation: omega must be > 0");
    require(std::isfinite(temperature) && temperature >= 0.0,
            "thermal_occupation: temperature must be >= 0");
    if (temperature == 0.0) {
        return 0.0;
    }
    const double x = constants::hbar * omega / (constants::boltzmann * temperature);
    // expm1 overflows to +inf for x > ~709, which correctly yields 0.
    return 1.0 / std::expm1(x);
}

ThermalOccupations occupations(const SystemParams& p)
{
    return {thermal_occupation(p.omega_1, p.temperature),
            thermal_occupation(p.omega_2, p.temperature),
            thermal_occupation(p.omega_c_abs, p.temperature),
            thermal_occupation(p.omega_m_abs, p.temperature)};
}

double rabi_frequency(const DriveGeometry& geom)
{
    require(std::isfinite(geom.B0) && geom.B0 >= 0.0, "B0 must be >= 0");
    require_positive(geom.sphere_volume, "sphere_volume");
    require_positive(geom.spin_density, "spin_density");
    require_positive(geom.gyromagnetic_ratio, "gyromagnetic_ratio");
    return std::sqrt(5.0) / 4.0 * geom.gyromagnetic_ratio
           * std::sqrt(geom.spin_density * geom.sphere_volume) * geom.B0;
}

double coulomb_coupling(const CoulombGeometry& geom)
{
    require_positive(geom.C1, "C1");
    require_positive(geom.C2, "C2");
    require_positive(geom.d, "d");
    require_finite(geom.V1, "V1");
    require_finite(geom.V2, "V2");
    return geom.C1 * geom.V1 * geom.C2 * geom.V2
           / (constants::two_pi * constants::vacuum_permittivity * geom.d * geom.d * geom.d);
}

std::span<const ParamField> param_fields() { return kFields; }

const ParamField* find_param_field(std::string_view name)
{
    for (const auto& f : kFields) {
        if (f.name == name) {
            return &f;
        }
    }
    return nullptr;
}

} // namespace magnoent
