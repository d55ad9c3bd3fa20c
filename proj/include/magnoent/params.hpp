#ifndef MAGNOENT_PARAMS_HPP
#define MAGNOENT_PARAMS_HPP

#include <numbers>
#include <optional>
#include <span>
#include <string_view>

namespace magnoent {

namespace constants {
// CODATA 2018; h and k_B are exact by definition of the SI.
inline constexpr double planck = 6.62607015e-34;                 // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi); // J s
inline constexpr double boltzmann = 1.380649e-23;                 // J/K
inline constexpr double vacuum_permittivity = 8.8541878128e-12;   // F/m
inline constexpr double two_pi = 2.0 * std::numbers::pi;
} // namespace constants

// Converts an ordinary frequency in Hz to an angular frequency in rad/s.
constexpr double angular(double hz) { return constants::two_pi * hz; }

/*
 * One configuration of the hybrid cavity / magnon / two-resonator system.
 *
 * Every dynamical quantity is an angular frequency in rad/s. Detunings are
 * taken as given (rotating frame of the magnon drive); the absolute mode
 * frequencies omega_c_abs and omega_m_abs only feed the bath occupations.
 */
struct SystemParams {
    double omega_1 = 0.0;
    double omega_2 = 0.0;
    double kappa = 0.0;
    double gamma_m = 0.0;
    double gamma_1 = 0.0;
    double gamma_2 = 0.0;
    double g_m = 0.0;
    double G_eff = 0.0; // sqrt(2) G_0 c_s with c_s real and positive
    double G_c = 0.0;
    double delta_c = 0.0;
    double delta_m = 0.0; // bare magnon detuning, Kerr shift excluded
    double delta_K = 0.0; // Kerr shift 2 K_s M
    double temperature = 0.0; // K
    double omega_c_abs = 0.0;
    double omega_m_abs = 0.0;

    // Effective magnon detuning entering the linearized dynamics.
    double delta_m_eff() const { return delta_m + delta_K; }

    // Throws InvalidParameter when an invariant is violated.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

// Default set: omega_{1,2}/2pi = 10 MHz, kappa/2pi = 5.5 MHz,
// gamma_m/2pi = 0.1 MHz, gamma_{1,2}/2pi = 200 Hz, G_eff = 0.55 kappa,
// Delta_m = omega_1, Delta K = 0.65 omega_1, T = 10 mK, omega_m/2pi = 10 GHz.
// Delta_c = omega_1, g_m/2pi = 15 MHz and G_c = 0.
SystemParams default_params();

struct ThermalOccupations {
    double n_1 = 0.0;
    double n_2 = 0.0;
    double n_c = 0.0;
    double n_m = 0.0;
};

// Bose-Einstein occupation 1/(exp(hbar omega / k_B T) - 1); exactly 0 at T = 0.
double thermal_occupation(double omega, double temperature);

ThermalOccupations occupations(const SystemParams& p);

struct DriveGeometry {
    double B0 = 0.0;           // T
    double sphere_volume = 0.0; // m^3
    double spin_density = 4.22e27;                      // m^-3, YIG
    double gyromagnetic_ratio = constants::two_pi * 28e9; // rad/s/T
};

// Magnon drive Rabi frequency (sqrt(5)/4) gamma sqrt(rho V) B0, in rad/s.
double rabi_frequency(const DriveGeometry& geom);

struct CoulombGeometry {
    double C1 = 0.0; // F
    double C2 = 0.0;
    double V1 = 0.0; // V
    double V2 = 0.0;
    double d = 0.0;  // m
};

// C1 V1 C2 V2 / (2 pi eps0 d^3).
double coulomb_coupling(const CoulombGeometry& geom);

// --- field registry -------------------------------------------------------

enum class Quantity { Frequency, Temperature };

struct ParamField {
    std::string_view name;
    double SystemParams::*member;
    Quantity quantity;
};

std::span<const ParamField> param_fields();
const ParamField* find_param_field(std::string_view name);

} // namespace magnoent

#endif
