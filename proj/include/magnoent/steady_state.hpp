#ifndef MAGNOENT_STEADY_STATE_HPP
#define MAGNOENT_STEADY_STATE_HPP

#include <complex>
#include <functional>

#include "magnoent/params.hpp"

namespace magnoent {

// Classical mean fields of the driven system (hbar = 1).
struct SteadyState {
    std::complex<double> c_s;
    std::complex<double> m_s;
    double x_1s = 0.0;
    double x_2s = 0.0;
    double delta_c_eff = 0.0;
    double delta_m_eff = 0.0;
    double magnon_population = 0.0; // |m_s|^2
    double G_eff = 0.0;             // sqrt(2) G_0 |c_s|
    int iterations = 0;             // self-consistent mode only
};

/*
 * Steady state for given effective detunings (delta_c, delta_m + delta_K).
 *
 * The coupled cavity/magnon relations are eliminated in closed form:
 *   m_s = Omega_B / (gamma_m + i D'_m + g_m^2 / (kappa + i D_c)),
 *   c_s = -i g_m m_s / (kappa + i D_c).
 * The single-photon coupling is recovered as G_0 = G_eff / (sqrt(2) |c_s|),
 * so x_1s = G_eff |c_s| / (sqrt(2) (omega_1 + G_c^2 / omega_2)) and
 * x_2s = (G_c / omega_2) x_1s.
 */
SteadyState solve_direct(const SystemParams& p, double omega_B);

struct SelfConsistentOptions {
    double damping = 0.5; // weight kept on the previous iterate
    double tolerance = 1e-12;
    int max_iterations = 1000;
};

/*
 * Solves the radiation-pressure and Kerr shifts together with the amplitudes:
 *   delta_c = delta_0 - G_eff x_1s,  G_eff = sqrt(2) G_0 |c_s|,
 *   delta_K = 2 K_s |m_s|^2.
 * p.delta_c, p.delta_K and p.G_eff are ignored on input. Throws
 * ConvergenceError (or BistabilityError on a detected two-cycle).
 */
SteadyState solve_self_consistent(const SystemParams& p, double K_s, double G_0, double delta_0,
                                  double omega_B, const SelfConsistentOptions& opts = {});

namespace detail {

struct Point2 {
    double a = 0.0;
    double b = 0.0;
};

struct PicardResult {
    Point2 x;
    int iterations = 0;
};

// Damped Picard iteration x <- w x + (1 - w) F(x) on two coordinates, each
// converged when |F(x) - x| < tol * max(1, |x|).
PicardResult damped_picard(const std::function<Point2(Point2)>& map, Point2 x0,
                           const SelfConsistentOptions& opts);

} // namespace detail

} // namespace magnoent

#endif
