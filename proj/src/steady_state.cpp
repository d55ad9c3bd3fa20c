#include "magnoent/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "magnoent/errors.hpp"

namespace magnoent {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

struct Amplitudes {
    cd c_s;
    cd m_s;
};

Amplitudes amplitudes(const SystemParams& p, double delta_c, double delta_m_eff, double omega_B)
{
    const cd cavity = p.kappa + I * delta_c;
    const cd m_s = omega_B / (p.gamma_m + I * delta_m_eff + p.g_m * p.g_m / cavity);
    const cd c_s = -I * p.g_m * m_s / cavity;
    return {c_s, m_s};
}

double mechanical_stiffness(const SystemParams& p)
{
    return p.omega_1 + p.G_c * p.G_c / p.omega_2;
}

void check_inputs(const SystemParams& p, double omega_B)
{
    if (!(p.kappa > 0.0) || !(p.gamma_m > 0.0)) {
        throw InvalidParameter("steady state requires kappa > 0 and gamma_m > 0");
    }
    if (!std::isfinite(omega_B)) {
        throw InvalidParameter("omega_B must be finite");
    }
}

double rel_residual(double next, double x)
{
    return std::abs(next - x) / std::max(1.0, std::abs(x));
}

} // namespace

SteadyState solve_direct(const SystemParams& p, double omega_B)
{
    check_inputs(p, omega_B);
    const auto [c_s, m_s] = amplitudes(p, p.delta_c, p.delta_m_eff(), omega_B);

    SteadyState s;
    s.c_s = c_s;
    s.m_s = m_s;
    s.x_1s = p.G_eff * std::abs(c_s) / (std::numbers::sqrt2 * mechanical_stiffness(p));
    s.x_2s = p.G_c / p.omega_2 * s.x_1s;
    s.delta_c_eff = p.delta_c;
    s.delta_m_eff = p.delta_m_eff();
    s.magnon_population = std::norm(m_s);
    s.G_eff = p.G_eff;
    return s;
}

namespace detail {

PicardResult damped_picard(const std::function<Point2(Point2)>& map, Point2 x0,
                           const SelfConsistentOptions& opts)
{
    const double w = opts.damping;
    Point2 x = x0;
    Point2 prev = x0;
    Point2 prev2 = x0;
    double residual = 0.0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        const Point2 fx = map(x);
        if (!std::isfinite(fx.a) || !std::isfinite(fx.b)) {
            throw ConvergenceError("fixed-point map produced a non-finite value", residual, it);
        }
        residual = std::max(rel_residual(fx.a, x.a), rel_residual(fx.b, x.b));
        if (residual < opts.tolerance) {
            return {fx, it};
        }
        prev2 = prev;
        prev = x;
        x = {w * x.a + (1.0 - w) * fx.a, w * x.b + (1.0 - w) * fx.b};

        if (it >= 3) {
            const double back2 = std::max(rel_residual(x.a, prev2.a), rel_residual(x.b, prev2.b));
            const double back1 = std::max(rel_residual(x.a, prev.a), rel_residual(x.b, prev.b));
            if (back2 < 1e-9 && back1 > 1e3 * back2 && back1 > opts.tolerance) {
                throw BistabilityError("damped iteration is cycling between two states; "
                                       "the Kerr response may be multistable",
                                       residual, it);
            }
        }
    }
    throw ConvergenceError("no convergence after " + std::to_string(opts.max_iterations)
                               + " iterations, last residual " + std::to_string(residual),
                           residual, opts.max_iterations);
}

} // namespace detail

SteadyState solve_self_consistent(const SystemParams& p, double K_s, double G_0, double delta_0,
                                  double omega_B, const SelfConsistentOptions& opts)
{
    check_inputs(p, omega_B);
    if (!(K_s >= 0.0)) {
        throw InvalidParameter("K_s must be >= 0");
    }
    const double stiffness = mechanical_stiffness(p);

    // (delta_c, delta_K) -> the shifts implied by the resulting amplitudes.
    const auto map = [&](detail::Point2 x) {
        const auto a = amplitudes(p, x.a, p.delta_m + x.b, omega_B);
        const double n_c = std::norm(a.c_s);
        const double x_1s = G_0 * n_c / stiffness;
        const double G_eff = std::numbers::sqrt2 * G_0 * std::sqrt(n_c);
        return detail::Point2{delta_0 - G_eff * x_1s, 2.0 * K_s * std::norm(a.m_s)};
    };

    const auto fixed = detail::damped_picard(map, {delta_0, 0.0}, opts);
    const double delta_c = fixed.x.a;
    const double delta_K = fixed.x.b;

    const auto a = amplitudes(p, delta_c, p.delta_m + delta_K, omega_B);
    SteadyState s;
    s.c_s = a.c_s;
    s.m_s = a.m_s;
    s.x_1s = G_0 * std::norm(a.c_s) / stiffness;
    s.x_2s = p.G_c / p.omega_2 * s.x_1s;
    s.delta_c_eff = delta_c;
    s.delta_m_eff = p.delta_m + delta_K;
    s.magnon_population = std::norm(a.m_s);
    s.G_eff = std::numbers::sqrt2 * G_0 * std::abs(a.c_s);
    s.iterations = fixed.iterations;
    return s;
}

} // namespace magnoent
