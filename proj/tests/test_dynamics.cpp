#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "magnoent/dynamics.hpp"
#include "magnoent/errors.hpp"
#include "random_params.hpp"

using namespace magnoent;

namespace {

SystemParams decoupled()
{
    SystemParams p = default_params();
    p.G_eff = 0.0;
    p.G_c = 0.0;
    p.g_m = 0.0;
    p.omega_2 = 1.3 * p.omega_1;
    p.gamma_2 = 2.0 * p.gamma_1;
    return p;
}

DiffusionMatrix diffusion_of(const SystemParams& p) { return build_diffusion(p, occupations(p)); }

double max_abs(const Matrix8& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("drift matrix structure")
{
    const SystemParams p = default_params();
    SystemParams q = p;
    q.G_c = 0.3 * p.omega_1; // all couplings nonzero
    const Matrix8 a = build_drift(q).matrix();

    int nonzero = 0;
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            nonzero += a(i, j) != 0.0;
        }
    }
    CHECK(nonzero == 22);

    CHECK(a(kP1, kXc) == doctest::Approx(0.55 * p.kappa));
    CHECK(a(kYc, kX1) == a(kP1, kXc));
    CHECK(a(kP1, kX2) == -q.G_c);
    CHECK(a(kP2, kX1) == -q.G_c);
    CHECK(a(kXc, kYm) == p.g_m);
    CHECK(a(kYm, kXm) == -p.delta_m_eff());
    CHECK(a(kXc, kYc) == p.delta_c);
    CHECK(a(kYc, kXc) == -p.delta_c);
    CHECK((a.row(kX1).array() != 0.0).count() == 1);
    CHECK(a(kX1, kP1) == p.omega_1);
    CHECK((a.row(kX2).array() != 0.0).count() == 1);
    CHECK(a(kX2, kP2) == p.omega_2);
}

TEST_CASE("decoupled drift is block diagonal")
{
    const SystemParams p = decoupled();
    const Matrix8 a = build_drift(p).matrix();
    Matrix8 expected = Matrix8::Zero();
    expected.block<2, 2>(0, 0) << 0.0, p.omega_1, -p.omega_1, -p.gamma_1;
    expected.block<2, 2>(2, 2) << 0.0, p.omega_2, -p.omega_2, -p.gamma_2;
    expected.block<2, 2>(4, 4) << -p.kappa, p.delta_c, -p.delta_c, -p.kappa;
    expected.block<2, 2>(6, 6) << -p.gamma_m, p.delta_m_eff(), -p.delta_m_eff(), -p.gamma_m;
    CHECK(a == expected);
}

TEST_CASE("diffusion matrix")
{
    SystemParams p = default_params();
    p.temperature = 0.0;
    const Vector8 d0 = diffusion_of(p).diagonal();
    Vector8 expected;
    expected << 0.0, p.gamma_1, 0.0, p.gamma_2, p.kappa, p.kappa, p.gamma_m, p.gamma_m;
    CHECK(d0 == expected);

    p.temperature = 0.01;
    const Vector8 d = diffusion_of(p).diagonal();
    CHECK(d(kP1) / p.gamma_1 == doctest::Approx(41.68123667807290).epsilon(1e-12));
    CHECK(d(kXc) == d(kYc));
    CHECK(d(kXm) == d(kYm));

    Vector8 negative = expected;
    negative(3) = -1.0;
    CHECK_THROWS_AS(DiffusionMatrix{negative}, InvalidParameter);
}

TEST_CASE("stability margin of the decoupled system")
{
    const SystemParams p = decoupled();
    const auto r = stability(build_drift(p));
    // Block eigenvalues: -gamma/2 +- i sqrt(omega^2 - gamma^2/4) and -kappa +- i delta.
    const double expected = std::max({-p.gamma_1 / 2.0, -p.gamma_2 / 2.0, -p.kappa, -p.gamma_m});
    CHECK(r.is_stable);
    CHECK(r.margin == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.eigenvalues[0].real() == doctest::Approx(r.margin));
    CHECK(r.threshold == doctest::Approx(1e-9 * max_abs(build_drift(p).matrix())));
}

TEST_CASE("undamped decoupled system is marginal and rejected")
{
    SystemParams p = decoupled();
    p.gamma_1 = p.gamma_2 = p.kappa = p.gamma_m = 0.0;
    const auto r = stability(build_drift(p));
    CHECK(std::abs(r.margin) < 1e-6);
    CHECK_FALSE(r.is_stable);
    CHECK_THROWS_AS(solve_lyapunov(build_drift(p), DiffusionMatrix(Vector8::Zero())), StabilityError);
}

TEST_CASE("strong-coupling reference point is unstable")
{
    // The lower photon-magnon polariton frequency
    // (D_c + D'_m)/2 - sqrt(((D_c - D'_m)/2)^2 + g_m^2) is negative when
    // g_m^2 > D_c D'_m; a negative-frequency mode coupled to the mechanics
    // amplifies instead of cooling it.
    const SystemParams p = testing::reference_point();
    CHECK(p.g_m * p.g_m > p.delta_c * p.delta_m_eff());
    const auto r = stability(build_drift(p));
    CHECK_FALSE(r.is_stable);
    CHECK(r.margin > 0.0);
    CHECK_THROWS_AS(solve_lyapunov(build_drift(p), diffusion_of(p)), StabilityError);

    SystemParams weak = p;
    weak.g_m = angular(5e6);
    CHECK(weak.g_m * weak.g_m < weak.delta_c * weak.delta_m_eff());
    CHECK(stability(build_drift(weak)).is_stable);
}

TEST_CASE("Lyapunov: scalar and thermal oscillator cases")
{
    const Matrix8 v = solve_lyapunov(DriftMatrix(-Matrix8::Identity()), DiffusionMatrix(Vector8::Ones())).matrix();
    CHECK(max_abs(v - 0.5 * Matrix8::Identity()) < 1e-15);

    const SystemParams p = decoupled();
    const auto occ = occupations(p);
    const Matrix8 vt = solve_lyapunov(build_drift(p), build_diffusion(p, occ)).matrix();
    Matrix8 expected = Matrix8::Zero();
    const double n[4] = {occ.n_1, occ.n_2, occ.n_c, occ.n_m};
    for (int b = 0; b < 4; ++b) {
        expected.block<2, 2>(2 * b, 2 * b) = (2.0 * n[b] + 1.0) / 2.0 * Eigen::Matrix2d::Identity();
    }
    CHECK(max_abs(vt - expected) < 1e-10 * max_abs(expected));
    CHECK(std::abs(vt(kX1, kX1) - 20.84061833903645) < 1e-10 * 20.84);
}

TEST_CASE("Lyapunov: Schur solve agrees with the Kronecker oracle")
{
    testing::StableParamSource source(7);
    for (int k = 0; k < 100; ++k) {
        const SystemParams p = source.next();
        const Matrix8 a = build_drift(p).matrix();
        const Matrix8 d = diffusion_of(p).matrix();
        const Matrix8 v = solve_lyapunov(DriftMatrix(a), DiffusionMatrix(d.diagonal())).matrix();
        const Matrix8 ref = reference::solve_lyapunov_kronecker(a, d);
        CHECK(max_abs(v - ref) <= 1e-9 * max_abs(ref));
        CHECK(lyapunov_residual(a, d, v) <= kResidualTolerance * std::max(1.0, max_abs(d)));
    }
}

TEST_CASE("Lyapunov: generic dense matrices")
{
    // Shifted random matrices with a Hurwitz spectrum, including complex pairs.
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    for (int k = 0; k < 20; ++k) {
        Eigen::MatrixXd a(5, 5);
        for (int i = 0; i < 25; ++i) {
            a.data()[i] = normal(rng);
        }
        const double shift = a.eigenvalues().real().maxCoeff() + 0.5;
        a -= shift * Eigen::MatrixXd::Identity(5, 5);
        Eigen::MatrixXd b(5, 5);
        for (int i = 0; i < 25; ++i) {
            b.data()[i] = normal(rng);
        }
        const Eigen::MatrixXd d = b * b.transpose();
        const Eigen::MatrixXd x = detail::lyapunov_schur(a, d);
        CHECK((a * x + x * a.transpose() + d).cwiseAbs().maxCoeff() < 1e-11 * d.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("covariance grows with temperature")
{
    SystemParams p = default_params();
    p.g_m = angular(5e6);
    p.G_c = 0.4 * p.omega_1;
    const DriftMatrix a = build_drift(p);
    Matrix8 prev = Matrix8::Zero();
    for (double T : {0.0, 0.01, 0.05, 0.2, 1.0}) {
        p.temperature = T;
        const Matrix8 v = solve_lyapunov(a, diffusion_of(p)).matrix();
        if (T > 0.0) {
            const Eigen::SelfAdjointEigenSolver<Matrix8> es(v - prev);
            CHECK(es.eigenvalues().minCoeff() >= -1e-9 * max_abs(v));
        }
        prev = v;
    }
}

TEST_CASE("symplectic eigenvalues")
{
    Matrix8 v = Matrix8::Zero();
    const double nu[4] = {0.5, 3.0, 1.2, 7.5};
    for (int b = 0; b < 4; ++b) {
        v(2 * b, 2 * b) = nu[b] * 4.0;
        v(2 * b + 1, 2 * b + 1) = nu[b] / 4.0; // squeezing leaves nu unchanged
    }
    const auto s = symplectic_eigenvalues(v);
    CHECK(s[0] == doctest::Approx(0.5));
    CHECK(s[1] == doctest::Approx(1.2));
    CHECK(s[2] == doctest::Approx(3.0));
    CHECK(s[3] == doctest::Approx(7.5));

    // D = 0 drives everything to V = 0, below the vacuum bound.
    CHECK_THROWS_AS(solve_lyapunov(DriftMatrix(-Matrix8::Identity()), DiffusionMatrix(Vector8::Zero())),
                    PhysicalityError);
}
