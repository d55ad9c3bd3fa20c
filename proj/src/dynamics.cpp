#include "magnoent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "magnoent/errors.hpp"

namespace magnoent {

DiffusionMatrix::DiffusionMatrix(const Vector8& diagonal) : d_(diagonal)
{
    for (int i = 0; i < 8; ++i) {
        if (!std::isfinite(d_(i)) || d_(i) < 0.0) {
            throw InvalidParameter("diffusion entries must be finite and >= 0");
        }
    }
}

DriftMatrix build_drift(const SystemParams& p)
{
    Matrix8 a = Matrix8::Zero();
    const double dm = p.delta_m_eff();

    a(kX1, kP1) = p.omega_1;

    a(kP1, kX1) = -p.omega_1;
    a(kP1, kP1) = -p.gamma_1;
    a(kP1, kX2) = -p.G_c;
    a(kP1, kXc) = p.G_eff;

    a(kX2, kP2) = p.omega_2;

    a(kP2, kX1) = -p.G_c;
    a(kP2, kX2) = -p.omega_2;
    a(kP2, kP2) = -p.gamma_2;

    a(kXc, kXc) = -p.kappa;
    a(kXc, kYc) = p.delta_c;
    a(kXc, kYm) = p.g_m;

    a(kYc, kX1) = p.G_eff;
    a(kYc, kXc) = -p.delta_c;
    a(kYc, kYc) = -p.kappa;
    a(kYc, kXm) = -p.g_m;

    a(kXm, kYc) = p.g_m;
    a(kXm, kXm) = -p.gamma_m;
    a(kXm, kYm) = dm;

    a(kYm, kXc) = -p.g_m;
    a(kYm, kXm) = -dm;
    a(kYm, kYm) = -p.gamma_m;

    return DriftMatrix(a);
}

DiffusionMatrix build_diffusion(const SystemParams& p, const ThermalOccupations& occ)
{
    Vector8 d;
    d << 0.0, p.gamma_1 * (2.0 * occ.n_1 + 1.0), 0.0, p.gamma_2 * (2.0 * occ.n_2 + 1.0),
        p.kappa * (2.0 * occ.n_c + 1.0), p.kappa * (2.0 * occ.n_c + 1.0),
        p.gamma_m * (2.0 * occ.n_m + 1.0), p.gamma_m * (2.0 * occ.n_m + 1.0);
    return DiffusionMatrix(d);
}

StabilityReport stability(const DriftMatrix& a)
{
    const Matrix8& m = a.matrix();
    if (!m.allFinite()) {
        throw NumericalError("drift matrix has non-finite entries");
    }
    Eigen::EigenSolver<Matrix8> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigenvalue computation of the drift matrix failed");
    }
    StabilityReport r;
    r.margin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 8; ++i) {
        r.eigenvalues[i] = es.eigenvalues()(i);
        r.margin = std::max(r.margin, r.eigenvalues[i].real());
    }
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](const auto& x, const auto& y) {
        return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
    });
    r.threshold = kStabilityFloor * m.cwiseAbs().maxCoeff();
    r.is_stable = r.margin < -r.threshold;
    return r;
}

namespace detail {

Eigen::MatrixXd lyapunov_schur(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d)
{
    const Eigen::Index n = a.rows();
    Eigen::RealSchur<Eigen::MatrixXd> schur(a);
    if (schur.info() != Eigen::Success) {
        throw NumericalError("real Schur decomposition failed");
    }
    const Eigen::MatrixXd& t = schur.matrixT();
    const Eigen::MatrixXd& q = schur.matrixU();

    // Diagonal blocks of the quasi-triangular factor: 1x1 or 2x2.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
    for (Eigen::Index i = 0; i < n;) {
        const Eigen::Index size = (i + 1 < n && t(i + 1, i) != 0.0) ? 2 : 1;
        blocks.emplace_back(i, size);
        i += size;
    }

    // T Y + Y T^T = C with Y = Q^T X Q, C = -Q^T D Q. Block (I, J) depends on
    // blocks (K, J) for K > I and (I, K) for K > J.
    const auto solve = [&](const Eigen::MatrixXd& rhs_full) {
        const Eigen::MatrixXd c = -q.transpose() * rhs_full * q;
        Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
        using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
        for (auto bi = blocks.rbegin(); bi != blocks.rend(); ++bi) {
            const auto [i0, p] = *bi;
            const Eigen::Index ti = n - i0 - p;
            for (auto bj = blocks.rbegin(); bj != blocks.rend(); ++bj) {
                const auto [j0, qn] = *bj;
                const Eigen::Index tj = n - j0 - qn;
                Eigen::MatrixXd rhs = c.block(i0, j0, p, qn);
                if (ti > 0) {
                    rhs -= t.block(i0, i0 + p, p, ti) * y.block(i0 + p, j0, ti, qn);
                }
                if (tj > 0) {
                    rhs -= y.block(i0, j0 + qn, p, tj) * t.block(j0, j0 + qn, qn, tj).transpose();
                }
                // (I_q (x) T_II + T_JJ (x) I_p) vec(Y_IJ) = vec(rhs)
                Small k = Small::Zero(p * qn, p * qn);
                const auto tii = t.block(i0, i0, p, p);
                const auto tjj = t.block(j0, j0, qn, qn);
                for (Eigen::Index col = 0; col < qn; ++col) {
                    k.block(col * p, col * p, p, p) += tii;
                    for (Eigen::Index row = 0; row < qn; ++row) {
                        k.block(row * p, col * p, p, p) += tjj(row, col) * Small::Identity(p, p);
                    }
                }
                Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1> v(p * qn);
                for (Eigen::Index col = 0; col < qn; ++col) {
                    v.segment(col * p, p) = rhs.col(col);
                }
                const Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1> sol = k.fullPivLu().solve(v);
                for (Eigen::Index col = 0; col < qn; ++col) {
                    y.block(i0, j0 + col, p, 1) = sol.segment(col * p, p);
                }
            }
        }
        return Eigen::MatrixXd(q * y * q.transpose());
    };

    Eigen::MatrixXd x = solve(d);
    for (int step = 0; step < kRefinementSteps; ++step) {
        const Eigen::MatrixXd r = a * x + x * a.transpose() + d;
        x += solve(r);
    }
    return x;
}

} // namespace detail

double lyapunov_residual(const Matrix8& a, const Matrix8& d, const Matrix8& v)
{
    return (a * v + v * a.transpose() + d).cwiseAbs().maxCoeff();
}

std::array<double, 4> symplectic_eigenvalues(const Matrix8& v)
{
    Matrix8 omega = Matrix8::Zero();
    for (int k = 0; k < 4; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    Eigen::EigenSolver<Matrix8> es(omega * v, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("symplectic eigenvalue computation failed");
    }
    std::array<double, 8> mags{};
    for (int i = 0; i < 8; ++i) {
        mags[i] = std::abs(es.eigenvalues()(i).imag());
    }
    std::sort(mags.begin(), mags.end());
    return {mags[0], mags[2], mags[4], mags[6]};
}

CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d)
{
    const auto stab = stability(a);
    if (!stab.is_stable) {
        throw StabilityError("drift matrix is not Hurwitz stable (max Re lambda = "
                                 + std::to_string(stab.margin) + ")",
                             stab.margin);
    }
    const Matrix8& am = a.matrix();
    const Matrix8 dm = d.matrix();

    // V is invariant under A, D -> s A, s D; scaling to |A| ~ 1 keeps the
    // Schur factor well balanced.
    const double s = 1.0 / am.cwiseAbs().maxCoeff();
    const Matrix8 v = detail::lyapunov_schur(s * am, s * dm);
    CovarianceMatrix cov(v);

    const double residual = lyapunov_residual(am, dm, cov.matrix());
    const double bound = kResidualTolerance * std::max(1.0, dm.cwiseAbs().maxCoeff());
    if (!(residual <= bound)) {
        throw AccuracyError("Lyapunov residual " + std::to_string(residual) + " exceeds "
                                + std::to_string(bound),
                            residual);
    }
    const auto nu = symplectic_eigenvalues(cov.matrix());
    if (nu[0] < 0.5 - kPhysicalityTolerance) {
        throw PhysicalityError("covariance violates the uncertainty principle (min symplectic "
                               "eigenvalue "
                               + std::to_string(nu[0]) + ")");
    }
    return cov;
}

} // namespace magnoent
