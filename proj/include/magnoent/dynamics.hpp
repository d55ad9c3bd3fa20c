#ifndef MAGNOENT_DYNAMICS_HPP
#define MAGNOENT_DYNAMICS_HPP

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "magnoent/params.hpp"

namespace magnoent {

using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Vector8 = Eigen::Matrix<double, 8, 1>;

// Quadrature ordering of the fluctuation vector.
enum Quadrature : int { kX1 = 0, kP1, kX2, kP2, kXc, kYc, kXm, kYm };

class DriftMatrix {
public:
    explicit DriftMatrix(const Matrix8& a) : a_(a) {}

    const Matrix8& matrix() const { return a_; }
    double operator()(int row, int col) const { return a_(row, col); }

private:
    Matrix8 a_;
};

class DiffusionMatrix {
public:
    // Throws InvalidParameter on a negative or non-finite entry.
    explicit DiffusionMatrix(const Vector8& diagonal);

    const Vector8& diagonal() const { return d_; }
    Matrix8 matrix() const { return d_.asDiagonal(); }

private:
    Vector8 d_;
};

// Symmetrised stationary covariance; entries are (1/2)<u_i u_j + u_j u_i>,
// so the vacuum has variance 1/2 per quadrature.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(const Matrix8& v) : v_(0.5 * (v + v.transpose())) {}

    const Matrix8& matrix() const { return v_; }
    double operator()(int row, int col) const { return v_(row, col); }

private:
    Matrix8 v_;
};

// Linearized drift matrix, row by row:
//   dx1 = w1 p1
//   dp1 = -w1 x1 - g1 p1 - Gc x2 + Geff Xc
//   dx2 = w2 p2
//   dp2 = -Gc x1 - w2 x2 - g2 p2
//   dXc = -k Xc + Dc Yc + gm Ym
//   dYc = Geff x1 - Dc Xc - k Yc - gm Xm
//   dXm = gm Yc - gm_loss Xm + D'm Ym
//   dYm = -gm Xc - D'm Xm - gm_loss Ym
DriftMatrix build_drift(const SystemParams& p);

// diag[0, g1(2n1+1), 0, g2(2n2+1), k(2nc+1), k(2nc+1), gm(2nm+1), gm(2nm+1)].
DiffusionMatrix build_diffusion(const SystemParams& p, const ThermalOccupations& occ);

struct StabilityReport {
    bool is_stable = false;
    double margin = 0.0;    // max Re(lambda), rad/s
    double threshold = 0.0; // stable iff margin < -threshold
    std::array<std::complex<double>, 8> eigenvalues{};
};

// The gate is strict: margin must lie below -1e-9 * max|A_ij|.
StabilityReport stability(const DriftMatrix& a);

// Solves A V + V A^T + D = 0 on the real Schur form of A. Throws
// StabilityError if A fails the gate, AccuracyError if the max-norm residual
// exceeds 1e-10 * max(1, max|D_ij|), PhysicalityError if a symplectic
// eigenvalue of V falls below 1/2 - 1e-9.
CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d);

double lyapunov_residual(const Matrix8& a, const Matrix8& d, const Matrix8& v);

// Ascending symplectic eigenvalues of an 8x8 covariance (four modes).
std::array<double, 4> symplectic_eigenvalues(const Matrix8& v);

inline constexpr double kResidualTolerance = 1e-10;
inline constexpr double kPhysicalityTolerance = 1e-9;
inline constexpr double kStabilityFloor = 1e-9;
// One residual-correction pass reusing the Schur factor.
inline constexpr int kRefinementSteps = 1;

namespace detail {

// Bartels-Stewart solve of A X + X A^T + D = 0 for any square size, no
// stability gate or checks. A must have no eigenvalue pair summing to zero.
Eigen::MatrixXd lyapunov_schur(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d);

} // namespace detail

namespace reference {

// Kronecker vectorization: (I (x) A + A (x) I) vec V = -vec D as one 64x64
// dense LU solve. Serial oracle for the Schur path.
Matrix8 solve_lyapunov_kronecker(const Matrix8& a, const Matrix8& d);

} // namespace reference

} // namespace magnoent

#endif
