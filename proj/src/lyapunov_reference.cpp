#include <Eigen/LU>

#include "magnoent/dynamics.hpp"
#include "magnoent/errors.hpp"

namespace magnoent::reference {

Matrix8 solve_lyapunov_kronecker(const Matrix8& a, const Matrix8& d)
{
    constexpr int n = 8;
    const double s = 1.0 / a.cwiseAbs().maxCoeff();
    const Matrix8 as = s * a;

    // Column-major vec: vec(A V) = (I (x) A) vec V, vec(V A^T) = (A (x) I) vec V.
    Eigen::Matrix<double, n * n, n * n> k = Eigen::Matrix<double, n * n, n * n>::Zero();
    for (int col = 0; col < n; ++col) {
        k.block<n, n>(col * n, col * n) += as;
        for (int row = 0; row < n; ++row) {
            k.block<n, n>(row * n, col * n).diagonal().array() += as(row, col);
        }
    }
    Eigen::Matrix<double, n * n, 1> rhs;
    for (int col = 0; col < n; ++col) {
        rhs.segment<n>(col * n) = -s * d.col(col);
    }
    Eigen::FullPivLU<Eigen::Matrix<double, n * n, n * n>> lu(k);
    if (!lu.isInvertible()) {
        throw NumericalError("Kronecker Lyapunov operator is singular");
    }
    const Eigen::Matrix<double, n * n, 1> x = lu.solve(rhs);
    Matrix8 v;
    for (int col = 0; col < n; ++col) {
        v.col(col) = x.segment<n>(col * n);
    }
    return 0.5 * (v + v.transpose());
}

} // namespace magnoent::reference
