#ifndef MAGNOENT_ENTANGLEMENT_HPP
#define MAGNOENT_ENTANGLEMENT_HPP

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "magnoent/dynamics.hpp"
#include "magnoent/params.hpp"

namespace magnoent {

// Values are the row-block index of the mode in the fluctuation vector.
enum class Mode : int { M1 = 0, M2 = 1, Cavity = 2, Magnon = 3 };

std::string_view to_string(Mode m);
// Accepts m1, m2, cavity, magnon (case-insensitive); ConfigError otherwise.
Mode parse_mode(std::string_view text);

// Unordered pair of distinct modes, stored with the lower index first.
class ModePair {
public:
    ModePair(Mode a, Mode b);

    Mode first() const { return first_; }
    Mode second() const { return second_; }
    std::string label() const;

    bool operator==(const ModePair&) const = default;

private:
    Mode first_;
    Mode second_;
};

using Matrix2 = Eigen::Matrix2d;
using Matrix4 = Eigen::Matrix4d;

// Two-mode covariance [[B1, E], [E^T, B2]].
class ReducedCovariance {
public:
    // Throws PhysicalityError if a local block violates sqrt(det B) >= 1/2.
    ReducedCovariance(const Matrix2& b1, const Matrix2& b2, const Matrix2& e);

    const Matrix2& b1() const { return b1_; }
    const Matrix2& b2() const { return b2_; }
    const Matrix2& e() const { return e_; }
    Matrix4 assembled() const;

private:
    Matrix2 b1_;
    Matrix2 b2_;
    Matrix2 e_;
};

ReducedCovariance reduce(const CovarianceMatrix& v, const ModePair& pair);

struct NegativityDetail {
    double sigma = 0.0;           // det B1 + det B2 - 2 det E
    double det_psi = 0.0;
    double eta_minus = 0.0;       // smallest symplectic eigenvalue of the partial transpose
    double log_negativity = 0.0;  // max(0, -ln 2 eta_minus), floored at 1e-9
};

inline constexpr double kNegativityFloor = 1e-9;

// Closed-form minimum symplectic eigenvalue of the partially transposed
// two-mode covariance. Throws PhysicalityError when det Psi <= 0 or the
// discriminant Sigma^2 - 4 det Psi is negative beyond rounding.
NegativityDetail negativity_detail(const ReducedCovariance& psi);
double log_negativity(const ReducedCovariance& psi);

enum class PointStatus { Ok, Unstable, Error };
std::string_view to_string(PointStatus s);

struct EntanglementResult {
    PointStatus status = PointStatus::Ok;
    double log_negativity = 0.0; // 0 unless status is Ok
    double margin = 0.0;         // stability margin, rad/s
    std::string message;         // set for Unstable / Error
};

// Full pipeline for one parameter point. Unstable drift matrices return
// status Unstable rather than throwing; other failures propagate.
EntanglementResult entanglement_at(const SystemParams& p, const ModePair& pair);

} // namespace magnoent

#endif
