#include "magnoent/entanglement.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "magnoent/errors.hpp"

namespace magnoent {

std::string_view to_string(Mode m)
{
    switch (m) {
    case Mode::M1:
        return "m1";
    case Mode::M2:
        return "m2";
    case Mode::Cavity:
        return "cavity";
    case Mode::Magnon:
        return "magnon";
    }
    return "?";
}

Mode parse_mode(std::string_view text)
{
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    for (Mode m : {Mode::M1, Mode::M2, Mode::Cavity, Mode::Magnon}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    throw ConfigError("unknown mode '" + std::string(text) + "' (expected m1, m2, cavity or magnon)");
}

ModePair::ModePair(Mode a, Mode b)
  : first_(std::min(a, b)), second_(std::max(a, b))
{
    if (a == b) {
        throw InvalidParameter("mode pair needs two distinct modes");
    }
}

std::string ModePair::label() const
{
    return std::string(to_string(first_)) + "," + std::string(to_string(second_));
}

ReducedCovariance::ReducedCovariance(const Matrix2& b1, const Matrix2& b2, const Matrix2& e)
  : b1_(0.5 * (b1 + b1.transpose())), b2_(0.5 * (b2 + b2.transpose())), e_(e)
{
    for (const Matrix2* b : {&b1_, &b2_}) {
        const double det = b->determinant();
        if (!(det >= 0.0) || std::sqrt(det) < 0.5 - kPhysicalityTolerance) {
            throw PhysicalityError("local block violates the uncertainty principle");
        }
    }
}

Matrix4 ReducedCovariance::assembled() const
{
    Matrix4 psi;
    psi << b1_, e_, e_.transpose(), b2_;
    return psi;
}

ReducedCovariance reduce(const CovarianceMatrix& v, const ModePair& pair)
{
    const int i = 2 * static_cast<int>(pair.first());
    const int j = 2 * static_cast<int>(pair.second());
    const Matrix8& m = v.matrix();
    return ReducedCovariance(m.block<2, 2>(i, i), m.block<2, 2>(j, j), m.block<2, 2>(i, j));
}

NegativityDetail negativity_detail(const ReducedCovariance& psi)
{
    NegativityDetail out;
    out.sigma = psi.b1().determinant() + psi.b2().determinant() - 2.0 * psi.e().determinant();
    out.det_psi = psi.assembled().determinant();
    if (!(out.det_psi > 0.0)) {
        throw PhysicalityError("two-mode covariance has non-positive determinant");
    }
    double disc = out.sigma * out.sigma - 4.0 * out.det_psi;
    if (disc < 0.0) {
        if (disc < -1e-12 * std::max(1.0, out.sigma * out.sigma)) {
            throw PhysicalityError("negative discriminant in symplectic spectrum");
        }
        disc = 0.0;
    }
    const double eta_sq = 0.5 * (out.sigma - std::sqrt(disc));
    if (!(eta_sq > 0.0)) {
        throw PhysicalityError("partial transpose has a vanishing symplectic eigenvalue");
    }
    out.eta_minus = std::sqrt(eta_sq);
    const double en = -std::log(2.0 * out.eta_minus);
    out.log_negativity = en < kNegativityFloor ? 0.0 : en;
    return out;
}

double log_negativity(const ReducedCovariance& psi)
{
    return negativity_detail(psi).log_negativity;
}

std::string_view to_string(PointStatus s)
{
    switch (s) {
    case PointStatus::Ok:
        return "ok";
    case PointStatus::Unstable:
        return "unstable";
    case PointStatus::Error:
        return "error";
    }
    return "?";
}

EntanglementResult entanglement_at(const SystemParams& p, const ModePair& pair)
{
    p.validate();
    const auto drift = build_drift(p);
    const auto stab = stability(drift);
    EntanglementResult r;
    r.margin = stab.margin;
    if (!stab.is_stable) {
        r.status = PointStatus::Unstable;
        r.message = "max Re lambda = " + std::to_string(stab.margin) + " rad/s";
        return r;
    }
    const auto cov = solve_lyapunov(drift, build_diffusion(p, occupations(p)));
    r.log_negativity = log_negativity(reduce(cov, pair));
    return r;
}

} // namespace magnoent
