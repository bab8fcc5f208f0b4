#include "blowup/dynsys.hpp"

#include <cmath>

namespace blowup {

double ProfileState::f(const Params& p) const {
    return v > 0.0 ? std::pow(v, 1.0 / (p.m - 1.0)) : 0.0;
}

double ProfileState::fprime(const Params& p) const {
    if (v <= 0.0) throw DegenerateState("fprime: v <= 0");
    return std::pow(v, (2.0 - p.m) / (p.m - 1.0)) * w / (p.m - 1.0);
}

double ProfileState::fm_prime(const Params& p) const {
    if (v <= 0.0) return 0.0;
    return p.m / (p.m - 1.0) * std::pow(v, 1.0 / (p.m - 1.0)) * w;
}

ProfileDeriv profile_rhs(const Params& p, const ProfileState& s) {
    if (!(s.v > 0.0)) throw DegenerateState("profile_rhs: v <= 0");
    const auto [alpha, beta] = exponents(p);
    const double m = p.m;
    const double dw = (m - 1.0) / m * (alpha - std::pow(s.xi, p.sigma)) -
                      beta * s.xi * s.w / (m * s.v) - s.w * s.w / ((m - 1.0) * s.v);
    return {s.w, dw};
}

Eigen::Vector3d phase_rhs(const Params& p, const PhaseState& s) {
    const auto [alpha, beta] = exponents(p);
    const double m = p.m;
    return {s.X * ((m - 1.0) * s.Y - 2.0 * s.X),
            -s.Y * s.Y - beta / alpha * s.Y + s.X - s.X * s.Y - s.X * s.Z,
            p.sigma * s.Z * s.X};
}

Eigen::Vector3d reduced_rhs(const Params& p, const ReducedState& s) {
    const auto [alpha, beta] = exponents(p);
    const double m = p.m;
    return {s.X * ((m - 1.0) * s.Y - 2.0 * s.X),
            -s.Y * s.Y - beta / alpha * s.Y + s.X - s.X * s.Y - s.W,
            s.W * ((m - 1.0) * s.Y + (p.sigma - 2.0) * s.X)};
}

Eigen::Vector2d center_flow_rhs(const Params& p, double X, double W) {
    const double s = p.sigma;
    return {X * (s * X - (s + 2.0) * W), W * (2.0 * s * X - (s + 2.0) * W)};
}

double center_flow_integral(const Params& p, double X, double W) {
    if (!(X > 0.0) || !(W > 0.0))
        throw std::invalid_argument("center_flow_integral: X > 0 and W > 0 required");
    const double K = W / X;
    return X * std::exp((p.sigma + 2.0) / p.sigma * K) / K;
}

PhaseState profile_to_phase(const Params& p, const ProfileState& s) {
    if (!(s.xi > 0.0)) throw std::invalid_argument("profile_to_phase: xi > 0 required");
    if (!(s.v > 0.0)) throw DegenerateState("profile_to_phase: v > 0 required");
    const auto [alpha, beta] = exponents(p);
    (void)beta;
    const double m = p.m;
    return {m / alpha * s.v / (s.xi * s.xi),
            m / (alpha * (m - 1.0)) * s.w / s.xi,
            std::pow(s.xi, p.sigma) / alpha};
}

ProfileState phase_to_profile(const Params& p, const PhaseState& s) {
    if (!(s.Z > 0.0)) throw std::invalid_argument("phase_to_profile: Z > 0 required");
    const auto [alpha, beta] = exponents(p);
    (void)beta;
    const double m = p.m;
    const double xi = std::pow(alpha * s.Z, 1.0 / p.sigma);
    return {xi, alpha / m * xi * xi * s.X, alpha * (m - 1.0) / m * xi * s.Y};
}

} // namespace blowup
