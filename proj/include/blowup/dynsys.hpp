#pragma once

#include <Eigen/Dense>

#include "blowup/errors.hpp"
#include "blowup/params.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// States.  The profile ODE is integrated in the pressure pair v = f^{m-1},
// w = v', which vanishes linearly at interfaces; f itself is an accessor.
// ---------------------------------------------------------------------------

struct ProfileState {
    double xi;
    double v;
    double w;

    double f(const Params& p) const;        // v^{1/(m-1)}
    double fprime(const Params& p) const;   // v^{(2-m)/(m-1)} w/(m-1), v > 0
    double fm_prime(const Params& p) const; // (m/(m-1)) v^{1/(m-1)} w
};

struct PhaseState {
    double X;
    double Y;
    double Z;

    Eigen::Vector3d vec() const { return {X, Y, Z}; }
};

struct ReducedState {
    double X;
    double Y;
    double W; // W = X Z
};

struct ProfileDeriv {
    double dv;
    double dw;
};

// ---------------------------------------------------------------------------
// Right-hand sides.
// ---------------------------------------------------------------------------

/// Profile equation in (v, w):
///   v' = w,  w' = ((m-1)/m)(a - xi^s) - b xi w/(m v) - w^2/((m-1) v).
/// Singular at v = 0; callers step off degeneracies via the local series.
ProfileDeriv profile_rhs(const Params& p, const ProfileState& s);

/// Autonomous quadratic system in eta:
///   X' = X[(m-1)Y - 2X],  Y' = -Y^2 - (b/a)Y + X - XY - XZ,  Z' = s Z X.
Eigen::Vector3d phase_rhs(const Params& p, const PhaseState& s);

/// Same flow after W = XZ:
///   X' = X[(m-1)Y - 2X],  Y' = -Y^2 - (b/a)Y + X - XY - W,
///   W' = W[(m-1)Y + (s-2)X].
Eigen::Vector3d reduced_rhs(const Params& p, const ReducedState& s);

/// Flow on the center manifold organizing the tail orbits:
///   X' = X[s X - (s+2) W],  W' = W[2 s X - (s+2) W].
Eigen::Vector2d center_flow_rhs(const Params& p, double X, double W);

/// First integral of the center flow: with K = W/X,
///   c = X exp(((s+2)/s) K) / K
/// is constant along center_flow_rhs orbits.  Requires X > 0, W > 0.
double center_flow_integral(const Params& p, double X, double W);

/// X = (m/a) xi^{-2} v,  Y = (m/(a(m-1))) xi^{-1} w,  Z = xi^s / a.
PhaseState profile_to_phase(const Params& p, const ProfileState& s);

/// Inverse view along an orbit: xi = (a Z)^{1/s}, v = (a/m) xi^2 X,
/// w = (a(m-1)/m) xi Y.  Requires Z > 0.
ProfileState phase_to_profile(const Params& p, const PhaseState& s);

} // namespace blowup
