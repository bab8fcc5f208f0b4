#pragma once

#include <span>
#include <utility>
#include <vector>

#include "blowup/integrate.hpp"

namespace blowup {

/// Thresholds of the two shooting procedures.  Defaults were validated
/// against the closed-form profile with wide margin.
struct ShootControl {
    IntegratorControl ode;          // base integrator settings
    double slope_tol = 1e-4;        // |f'(0)| below which a profile is good
    double fmslope_tol = 1e-6;      // interface vs transversal-zero split on (f^m)'
    double a_floor = 1e-3;          // f(0) below which the origin is treated as f(0)=0
    double z_cut = 50.0;            // tail cutoff in Z
    double tail_tol = 1e-2;         // admissible tail-residual total variation
    double series_offset = 3e-6;    // relative launch offset off a singular anchor
    double launch_scale = 1e-6;     // max(X0, Z0) of a phase-space origin launch
    double p1_radius = 1e-4;        // proximity radius to the interface line
    double y_cut_factor = 3.0;      // transversal cutoff at -factor*(1 + b/a)
    double tail_commit = 1e-3;      // funnel size at which an orbit counts as tail-bound
    double bisect_rel = 1e-10;      // relative bracket width at convergence
    int workers = 0;                // 0 = hardware concurrency
};

// ---------------------------------------------------------------------------
// Backward shooting from the interface.
// ---------------------------------------------------------------------------

enum class BackwardKind { SignChange, PositiveAtZero, GoodCandidate, Asymptote, Inconclusive };

/// Origin endpoint of a backward shoot, read off the phase-space image.
/// Entering P2 certifies f ~ [(m-1)/(2m(m+1))]^{1/(m-1)} xi^{2/(m-1)};
/// entering P0 certifies f ~ C xi^{(s+2)/(m-1)}.  Backward integration
/// cannot follow either connection all the way down (the approach is
/// backward-unstable), so the closest pass distance is the honest signal.
enum class OriginEndpoint { PositiveValue, EntersP2, EntersP0, Unknown };

struct BackwardOutcome {
    explicit BackwardOutcome(ProfileTrajectory tr) : trajectory(std::move(tr)) {}
    BackwardKind kind = BackwardKind::Inconclusive;
    double theta = 0.0;        // SignChange: zero crossing in (0, eta)
    double origin_value = 0.0; // f extrapolated to xi = 0
    double origin_slope = 0.0; // f' extrapolated to xi = 0
    OriginEndpoint endpoint = OriginEndpoint::Unknown;
    double graze_distance = 0.0; // closest phase-space pass to the endpoint
    double xi_graze = 0.0;       // xi of the closest pass; data below is unreliable
    ProfileTrajectory trajectory;
};

/// Launch state a relative offset below an interface at eta.  Quadratic in
/// the distance to the interface: the slope is the interface series', the
/// curvature is the one the profile equation forces there,
///   v'' = ((m-1)^2 (a - eta^s) - (m-1) b) / m^2.
ProfileState interface_launch_state(const Params& p, double eta, double offset_rel);

/// Launches the unique interface profile at xi = eta backward and classifies
/// its behavior toward the origin.
BackwardOutcome shoot_from_interface(const Params& p, double eta, const ShootControl& ctrl);

struct GoodProfileResult {
    explicit GoodProfileResult(BackwardOutcome o) : outcome(std::move(o)) {}
    double eta_star = 0.0;
    BackwardOutcome outcome; // classification at eta_star
    double eta_lo = 0.0, eta_hi = 0.0;
    BackwardKind lo_kind = BackwardKind::Inconclusive;
    BackwardKind hi_kind = BackwardKind::Inconclusive;
};

/// Bisects an interface point between a PositiveAtZero shoot and a
/// SignChange shoot down to relative width ctrl.bisect_rel.
GoodProfileResult find_good_profile(const Params& p, std::pair<double, double> bracket,
                                    const ShootControl& ctrl);

/// Geometric scan producing a valid bracket for find_good_profile: starts at
/// half the monotonicity threshold a^{1/s} and doubles until a sign change
/// appears.
std::pair<double, double> scan_interface_bracket(const Params& p, const ShootControl& ctrl);

// ---------------------------------------------------------------------------
// Forward shooting over the origin family f ~ c xi^{(s+2)/(m-1)}.
// ---------------------------------------------------------------------------

enum class ForwardKind { Interface, TransversalZero, Tail, Inconclusive };

struct ForwardOutcome {
    explicit ForwardOutcome(PhaseTrajectory tr) : trajectory(std::move(tr)) {}
    ForwardKind kind = ForwardKind::Inconclusive;
    double c = 0.0;
    double xi0 = 0.0;       // zero location (Interface, TransversalZero)
    double gamma = 0.0;     // interface label, xi0^s / a
    double lnK = 0.0;       // tail envelope constant
    double tail_drift = 0.0;
    double fm_prime_end = 0.0;
    PhaseTrajectory trajectory;
};

/// Launches the origin orbit with coefficient c and follows it in phase
/// space until it commits to an interface, a transversal zero, or the tail.
ForwardOutcome shoot_from_origin(const Params& p, double c, const ShootControl& ctrl);

/// Follows an arbitrary phase-space start forward and classifies its fate.
/// Near the tail point the flow is stiff in eta (fast Y-relaxation against
/// an algebraically slowing drift); once the orbit is inside the tail funnel
/// the routine continues on the attracting slow manifold, with Y slaved to
/// (X, Z) through the exact quadratic quasi-steady state, integrating in Z.
ForwardOutcome classify_phase_orbit(const Params& p, const PhaseState& start,
                                    const ShootControl& ctrl);

struct KClassification {
    struct Entry {
        double c;
        ForwardKind kind;
        double xi0 = 0.0, gamma = 0.0, lnK = 0.0, tail_drift = 0.0;
    };
    struct Interval {
        ForwardKind kind;
        std::size_t lo, hi; // inclusive index range into entries
    };
    std::vector<Entry> entries;
    std::vector<Interval> intervals;
    /// Adjacent (c_tail, c_cross) pairs bracketing an interface value.
    std::vector<std::pair<double, double>> candidate_brackets;
    int inconclusive_count = 0;
};

/// Classifies every c of a strictly increasing positive grid; shots run on a
/// small worker pool and are merged in grid order.
KClassification classify_c_intervals(const Params& p, std::span<const double> c_grid,
                                     const ShootControl& ctrl);

struct InterfaceCResult {
    explicit InterfaceCResult(ForwardOutcome o) : outcome(std::move(o)) {}
    double c_star = 0.0;
    ForwardOutcome outcome;
    double c_lo = 0.0, c_hi = 0.0;
};

/// Bisects between a Tail coefficient and a TransversalZero coefficient until
/// an Interface classification appears or the bracket closes to bisect_rel.
InterfaceCResult find_interface_c(const Params& p, std::pair<double, double> bracket,
                                  const ShootControl& ctrl);

} // namespace blowup
