#pragma once

#include <span>
#include <vector>

#include "blowup/shooting.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// Asymptotic-law fits.
// ---------------------------------------------------------------------------

/// A sampled positive stretch of a profile, f against xi.
struct ProfileCurve {
    std::vector<double> xi;
    std::vector<double> f;
};

/// Samples with xi in [xi_a, xi_b] and v > 0, from either trajectory kind.
ProfileCurve curve_from(const ProfileTrajectory& traj, double xi_a, double xi_b);
ProfileCurve curve_from(const PhaseTrajectory& traj, double xi_a, double xi_b);

enum class MatchedLaw { TwoOverM1, SigmaPlus2OverM1, OneOverM, Constant, None };

struct OriginFit {
    double exponent = 0.0;
    double coefficient = 0.0;
    double rms_residual = 0.0;
    MatchedLaw matched_law = MatchedLaw::None;
};

/// Log-log least squares of f against xi on the window.  The law is matched
/// within 5% relative against {2/(m-1), (s+2)/(m-1), 1/m, 0}; an ambiguous
/// match (two candidates within tolerance) reports None.  Throws
/// std::invalid_argument on windows with fewer than 8 samples.
OriginFit fit_origin(const ProfileCurve& curve, const Params& p, double xi_a, double xi_b);

/// Mean and total variation of the tail residual over the window.
struct TailFit {
    double lnK = 0.0;
    double drift = 0.0;
};
TailFit fit_tail(const ProfileCurve& curve, const Params& p, double xi_a, double xi_b);

enum class BlowupCharacter { Global, AtInfinity, Unknown };

/// Constant and 2/(m-1) origin laws blow up everywhere; the (s+2)/(m-1) law
/// stays bounded at every finite point and blows up along x(t) -> infinity.
BlowupCharacter blowup_character(const OriginFit& fit);

// ---------------------------------------------------------------------------
// Barrier-surface formulas used in the confinement arguments.
// ---------------------------------------------------------------------------

/// k1 = (b/2a)^2 = (m-1)^2/(4(s+2)^2), the level of the hyperbola {XZ = k1}.
double barrier_k1(const Params& p);

/// F(X, Z; y0) = -y0^2 - (b/a) y0 + X - X y0 - X Z, the normal flow through
/// the plane {Y = y0}.
double flow_on_Y_plane(const Params& p, double y0, double X, double Z);

/// Second derivative of Y along the orbit at a tangency with {Y = y0}, with
/// Z eliminated through the zero-flow hyperbola:
///   s X^2 (y0-1) + (m-1) y0^3
///   + [(s-2) X y0 (m-1+(s+2) y0) + m(m-2) y0^2 + y0] / (s+2).
double tangency_second_derivative(const Params& p, double y0, double X);

/// Membership in {0 < X < X(P2), 0 < Y < Y(P2), Y + Z/(1+s) <= 1}.
bool region_interm4_contains(const Params& p, const PhaseState& s);

/// Unique positive root of x(x+1)(x+2) = m+1 (safeguarded Newton,
/// residual below 1e-12).
double sigma0_cubic_root(double m);

// ---------------------------------------------------------------------------
// Regime scan over sigma.
// ---------------------------------------------------------------------------

struct RegimeReport {
    double sigma = 0.0;
    bool all_tail = false;
    bool has_interface_from_origin = false;
    bool has_transversal = false;
    double good_profile_origin_value = 0.0;
    BlowupCharacter blowup_character = BlowupCharacter::Unknown;
    MatchedLaw good_profile_law = MatchedLaw::None;
    double good_profile_eta = 0.0;
    int inconclusive_count = 0;
    int shot_count = 0;
    double sigma0 = 0.0;      // root of the cubic above
    double sigma_star = 0.0;  // sqrt(2(m+1))
    bool below_proved_all_tail = false; // sigma < min(sigma0, 2)
};

/// Per sigma: classifies a default logarithmic c-grid, finds the good
/// profile by backward bisection, fits its origin law and derives the
/// blow-up character.
std::vector<RegimeReport> regime_scan(double m, std::span<const double> sigma_grid,
                                      const ShootControl& ctrl);

} // namespace blowup
