#pragma once

#include <optional>

#include <Eigen/Dense>

#include "blowup/params.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// Critical points of the phase-space system and their linearizations.
// ---------------------------------------------------------------------------

enum class PointTag { P0, P0Gamma, P1Gamma, P2, Q1, Q2, Q3, Q4, Q5 };

/// A critical point, either finite (coords) or at infinity (unit 4-vector on
/// the Poincare hypersphere, last component zero).
struct CriticalPoint {
    PointTag tag;
    double gamma = 0.0; // label along the P0^g / P1^g lines
    Eigen::Vector3d coords = Eigen::Vector3d::Zero();
    Eigen::Vector4d sphere = Eigen::Vector4d::Zero();
    bool at_infinity = false;
};

/// gamma is required (and must be > 0) for P0Gamma and P1Gamma.
CriticalPoint critical_point(const Params& p, PointTag tag,
                             std::optional<double> gamma = std::nullopt);

/// Local linear model at a critical point.  Eigen-pairs are stored complex;
/// realness is checked by callers, never assumed.
struct Linearization {
    CriticalPoint point;
    Eigen::Matrix3d matrix;
    Eigen::Vector3cd eigenvalues;
    Eigen::Matrix3cd eigenvectors; // column j pairs with eigenvalues[j]
};

/// Supported points: P0, P0Gamma, P1Gamma, P2, Q5.  The remaining points at
/// infinity have no single linearization in these coordinates and raise
/// UnsupportedPoint.  For P1Gamma the eigenvector of the negative eigenvalue
/// is replaced by its closed form (-1, (a(1-g)+b)/(mb), asg/((m-1)b)).
Linearization linearize(const Params& p, const CriticalPoint& point);

/// Coefficient of the second term of the profile expansion leaving P2,
/// psi = ((m-1)^2 / ((m-1)s^2 + (3m+1)s + 4(m+1)))^{1/(m-1)}.  Positive,
/// decreasing to zero as sigma -> infinity.
double psi_coefficient(const Params& p);

/// Direction of the unique orbit leaving P2 (the positive eigenvalue), with
/// unit Z-component: (-(m-1)^2/D, -(m-1)(s+2)/D, 1).
Eigen::Vector3d p2_exit_direction(const Params& p);

// ---------------------------------------------------------------------------
// The closed-form profile at sigma = sigma_star(m).
// ---------------------------------------------------------------------------

/// f_*(xi) = xi^{2/(m-1)} ((m-1)/(2m(m+1)) - B xi^{s*})_+^{1/(m-1)},
/// B = (m-1)^2/(m (s*+2)(m s* + m + 1)).  Exactly zero outside the support.
double explicit_profile(double m, double xi);

/// v_* = f_*^{m-1} (clipped at zero) and its xi-derivative.
double explicit_pressure(double m, double xi);
double explicit_pressure_slope(double m, double xi);

/// Residual of the profile equation (f^m)'' - a f + b xi f' + xi^s f at f_*,
/// evaluated from closed-form derivatives.  Vanishes to rounding on the
/// open support.
double explicit_ode_residual(double m, double xi);

/// Right edge xi_1 = ((m-1)/(2m(m+1)B))^{1/s*} of the support of f_*.
/// Coincides with (a* g*)^{1/s*}, g* = (m s* + m + 1)/s*.
double explicit_support_edge(double m);

// ---------------------------------------------------------------------------
// Local series at the degenerate anchors, in the pressure pair
// v = f^{m-1}, w = v'.
// ---------------------------------------------------------------------------

enum class SeriesAnchor { OriginP0, OriginP2, InterfaceP1, TailQ4, OriginQ5 };

/// coefficient means: c (OriginP0, f ~ c xi^{(s+2)/(m-1)}), gamma
/// (InterfaceP1), K (TailQ4, OriginQ5); ignored for OriginP2 whose
/// coefficients are fixed by (m, sigma).
struct LocalSeries {
    SeriesAnchor anchor;
    Params params;
    double coefficient = 1.0;
};

struct SeriesValue {
    double v;
    double w;
};

/// Truncated local expansion at the anchor.  Throws OutsideSupport when the
/// InterfaceP1 series is evaluated past the interface (v < 0).
SeriesValue local_series_eval(const LocalSeries& s, double xi);

/// Interface location (a gamma)^{1/sigma} of the InterfaceP1 series.
double interface_location(const Params& p, double gamma);

/// Bridge between the profile coefficient c of f ~ c xi^{(s+2)/(m-1)} and the
/// phase-space slope k of Z ~ kX at the origin: k = 1/(m c^{m-1}).
double origin_coefficient_to_k(const Params& p, double c);

/// r = ln f + xi^sigma - ((sigma+2)/(m-1)) ln xi.  Along a tail orbit r
/// converges to ln K of the envelope f ~ K xi^{(s+2)/(m-1)} e^{-xi^s}.
double tail_residual(const Params& p, double xi, double f);

} // namespace blowup
