#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blowup/dynsys.hpp"
#include "blowup/model.hpp"
#include "blowup/params.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// Control and events.
// ---------------------------------------------------------------------------

struct IntegratorControl {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0; // <= 0 selects an automatic first step
    double h_max = 1.0;
    long max_steps = 200000;
    double xi_min = 1e-4;     // lower cutoff for backward profile runs
    double bound_huge = 1e8;  // divergence threshold
};

enum class EventKind {
    VHitsZero,
    VDiverges,
    YCrossesValue,
    ZReaches,
    StateNearPoint,
    StepBudgetExhausted,
    ReachedXiMin,
};

/// A watched stopping condition.  Root-resolved events (VHitsZero,
/// YCrossesValue, ZReaches, StateNearPoint) are located by bisection on the
/// dense output to 1e-10 in the independent variable.
struct EventSpec {
    EventKind kind;
    double value = 0.0;  // y0 for YCrossesValue, z0 for ZReaches
    double radius = 1e-3; // StateNearPoint
    std::optional<CriticalPoint> point; // StateNearPoint target
    bool p1_line = false; // distance to the whole line {X=0, Y=-b/a}

    /// Fires when v falls to delta*|w|, i.e. the zero sits within delta of
    /// the current xi; scale-free and inert at degenerate origins where v
    /// and w vanish together.
    static EventSpec v_hits_zero(double delta = 1e-11) {
        return {EventKind::VHitsZero, delta};
    }
    static EventSpec y_crosses(double y0) { return {EventKind::YCrossesValue, y0}; }
    static EventSpec z_reaches(double z0) { return {EventKind::ZReaches, z0}; }
    static EventSpec near_point(const CriticalPoint& pt, double radius) {
        EventSpec e{EventKind::StateNearPoint, 0.0, radius};
        e.point = pt;
        return e;
    }
    static EventSpec near_p1_line(double radius) {
        EventSpec e{EventKind::StateNearPoint, 0.0, radius};
        e.p1_line = true;
        return e;
    }
};

struct Event {
    EventKind kind = EventKind::StepBudgetExhausted;
    double location = 0.0; // xi or eta
    int spec_index = -1;   // index into the watch list, -1 for built-ins
};

enum class Direction { Forward, Backward };

template <int N>
struct Sample {
    double t;
    Eigen::Matrix<double, N, 1> y;
    Eigen::Matrix<double, N, 1> dy;
};

// ---------------------------------------------------------------------------
// Trajectories.
// ---------------------------------------------------------------------------

struct ProfileTrajectory {
    Params params;
    std::vector<Sample<2>> samples; // t = xi, y = (v, w); t strictly monotone
    Event termination;
    double terminal_fm_prime = 0.0;
    std::optional<LocalSeries> anchor; // launch series, if any

    ProfileState front() const;
    ProfileState back() const;
    double xi_lo() const;
    double xi_hi() const;
    bool contains_xi(double xi) const;
    /// Cubic-Hermite interpolation between accepted steps.
    ProfileState state_at(double xi) const;
};

struct PhaseTrajectory {
    Params params;
    std::vector<Sample<3>> samples; // t = eta
    Event termination;

    PhaseState front() const;
    PhaseState back() const;
    PhaseState state_at(double eta) const;
    /// Similarity variable of a sample, xi = (a Z)^{1/s}.
    double xi_of(int i) const;
    ProfileState profile_of(int i) const;
    /// Profile view at an exact xi, by inverting the monotone Z(eta) on the
    /// dense output.  Throws std::out_of_range outside the sampled range.
    ProfileState profile_at_xi(double xi) const;
};

// ---------------------------------------------------------------------------
// Integrators: Dormand-Prince 5(4) with error-per-step control, cubic-Hermite
// dense output and bisected event location.
// ---------------------------------------------------------------------------

ProfileTrajectory integrate_profile(const Params& p, const ProfileState& start,
                                    Direction direction,
                                    const IntegratorControl& ctrl,
                                    std::span<const EventSpec> watch);

PhaseTrajectory integrate_phase(const Params& p, const PhaseState& start,
                                const IntegratorControl& ctrl,
                                std::span<const EventSpec> watch);

/// u(x, t) = (T-t)^{-alpha} f(xi), xi = |x| (T-t)^{beta}, by interpolation on
/// the trajectory; the launch series extends the range below the first
/// sample, and xi beyond an interface termination evaluates to zero.
double selfsimilar_eval(const ProfileTrajectory& traj, double T, double x, double t);

// ---------------------------------------------------------------------------
// Generic driver, shared by both integrators and reusable for the auxiliary
// planar systems in tests.
// ---------------------------------------------------------------------------

namespace rk {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

enum class StopKind { Event, Endpoint, Budget, Diverged };

template <int N>
struct Stop {
    StopKind kind = StopKind::Budget;
    int event = -1;
    double t = 0.0;
};

/// rhs(t, y) -> Vec<N>.  event_g(i, t, y) -> double; event i fires when its
/// value passes from > 0 to <= 0 across an accepted step.  All accepted steps
/// (and the interpolated event endpoint) are appended to `out`.
template <int N, class RHS, class EventG>
Stop<N> drive(RHS&& rhs, double t0, Vec<N> y0, double dir,
              std::optional<double> t_end, const IntegratorControl& ctrl,
              int n_events, EventG&& event_g, std::vector<Sample<N>>& out) {
    using V = Vec<N>;
    const double rt = ctrl.rtol, at = ctrl.atol;

    auto scaled_err = [&](const V& a, const V& b, const V& e) {
        double s = 0.0;
        for (int i = 0; i < N; ++i) {
            double sc = at + rt * std::max(std::abs(a[i]), std::abs(b[i]));
            double q = e[i] / std::max(sc, std::numeric_limits<double>::min());
            s += q * q;
        }
        return std::sqrt(s / N);
    };

    V f0 = rhs(t0, y0);
    out.push_back({t0, y0, f0});

    // Zero-width run: an already-triggered watch terminates immediately.
    for (int i = 0; i < n_events; ++i)
        if (event_g(i, t0, y0) <= 0.0)
            return {StopKind::Event, i, t0};
    if (t_end && dir * (*t_end - t0) <= 0.0)
        return {StopKind::Endpoint, -1, t0};

    std::vector<double> g0(n_events);
    for (int i = 0; i < n_events; ++i) g0[i] = event_g(i, t0, y0);

    double h = ctrl.h_init > 0.0 ? ctrl.h_init : 0.0;
    if (h <= 0.0) {
        // First-step heuristic from the initial scale of y and f.
        double dy = 0.0, df = 0.0;
        for (int i = 0; i < N; ++i) {
            double sc = at + rt * std::abs(y0[i]);
            dy = std::max(dy, std::abs(y0[i]) / sc);
            df = std::max(df, std::abs(f0[i]) / sc);
        }
        h = (df > 1e-300) ? 0.01 * dy / df : 1e-6;
        h = std::clamp(h, 1e-12, ctrl.h_max);
    }
    h = std::min(h, ctrl.h_max);

    auto hermite = [](double ta, const V& ya, const V& fa, double tb,
                      const V& yb, const V& fb, double t) {
        double hh = tb - ta, u = (t - ta) / hh, u2 = u * u, u3 = u2 * u;
        return V((2 * u3 - 3 * u2 + 1) * ya + ((u3 - 2 * u2 + u) * hh) * fa +
                 (-2 * u3 + 3 * u2) * yb + ((u3 - u2) * hh) * fb);
    };

    bool rejected_last = false;
    for (long step = 0; step < ctrl.max_steps; ++step) {
        if (t_end) {
            double remain = dir * (*t_end - t0);
            if (remain <= 0.0) return {StopKind::Endpoint, -1, t0};
            if (h > remain) h = remain;
        }
        double hs = dir * h;

        // Dormand-Prince 5(4), FSAL.
        V k1 = f0;
        V k2 = rhs(t0 + hs / 5, V(y0 + hs * (k1 / 5)));
        V k3 = rhs(t0 + hs * 3 / 10, V(y0 + hs * (3.0 / 40 * k1 + 9.0 / 40 * k2)));
        V k4 = rhs(t0 + hs * 4 / 5,
                   V(y0 + hs * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3)));
        V k5 = rhs(t0 + hs * 8 / 9,
                   V(y0 + hs * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                64448.0 / 6561 * k3 - 212.0 / 729 * k4)));
        V k6 = rhs(t0 + hs, V(y0 + hs * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                                         46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                                         5103.0 / 18656 * k5)));
        V y1 = y0 + hs * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                          2187.0 / 6784 * k5 + 11.0 / 84 * k6);
        V k7 = rhs(t0 + hs, y1);
        V e = hs * (71.0 / 57600 * k1 - 71.0 / 16695 * k3 + 71.0 / 1920 * k4 -
                    17253.0 / 339200 * k5 + 22.0 / 525 * k6 - 1.0 / 40 * k7);

        if (!y1.allFinite() || !e.allFinite()) {
            h *= 0.5;
            if (h < 1e-14 * std::max(1.0, std::abs(t0)))
                return {StopKind::Diverged, -1, t0};
            continue;
        }

        double err = scaled_err(y0, y1, e);
        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < 1e-14 * std::max(1.0, std::abs(t0)))
                return {StopKind::Diverged, -1, t0};
            rejected_last = true;
            continue;
        }

        double t1 = t0 + hs;

        // Event location on the dense output of this step.
        double best_u = 2.0;
        int best_i = -1;
        for (int i = 0; i < n_events; ++i) {
            double g1 = event_g(i, t1, y1);
            if (g0[i] > 0.0 && g1 <= 0.0) {
                // locate to 1e-10 in t, or to rounding when steps are huge
                double ua = 0.0, ub = 1.0;
                while ((ub - ua) * h > 1e-10 && ub - ua > 4e-16) {
                    double um = 0.5 * (ua + ub);
                    double tm = t0 + hs * um;
                    V ym = hermite(t0, y0, k1, t1, y1, k7, tm);
                    if (event_g(i, tm, ym) > 0.0)
                        ua = um;
                    else
                        ub = um;
                }
                if (ub < best_u) {
                    best_u = ub;
                    best_i = i;
                }
            }
            g0[i] = g1;
        }
        if (best_i >= 0) {
            double ts = t0 + hs * best_u;
            V ys = hermite(t0, y0, k1, t1, y1, k7, ts);
            out.push_back({ts, ys, rhs(ts, ys)});
            return {StopKind::Event, best_i, ts};
        }

        out.push_back({t1, y1, k7});

        if (y1.template lpNorm<Eigen::Infinity>() > ctrl.bound_huge)
            return {StopKind::Diverged, -1, t1};

        t0 = t1;
        y0 = y1;
        f0 = k7;
        double grow = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
        if (rejected_last) grow = std::min(grow, 1.0); // damp accept/reject thrash
        rejected_last = false;
        h = std::min(ctrl.h_max, h * grow);
    }
    return {StopKind::Budget, -1, t0};
}

} // namespace rk

} // namespace blowup
