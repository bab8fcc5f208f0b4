#include "blowup/shooting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

/// Ordinary least squares y = a + b x; returns {a, b}.
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return {y.empty() ? 0.0 : y[0], 0.0};
    const double b = (n * sxy - sx * sy) / den;
    const double a = (sy - b * sx) / n;
    return {a, b};
}

IntegratorControl backward_control(const ShootControl& ctrl, double eta) {
    IntegratorControl c = ctrl.ode;
    // Pressure spans many decades toward a degenerate origin; absolute
    // tolerance must stay out of the way of the relative one.
    c.atol = std::min(c.atol, 1e-30);
    c.h_max = std::min(c.h_max, std::max(0.25, eta / 20.0));
    return c;
}

IntegratorControl forward_control(const ShootControl& ctrl) {
    IntegratorControl c = ctrl.ode;
    c.atol = std::min(c.atol, 1e-280);
    // The phase time to the tail cutoff grows like exp((m-1) a Z); steps must
    // be able to grow without bound while the error control stays relative.
    c.h_max = std::max(c.h_max, 1e280);
    return c;
}

int worker_count(const ShootControl& ctrl, std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    int w = ctrl.workers > 0 ? ctrl.workers : static_cast<int>(hw ? hw : 2);
    return std::max(1, std::min<int>(w, static_cast<int>(jobs)));
}

} // namespace

// --- backward ----------------------------------------------------------------

ProfileState interface_launch_state(const Params& p, double eta, double offset_rel) {
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::invalid_argument("interface_launch_state: eta > 0 required");
    const auto [alpha, beta] = exponents(p);
    const double m = p.m;
    const double w0 = -(m - 1.0) * eta / (m * p.sigma);
    const double v2 = ((m - 1.0) * (m - 1.0) * (alpha - std::pow(eta, p.sigma)) -
                       (m - 1.0) * beta) /
                      (2.0 * m * m);
    const double d = -offset_rel * eta;
    return {eta + d, w0 * d + v2 * d * d, w0 + 2.0 * v2 * d};
}

BackwardOutcome shoot_from_interface(const Params& p, double eta, const ShootControl& ctrl) {
    const auto [alpha, beta] = exponents(p);
    (void)beta;
    const double gamma = std::pow(eta, p.sigma) / alpha;
    LocalSeries series{SeriesAnchor::InterfaceP1, p, gamma};
    const ProfileState start = interface_launch_state(p, eta, ctrl.series_offset);

    IntegratorControl ic = backward_control(ctrl, eta);
    const EventSpec watch[] = {EventSpec::v_hits_zero()};
    auto traj = integrate_profile(p, start, Direction::Backward, ic, watch);
    traj.anchor = series;

    BackwardOutcome out{std::move(traj)};
    const auto& tr = out.trajectory;

    // Closest phase-space pass to the degenerate origin points, over the
    // origin-side half of the run.
    const auto p2 = critical_point(p, PointTag::P2);
    const double scale = p2.coords.norm();
    double d2 = std::numeric_limits<double>::infinity();
    double d0 = std::numeric_limits<double>::infinity();
    double xi2 = 0.0, xi0g = 0.0;
    for (const auto& s : tr.samples) {
        if (s.t >= 0.5 * eta || !(s.y[0] > 0.0) || !(s.t > 0.0)) continue;
        const PhaseState ph = profile_to_phase(p, {s.t, s.y[0], s.y[1]});
        const double dd2 = (ph.vec() - p2.coords).norm();
        const double dd0 = ph.vec().norm();
        if (dd2 < d2) {
            d2 = dd2;
            xi2 = s.t;
        }
        if (dd0 < d0) {
            d0 = dd0;
            xi0g = s.t;
        }
    }
    const double graze_radius = 0.05 * scale;
    if (d2 <= graze_radius) {
        out.endpoint = OriginEndpoint::EntersP2;
        out.graze_distance = d2;
        out.xi_graze = xi2;
    } else if (d0 <= graze_radius) {
        out.endpoint = OriginEndpoint::EntersP0;
        out.graze_distance = d0;
        out.xi_graze = xi0g;
    }

    if (tr.termination.kind == EventKind::VDiverges) {
        out.kind = BackwardKind::Asymptote;
        return out;
    }
    if (out.endpoint == OriginEndpoint::EntersP2 || out.endpoint == OriginEndpoint::EntersP0) {
        // Grazing a degenerate origin point certifies a good candidate with
        // f(0) = 0 at the pass resolution, whatever happens below the pass.
        out.kind = BackwardKind::GoodCandidate;
        out.origin_value = 0.0;
        out.origin_slope = 0.0;
        return out;
    }
    if (tr.termination.kind == EventKind::VHitsZero) {
        out.kind = BackwardKind::SignChange;
        out.theta = tr.termination.location;
        return out;
    }
    if (tr.termination.kind != EventKind::ReachedXiMin) {
        out.kind = BackwardKind::Inconclusive;
        return out;
    }

    // Extrapolate f, f' and (f^m)' to xi = 0 through the dense output.
    const double win_lo = ic.xi_min;
    const double win_hi = std::min(20.0 * ic.xi_min, 0.2 * eta);
    std::vector<double> xs, fs, fps, fms;
    for (int i = 0; i < 32; ++i) {
        const double xi = win_lo * std::pow(win_hi / win_lo, i / 31.0);
        if (!tr.contains_xi(xi)) continue;
        ProfileState s = tr.state_at(xi);
        if (!(s.v > 0.0)) continue;
        xs.push_back(s.xi);
        fs.push_back(s.f(p));
        fps.push_back(s.fprime(p));
        fms.push_back(s.fm_prime(p));
    }
    if (xs.size() < 4) {
        out.kind = BackwardKind::Inconclusive;
        return out;
    }
    const double A = linear_fit(xs, fs).first;
    const double slope = linear_fit(xs, fps).first;
    const double fms0 = linear_fit(xs, fms).first;
    out.origin_value = A;
    out.origin_slope = slope;
    out.endpoint = OriginEndpoint::PositiveValue;

    if (A > ctrl.a_floor) {
        const double tol = ctrl.slope_tol * std::max(1.0, A);
        if (slope < -tol)
            out.kind = BackwardKind::PositiveAtZero;
        else if (std::abs(slope) <= tol)
            out.kind = BackwardKind::GoodCandidate;
        else
            out.kind = BackwardKind::Inconclusive;
    } else {
        // f(0) = 0; good means the flux (f^m)' vanishes there as well.
        out.endpoint = OriginEndpoint::Unknown;
        if (std::abs(fms0) <= ctrl.fmslope_tol) {
            out.kind = BackwardKind::GoodCandidate;
            out.origin_value = std::max(A, 0.0);
        } else {
            out.kind = BackwardKind::Inconclusive;
        }
    }
    return out;
}

namespace {

/// Membership in the set A of the existence proof: the profile reaches the
/// origin positive and decreasing.  Profiles just past the critical point
/// cross zero below the integration cutoff, so the sign of w at the cutoff
/// is the reliable discriminator, not the resolved crossing itself.
bool a_side(const BackwardOutcome& o) {
    if (o.trajectory.termination.kind != EventKind::ReachedXiMin) return false;
    const auto end = o.trajectory.back();
    return end.v > 0.0 && end.w < 0.0;
}

} // namespace

std::pair<double, double> scan_interface_bracket(const Params& p, const ShootControl& ctrl) {
    const auto [alpha, beta] = exponents(p);
    (void)beta;
    double lo = 0.5 * std::pow(alpha, 1.0 / p.sigma);
    for (int i = 0; i < 30; ++i) {
        if (a_side(shoot_from_interface(p, lo, ctrl))) break;
        lo *= 0.5;
    }
    double hi = lo;
    for (int i = 0; i < 60; ++i) {
        hi *= 2.0;
        if (!a_side(shoot_from_interface(p, hi, ctrl))) return {lo, hi};
        lo = hi;
    }
    throw InvalidBracket("scan_interface_bracket: no upper endpoint found");
}

GoodProfileResult find_good_profile(const Params& p, std::pair<double, double> bracket,
                                    const ShootControl& ctrl) {
    auto [lo, hi] = bracket;
    if (!(0.0 < lo && lo < hi))
        throw InvalidBracket("find_good_profile: need 0 < eta_lo < eta_hi");

    auto lo_out = shoot_from_interface(p, lo, ctrl);
    auto hi_out = shoot_from_interface(p, hi, ctrl);
    const BackwardKind lo_kind = lo_out.kind;
    const BackwardKind hi_kind = hi_out.kind;
    if (lo_kind == BackwardKind::GoodCandidate) {
        GoodProfileResult res{std::move(lo_out)};
        res.eta_star = lo;
        res.eta_lo = res.eta_hi = lo;
        res.lo_kind = lo_kind;
        res.hi_kind = hi_kind;
        return res;
    }
    if (!a_side(lo_out))
        throw InvalidBracket("find_good_profile: eta_lo must reach the origin positive and decreasing");
    if (a_side(hi_out))
        throw InvalidBracket("find_good_profile: eta_hi must leave that set (sign change)");

    // Bisect on membership in the positive-decreasing set; the good
    // classification itself only has to hold at the converged midpoint.
    while (hi - lo > ctrl.bisect_rel * hi) {
        const double mid = 0.5 * (lo + hi);
        if (a_side(shoot_from_interface(p, mid, ctrl)))
            lo = mid;
        else
            hi = mid;
    }
    GoodProfileResult res{shoot_from_interface(p, 0.5 * (lo + hi), ctrl)};
    if (res.outcome.kind == BackwardKind::Inconclusive) {
        // A midpoint a hair above the critical point can graze zero without
        // resolving it; the certified lower endpoint is regular.
        res.outcome = shoot_from_interface(p, lo, ctrl);
    }
    res.eta_lo = lo;
    res.eta_hi = hi;
    res.eta_star = 0.5 * (lo + hi);
    res.lo_kind = lo_kind;
    res.hi_kind = hi_kind;
    return res;
}

// --- forward -----------------------------------------------------------------

namespace {

/// Launch state of the origin orbit with phase slope k = Z/X, second order in
/// the launch amplitude (center-manifold correction).
PhaseState origin_launch(const Params& p, double k, double scale) {
    const auto [alpha, beta] = exponents(p);
    const double m = p.m, s = p.sigma;
    const double a_cm = -(m * s + m + 1.0) * (s + 2.0) / ((m - 1.0) * (m - 1.0));
    const double X0 = scale / std::max(1.0, k);
    const double Z0 = k * X0 - (s + 2.0) / s * k * (a_cm - k) * X0 * X0;
    const double Y0 = alpha / beta * (X0 + (a_cm - k) * X0 * X0);
    return {X0, Y0, Z0};
}

struct TailWindow {
    double lnK = 0.0;
    double drift = 0.0;
    bool ok = false;
};

TailWindow tail_window_fit(const Params& p, const PhaseTrajectory& traj, double z_lo, double z_hi) {
    const auto [alpha, beta] = exponents(p);
    (void)beta;
    const double a = (p.sigma + 2.0) / (p.m - 1.0);
    TailWindow tw;
    double prev = 0.0;
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const auto& y = traj.samples[i].y;
        if (y[2] < z_lo || y[2] > z_hi || !(y[0] > 0.0)) continue;
        const double xi = std::pow(alpha * y[2], 1.0 / p.sigma);
        const double lnf = (std::log(y[0]) + std::log(alpha / p.m) + 2.0 * std::log(xi)) / (p.m - 1.0);
        const double r = lnf + std::pow(xi, p.sigma) - a * std::log(xi);
        if (n > 0) tw.drift += std::abs(r - prev);
        prev = r;
        sum += r;
        ++n;
    }
    if (n >= 8) {
        tw.lnK = sum / n;
        tw.ok = true;
    }
    return tw;
}

} // namespace

namespace {

/// Near-zero root of Y^2 + (b/a + X) Y - X(1 - z) = 0, evaluated without
/// cancellation.  This is Y on the attracting slow manifold that carries
/// both the family leaving the origin and the approach to the tail point;
/// the transverse mode contracts at the O(1) rate b/a while the drift along
/// the manifold is O(X), which makes the full system stiff there.
double slaved_Y(double ba, double X, double z) {
    const double b = ba + X;
    const double q = X * (1.0 - z);
    const double disc = b * b + 4.0 * q;
    if (disc <= 0.0) return -0.5 * b;
    return 2.0 * q / (b + std::sqrt(disc));
}

enum class LegEnd { Handoff, Commit, TailCut, P1Line, YFloor, Abort, Diverged, Budget };

/// Follows an orbit forward, alternating between the full 3D flow in the
/// interior and the 2D slaved flow (X, Z) near the {X = 0} plane.
ForwardOutcome run_forward_orbit(const Params& p, const ShootControl& ctrl,
                                 bool slaved_first, const PhaseState& s0) {
    const auto [alpha, beta] = exponents(p);
    const double ba = beta / alpha;
    const double z_cut = std::min(ctrl.z_cut, 560.0 / ((p.m - 1.0) * alpha));
    const double y_cut = -ctrl.y_cut_factor * (1.0 + ba);
    const double x_free = 1e-2;              // hand over to the full flow above this X
    const double commit_r = ctrl.tail_commit; // and back once the funnel is this tight
    // Downward crossings of {Y=0} happen at Z > 1 only, so a tiny funnel past
    // Z = 1 cannot belong to an orbit still heading for an interface.
    const double commit_z = 1.02;
    const IntegratorControl ic = forward_control(ctrl);

    PhaseTrajectory traj{p, {}, {}};
    double eta = 0.0, X = s0.X, Y = s0.Y, Z = s0.Z;
    bool slaved = slaved_first;
    LegEnd end = LegEnd::Budget;

    for (int leg = 0; leg < 4; ++leg) {
        const std::size_t before = traj.samples.size();
        if (slaved) {
            // state (ln X, Z): the drift X' ~ -c X^2 would underflow long
            // before X itself does, log form keeps every rate representable
            auto rhs = [&p, ba](double, const rk::Vec<2>& y) -> rk::Vec<2> {
                const double Xl = std::exp(y[0]);
                const double Ys = slaved_Y(ba, Xl, y[1]);
                return {(p.m - 1.0) * Ys - 2.0 * Xl, p.sigma * y[1] * Xl};
            };
            enum { EvFree = 0, EvGuard, EvTail, EvCount };
            const double lfree = std::log(x_free);
            auto eg = [&](int i, double, const rk::Vec<2>& y) -> double {
                switch (i) {
                case EvFree:
                    return lfree - y[0];
                case EvGuard:
                    return 0.1 * (1.0 + ba) - std::abs(slaved_Y(ba, std::exp(y[0]), y[1]));
                default:
                    return z_cut - y[1];
                }
            };
            std::vector<Sample<2>> piece;
            auto stop = rk::drive<2>(rhs, eta, {std::log(X), Z}, 1.0, std::nullopt, ic,
                                     EvCount, eg, piece);
            for (std::size_t i = before ? 1 : 0; i < piece.size(); ++i) {
                const double Xl = std::exp(piece[i].y[0]);
                const PhaseState s{Xl, slaved_Y(ba, Xl, piece[i].y[1]), piece[i].y[1]};
                traj.samples.push_back({piece[i].t, s.vec(), phase_rhs(p, s)});
            }
            eta = piece.back().t;
            X = std::exp(piece.back().y[0]);
            Z = piece.back().y[1];
            Y = slaved_Y(ba, X, Z);
            if (stop.kind == rk::StopKind::Event && stop.event == EvFree) {
                slaved = false;
                continue;
            }
            end = stop.kind == rk::StopKind::Event
                      ? (stop.event == EvTail ? LegEnd::TailCut : LegEnd::Abort)
                  : stop.kind == rk::StopKind::Diverged ? LegEnd::Diverged
                                                        : LegEnd::Budget;
            break;
        }

        // full 3D leg
        enum { EvP1 = 0, EvFloor, EvZ, EvCommit, EvCount3 };
        auto rhs3 = [&p](double, const rk::Vec<3>& y) {
            return phase_rhs(p, {y[0], y[1], y[2]});
        };
        auto eg3 = [&](int i, double, const rk::Vec<3>& y) -> double {
            switch (i) {
            case EvP1:
                return std::hypot(y[0], y[1] + ba) - ctrl.p1_radius;
            case EvFloor:
                return y[1] - y_cut;
            case EvZ:
                return z_cut - y[2];
            default:
                if (y[2] <= commit_z) return 1.0;
                return std::max({y[0], std::abs(y[1]), y[0] * y[2]}) - commit_r;
            }
        };
        std::vector<Sample<3>> piece;
        auto stop = rk::drive<3>(rhs3, eta, {X, Y, Z}, 1.0, std::nullopt, ic, EvCount3, eg3,
                                 piece);
        for (std::size_t i = before ? 1 : 0; i < piece.size(); ++i)
            traj.samples.push_back(piece[i]);
        eta = piece.back().t;
        X = piece.back().y[0];
        Y = piece.back().y[1];
        Z = piece.back().y[2];
        if (stop.kind == rk::StopKind::Event && stop.event == EvCommit) {
            slaved = true;
            continue;
        }
        end = stop.kind == rk::StopKind::Event
                  ? (stop.event == EvP1    ? LegEnd::P1Line
                     : stop.event == EvFloor ? LegEnd::YFloor
                                             : LegEnd::TailCut)
              : stop.kind == rk::StopKind::Diverged ? LegEnd::Diverged
                                                    : LegEnd::Budget;
        break;
    }

    switch (end) {
    case LegEnd::P1Line:
        traj.termination = {EventKind::StateNearPoint, eta, -1};
        break;
    case LegEnd::YFloor:
        traj.termination = {EventKind::YCrossesValue, eta, -1};
        break;
    case LegEnd::TailCut:
        traj.termination = {EventKind::ZReaches, eta, -1};
        break;
    case LegEnd::Diverged:
        traj.termination = {EventKind::VDiverges, eta, -1};
        break;
    default:
        traj.termination = {EventKind::StepBudgetExhausted, eta, -1};
        break;
    }

    const PhaseState endstate = traj.back();
    ForwardOutcome out{std::move(traj)};
    if (endstate.Z > 0.0) {
        const ProfileState ps = phase_to_profile(p, endstate);
        out.fm_prime_end = ps.fm_prime(p);
    }

    if (end == LegEnd::P1Line) {
        out.kind = ForwardKind::Interface;
        // The stop fires a proximity radius short of the line; the remaining
        // approach rides the transverse eigenvector, whose run in Z per unit
        // X is a s g / ((m-1) b).
        out.gamma = endstate.Z * (1.0 + endstate.X * alpha * p.sigma / ((p.m - 1.0) * beta));
        out.xi0 = std::pow(alpha * out.gamma, 1.0 / p.sigma);
        return out;
    }
    if (end == LegEnd::YFloor) {
        out.kind = ForwardKind::TransversalZero;
        out.xi0 = std::pow(alpha * endstate.Z, 1.0 / p.sigma);
        return out;
    }
    if (end == LegEnd::TailCut) {
        const auto tw = tail_window_fit(p, out.trajectory, z_cut / 5.0, z_cut);
        if (tw.ok && tw.drift <= ctrl.tail_tol) {
            out.kind = ForwardKind::Tail;
            out.lnK = tw.lnK;
            out.tail_drift = tw.drift;
            return out;
        }
    }
    out.kind = ForwardKind::Inconclusive;
    return out;
}

} // namespace

ForwardOutcome classify_phase_orbit(const Params& p, const PhaseState& start,
                                    const ShootControl& ctrl) {
    return run_forward_orbit(p, ctrl, false, start);
}

ForwardOutcome shoot_from_origin(const Params& p, double c, const ShootControl& ctrl) {
    if (!(c > 0.0)) throw std::invalid_argument("shoot_from_origin: c > 0 required");
    const double k = origin_coefficient_to_k(p, c);
    const PhaseState launch = origin_launch(p, k, ctrl.launch_scale);
    ForwardOutcome out = run_forward_orbit(p, ctrl, true, launch);
    out.c = c;
    return out;
}

KClassification classify_c_intervals(const Params& p, std::span<const double> c_grid,
                                     const ShootControl& ctrl) {
    if (c_grid.empty()) throw std::invalid_argument("classify_c_intervals: empty grid");
    for (std::size_t i = 0; i < c_grid.size(); ++i) {
        if (!(c_grid[i] > 0.0) || (i > 0 && !(c_grid[i] > c_grid[i - 1])))
            throw std::invalid_argument("classify_c_intervals: grid must be positive, strictly increasing");
    }

    KClassification out;
    out.entries.resize(c_grid.size());

    const int workers = worker_count(ctrl, c_grid.size());
    std::atomic<std::size_t> next{0};
    auto run = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= c_grid.size()) return;
            auto fo = shoot_from_origin(p, c_grid[i], ctrl);
            out.entries[i] = {c_grid[i], fo.kind, fo.xi0, fo.gamma, fo.lnK, fo.tail_drift};
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        if (out.entries[i].kind == ForwardKind::Inconclusive) ++out.inconclusive_count;
        if (out.intervals.empty() || out.intervals.back().kind != out.entries[i].kind)
            out.intervals.push_back({out.entries[i].kind, i, i});
        else
            out.intervals.back().hi = i;
        if (i > 0) {
            const auto a = out.entries[i - 1].kind, b = out.entries[i].kind;
            if (a == ForwardKind::Tail && b == ForwardKind::TransversalZero)
                out.candidate_brackets.emplace_back(out.entries[i - 1].c, out.entries[i].c);
            else if (a == ForwardKind::TransversalZero && b == ForwardKind::Tail)
                out.candidate_brackets.emplace_back(out.entries[i].c, out.entries[i - 1].c);
        }
    }
    return out;
}

InterfaceCResult find_interface_c(const Params& p, std::pair<double, double> bracket,
                                  const ShootControl& ctrl) {
    double c_tail = bracket.first, c_cross = bracket.second;
    auto k_tail = shoot_from_origin(p, c_tail, ctrl).kind;
    auto k_cross = shoot_from_origin(p, c_cross, ctrl).kind;
    if (k_tail != ForwardKind::Tail || k_cross != ForwardKind::TransversalZero)
        throw InvalidBracket("find_interface_c: endpoints must classify Tail / TransversalZero");

    auto width = [&]() {
        return std::abs(c_cross - c_tail) / std::max(std::abs(c_tail), std::abs(c_cross));
    };
    while (width() > ctrl.bisect_rel) {
        const double mid = 0.5 * (c_tail + c_cross);
        auto last = shoot_from_origin(p, mid, ctrl);
        if (last.kind == ForwardKind::Interface) {
            InterfaceCResult res{std::move(last)};
            res.c_star = mid;
            res.c_lo = std::min(c_tail, c_cross);
            res.c_hi = std::max(c_tail, c_cross);
            return res;
        }
        if (last.kind == ForwardKind::Tail)
            c_tail = mid;
        else if (last.kind == ForwardKind::TransversalZero)
            c_cross = mid;
        else
            break; // inconclusive midpoint: report the certified bracket
    }
    const double c_star = 0.5 * (c_tail + c_cross);
    InterfaceCResult res{shoot_from_origin(p, c_star, ctrl)};
    res.c_star = c_star;
    res.c_lo = std::min(c_tail, c_cross);
    res.c_hi = std::max(c_tail, c_cross);
    return res;
}

} // namespace blowup
