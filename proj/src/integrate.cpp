#include "blowup/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

template <int N>
Eigen::Matrix<double, N, 1> hermite_between(const Sample<N>& a, const Sample<N>& b, double t) {
    const double h = b.t - a.t, u = (t - a.t) / h, u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * a.y + ((u3 - 2 * u2 + u) * h) * a.dy +
           (-2 * u3 + 3 * u2) * b.y + ((u3 - u2) * h) * b.dy;
}

/// Interpolates within a monotone (increasing or decreasing) sample list.
template <int N>
Eigen::Matrix<double, N, 1> interp_samples(const std::vector<Sample<N>>& s, double t) {
    if (s.empty()) throw std::out_of_range("trajectory: empty");
    const bool inc = s.back().t >= s.front().t;
    const double lo = inc ? s.front().t : s.back().t;
    const double hi = inc ? s.back().t : s.front().t;
    if (t < lo - 1e-12 || t > hi + 1e-12)
        throw std::out_of_range("trajectory: t outside sampled range");
    t = std::clamp(t, lo, hi);
    auto cmp = [inc](const Sample<N>& a, double tt) { return inc ? a.t < tt : a.t > tt; };
    auto it = std::lower_bound(s.begin(), s.end(), t, cmp);
    if (it == s.begin()) return s.front().y;
    if (it == s.end()) return s.back().y;
    return hermite_between(*(it - 1), *it, t);
}

} // namespace

// --- ProfileTrajectory -------------------------------------------------------

ProfileState ProfileTrajectory::front() const {
    const auto& a = samples.front();
    return {a.t, a.y[0], a.y[1]};
}

ProfileState ProfileTrajectory::back() const {
    const auto& a = samples.back();
    return {a.t, a.y[0], a.y[1]};
}

double ProfileTrajectory::xi_lo() const {
    return std::min(samples.front().t, samples.back().t);
}

double ProfileTrajectory::xi_hi() const {
    return std::max(samples.front().t, samples.back().t);
}

bool ProfileTrajectory::contains_xi(double xi) const {
    return !samples.empty() && xi >= xi_lo() - 1e-12 && xi <= xi_hi() + 1e-12;
}

ProfileState ProfileTrajectory::state_at(double xi) const {
    auto y = interp_samples<2>(samples, xi);
    return {xi, y[0], y[1]};
}

// --- PhaseTrajectory ---------------------------------------------------------

PhaseState PhaseTrajectory::front() const {
    const auto& a = samples.front();
    return {a.y[0], a.y[1], a.y[2]};
}

PhaseState PhaseTrajectory::back() const {
    const auto& a = samples.back();
    return {a.y[0], a.y[1], a.y[2]};
}

PhaseState PhaseTrajectory::state_at(double eta) const {
    auto y = interp_samples<3>(samples, eta);
    return {y[0], y[1], y[2]};
}

double PhaseTrajectory::xi_of(int i) const {
    const auto [alpha, beta] = exponents(params);
    (void)beta;
    return std::pow(alpha * samples[static_cast<std::size_t>(i)].y[2], 1.0 / params.sigma);
}

ProfileState PhaseTrajectory::profile_of(int i) const {
    const auto& a = samples[static_cast<std::size_t>(i)];
    return phase_to_profile(params, {a.y[0], a.y[1], a.y[2]});
}

ProfileState PhaseTrajectory::profile_at_xi(double xi) const {
    const auto [alpha, beta] = exponents(params);
    (void)beta;
    const double zt = std::pow(xi, params.sigma) / alpha;
    auto it = std::lower_bound(samples.begin(), samples.end(), zt,
                               [](const Sample<3>& s, double z) { return s.y[2] < z; });
    if (it == samples.end() || (it == samples.begin() && it->y[2] > zt * (1 + 1e-12)))
        throw std::out_of_range("profile_at_xi: xi outside the sampled range");
    if (it == samples.begin() || it->y[2] == zt)
        return phase_to_profile(params, {it->y[0], it->y[1], it->y[2]});
    const auto& a = *(it - 1);
    const auto& b = *it;
    double ta = a.t, tb = b.t;
    for (int k = 0; k < 200 && tb - ta > 1e-15 * std::max(1.0, std::abs(tb)); ++k) {
        const double tm = 0.5 * (ta + tb);
        auto y = hermite_between(a, b, tm);
        (y[2] < zt ? ta : tb) = tm;
    }
    auto y = hermite_between(a, b, 0.5 * (ta + tb));
    return phase_to_profile(params, {y[0], y[1], zt});
}

// --- event plumbing ----------------------------------------------------------

namespace {

/// Positive-to-nonpositive trigger functions for the watch list.
double profile_event_value(const Params& p, const EventSpec& e, double xi,
                           const rk::Vec<2>& y) {
    const auto [alpha, beta] = exponents(p);
    switch (e.kind) {
    case EventKind::VHitsZero:
        return y[0] - e.value * std::abs(y[1]);
    case EventKind::YCrossesValue: {
        const double Y = p.m / (alpha * (p.m - 1.0)) * y[1] / xi;
        return Y - e.value;
    }
    case EventKind::ZReaches:
        return e.value - std::pow(xi, p.sigma) / alpha;
    default:
        return 1.0; // not applicable to profile runs
    }
}

double phase_event_value(const Params& p, const EventSpec& e, double /*eta*/,
                         const rk::Vec<3>& y) {
    const auto [alpha, beta] = exponents(p);
    switch (e.kind) {
    case EventKind::VHitsZero:
        return y[0]; // X and f vanish together at finite xi
    case EventKind::YCrossesValue:
        return y[1] - e.value;
    case EventKind::ZReaches:
        return e.value - y[2];
    case EventKind::StateNearPoint: {
        if (e.p1_line)
            return std::hypot(y[0], y[1] + beta / alpha) - e.radius;
        return (y - e.point->coords).norm() - e.radius;
    }
    default:
        return 1.0;
    }
}

Event make_event(const rk::Stop<2>& stop, std::span<const EventSpec> watch, Direction dir) {
    Event ev;
    ev.location = stop.t;
    switch (stop.kind) {
    case rk::StopKind::Event:
        ev.kind = watch[static_cast<std::size_t>(stop.event)].kind;
        ev.spec_index = stop.event;
        break;
    case rk::StopKind::Endpoint:
        ev.kind = dir == Direction::Backward ? EventKind::ReachedXiMin : EventKind::ZReaches;
        break;
    case rk::StopKind::Diverged:
        ev.kind = EventKind::VDiverges;
        break;
    case rk::StopKind::Budget:
        ev.kind = EventKind::StepBudgetExhausted;
        break;
    }
    return ev;
}

Event make_event3(const rk::Stop<3>& stop, std::span<const EventSpec> watch) {
    Event ev;
    ev.location = stop.t;
    switch (stop.kind) {
    case rk::StopKind::Event:
        ev.kind = watch[static_cast<std::size_t>(stop.event)].kind;
        ev.spec_index = stop.event;
        break;
    case rk::StopKind::Diverged:
        ev.kind = EventKind::VDiverges;
        break;
    default:
        ev.kind = EventKind::StepBudgetExhausted;
        break;
    }
    return ev;
}

} // namespace

ProfileTrajectory integrate_profile(const Params& p, const ProfileState& start,
                                    Direction direction, const IntegratorControl& ctrl,
                                    std::span<const EventSpec> watch) {
    if (!(start.v > 0.0)) throw DegenerateState("integrate_profile: start.v > 0 required");
    if (direction == Direction::Backward && !(start.xi > ctrl.xi_min))
        throw std::invalid_argument("integrate_profile: backward start must sit above xi_min");

    const double dir = direction == Direction::Forward ? 1.0 : -1.0;
    std::optional<double> t_end;
    if (direction == Direction::Backward) t_end = ctrl.xi_min;

    // Steps that probe past v = 0 are rejected through the non-finite path;
    // the zero itself is reported by the VHitsZero watch before that.
    const auto [alpha, beta] = exponents(p);
    const double m = p.m, sg = p.sigma, al = alpha, be = beta;
    auto rhs = [m, sg, al, be](double xi, const rk::Vec<2>& y) -> rk::Vec<2> {
        if (!(y[0] > 0.0))
            return rk::Vec<2>::Constant(std::numeric_limits<double>::quiet_NaN());
        const double dw = (m - 1.0) / m * (al - std::pow(xi, sg)) -
                          be * xi * y[1] / (m * y[0]) -
                          y[1] * y[1] / ((m - 1.0) * y[0]);
        return {y[1], dw};
    };
    auto eg = [&](int i, double t, const rk::Vec<2>& y) {
        return profile_event_value(p, watch[static_cast<std::size_t>(i)], t, y);
    };

    ProfileTrajectory traj{p, {}, {}, 0.0, std::nullopt};
    auto stop = rk::drive<2>(rhs, start.xi, {start.v, start.w}, dir, t_end, ctrl,
                             static_cast<int>(watch.size()), eg, traj.samples);
    traj.termination = make_event(stop, watch, direction);
    traj.terminal_fm_prime = traj.back().fm_prime(p);
    return traj;
}

PhaseTrajectory integrate_phase(const Params& p, const PhaseState& start,
                                const IntegratorControl& ctrl,
                                std::span<const EventSpec> watch) {
    auto rhs = [&p](double, const rk::Vec<3>& y) {
        return phase_rhs(p, {y[0], y[1], y[2]});
    };
    auto eg = [&](int i, double t, const rk::Vec<3>& y) {
        return phase_event_value(p, watch[static_cast<std::size_t>(i)], t, y);
    };

    PhaseTrajectory traj{p, {}, {}};
    auto stop = rk::drive<3>(rhs, 0.0, {start.X, start.Y, start.Z}, 1.0, std::nullopt,
                             ctrl, static_cast<int>(watch.size()), eg, traj.samples);
    traj.termination = make_event3(stop, watch);
    return traj;
}

double selfsimilar_eval(const ProfileTrajectory& traj, double T, double x, double t) {
    if (!(t < T)) throw std::invalid_argument("selfsimilar_eval: t < T required");
    const auto [alpha, beta] = exponents(traj.params);
    const double xi = std::abs(x) * std::pow(T - t, beta);
    const double amp = std::pow(T - t, -alpha);

    if (traj.contains_xi(xi)) {
        double f = traj.state_at(xi).f(traj.params);
        return amp * f;
    }
    if (xi > traj.xi_hi() && traj.termination.kind == EventKind::VHitsZero)
        return 0.0; // compactly supported beyond the zero
    if (traj.anchor) {
        const bool origin_side = traj.anchor->anchor != SeriesAnchor::InterfaceP1;
        const bool in_reach = origin_side ? xi < traj.xi_lo() : xi > traj.xi_hi();
        if (in_reach) {
            try {
                const auto sv = local_series_eval(*traj.anchor, xi);
                return amp * (sv.v > 0.0 ? std::pow(sv.v, 1.0 / (traj.params.m - 1.0)) : 0.0);
            } catch (const OutsideSupport&) {
                return 0.0;
            }
        }
    }
    throw std::out_of_range("selfsimilar_eval: xi outside the sampled range");
}

} // namespace blowup
