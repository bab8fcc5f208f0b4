#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blowup/shooting.hpp"

using namespace blowup;

namespace {

/// Backward run off the interface at eta; offsets relative, quadratic launch.
ProfileTrajectory backward_run(const Params& p, double eta, double offset,
                               const IntegratorControl& base) {
    const auto e = exponents(p);
    LocalSeries series{SeriesAnchor::InterfaceP1, p, std::pow(eta, p.sigma) / e.alpha};
    IntegratorControl ctrl = base;
    ctrl.atol = 1e-30;
    const EventSpec watch[] = {EventSpec::v_hits_zero()};
    auto tr = integrate_profile(p, interface_launch_state(p, eta, offset),
                                Direction::Backward, ctrl, watch);
    tr.anchor = series;
    return tr;
}

ProfileTrajectory explicit_backward(double m, double offset, const IntegratorControl& base) {
    return backward_run({m, sigma_star(m)}, explicit_support_edge(m), offset, base);
}

} // namespace

TEST_CASE("backward run recovers the closed-form pressure") {
    const double m = 3.0;
    IntegratorControl ctrl;
    ctrl.rtol = 1e-12;
    auto tr = explicit_backward(m, 3e-6, ctrl);
    const double xi1 = explicit_support_edge(m);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double xi = 0.1 + (0.9 * xi1 - 0.1) * i / 200.0;
        if (!tr.contains_xi(xi)) continue;
        const double v_ref = explicit_pressure(m, xi);
        const double v_num = tr.state_at(xi).v;
        worst = std::max(worst, std::abs(v_num - v_ref) / v_ref);
    }
    CHECK(worst <= 1e-6);
    CHECK(tr.contains_xi(0.1));
}

TEST_CASE("halving the series offset leaves the terminal state put") {
    // at a regular (non-critical) interface point the construction is stable
    Params p{3, 2};
    IntegratorControl ctrl;
    auto a = backward_run(p, 0.8, 3e-6, ctrl);
    auto b = backward_run(p, 0.8, 1.5e-6, ctrl);
    REQUIRE(a.termination.kind == EventKind::ReachedXiMin);
    REQUIRE(b.termination.kind == EventKind::ReachedXiMin);
    const double fa = a.back().f(p);
    const double fb = b.back().f(p);
    CHECK(std::abs(fa - fb) <= 1e-6 * std::max(1.0, std::abs(fb)));
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double xi = 0.01 + (0.79 - 0.01) * i / 100.0;
        worst = std::max(worst,
                         std::abs(a.state_at(xi).v - b.state_at(xi).v) /
                             std::max(1e-30, b.state_at(xi).v));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("forward run from the origin family terminates with a watched event") {
    Params p{3, 2};
    LocalSeries s{SeriesAnchor::OriginP0, p, 1.0};
    const auto sv = local_series_eval(s, 1e-3);
    IntegratorControl ctrl;
    ctrl.atol = 1e-30;
    const EventSpec watch[] = {EventSpec::v_hits_zero(), EventSpec::z_reaches(2.0)};
    auto tr = integrate_profile(p, {1e-3, sv.v, sv.w}, Direction::Forward, ctrl, watch);
    const bool watched = tr.termination.kind == EventKind::VHitsZero ||
                         tr.termination.kind == EventKind::ZReaches;
    CHECK(watched);
    CHECK(tr.samples.size() > 10);
}

TEST_CASE("zero-width runs return a single sample") {
    Params p{3, 2};
    IntegratorControl ctrl;
    // backward start exactly at the cutoff boundary is rejected...
    CHECK_THROWS_AS(
        integrate_profile(p, {ctrl.xi_min, 0.1, 0.0}, Direction::Backward, ctrl, {}),
        std::invalid_argument);
    // ...and a forward start sitting on a watched threshold stops immediately.
    const EventSpec watch[] = {EventSpec::z_reaches(std::pow(0.5, p.sigma) / 1.0)};
    auto tr = integrate_profile(p, {0.5, 0.3, 0.0}, Direction::Forward, ctrl, watch);
    CHECK(tr.samples.size() == 1);
    CHECK(tr.termination.kind == EventKind::ZReaches);
}

TEST_CASE("forward integration inverts a backward run") {
    Params p{3, 2};
    IntegratorControl ctrl;
    ctrl.xi_min = 0.3;
    auto back = backward_run(p, 0.8, 3e-6, ctrl);
    REQUIRE(back.termination.kind == EventKind::ReachedXiMin);
    const auto end = back.back();
    const auto start = back.front();
    const auto e = exponents(p);
    IntegratorControl fwd = ctrl;
    fwd.atol = 1e-30;
    const EventSpec watch[] = {EventSpec::z_reaches(std::pow(start.xi, p.sigma) / e.alpha)};
    auto forth = integrate_profile(p, end, Direction::Forward, fwd, watch);
    CHECK(forth.termination.kind == EventKind::ZReaches);
    const auto r = forth.back();
    CHECK(std::abs(r.v - start.v) <= 100.0 * ctrl.rtol * std::max(std::abs(start.v), 1.0));
    CHECK(std::abs(r.w - start.w) <= 100.0 * ctrl.rtol * std::max(std::abs(start.w), 1.0));
}

TEST_CASE("terminal event location converges as tolerances tighten") {
    Params p{3, 2};
    auto run = [&](double rtol, double atol) {
        LocalSeries s{SeriesAnchor::InterfaceP1, p, std::pow(10.0, p.sigma)};
        const double xi0 = interface_location(p, std::pow(10.0, p.sigma));
        (void)xi0;
        const double eta = 10.0;
        LocalSeries ser{SeriesAnchor::InterfaceP1, p, std::pow(eta, p.sigma) / 1.0};
        const double xs = eta * (1.0 - 1e-4);
        const auto sv = local_series_eval(ser, xs);
        IntegratorControl ctrl;
        ctrl.rtol = rtol;
        ctrl.atol = atol;
        const EventSpec watch[] = {EventSpec::v_hits_zero()};
        auto tr = integrate_profile(p, {xs, sv.v, sv.w}, Direction::Backward, ctrl, watch);
        REQUIRE(tr.termination.kind == EventKind::VHitsZero);
        return tr.termination.location;
    };
    const double t1 = run(1e-8, 1e-20);
    const double t2 = run(5e-9, 1e-20);
    CHECK(std::abs(t1 - t2) <= 10.0 * 1e-8 * std::max(1.0, std::abs(t2)));
}

TEST_CASE("events bracket a sign change of their trigger function") {
    Params p{3, 2};
    const double eta = 10.0;
    LocalSeries ser{SeriesAnchor::InterfaceP1, p, std::pow(eta, p.sigma)};
    const double xs = eta * (1.0 - 1e-4);
    const auto sv = local_series_eval(ser, xs);
    IntegratorControl ctrl;
    ctrl.atol = 1e-30;
    const EventSpec watch[] = {EventSpec::v_hits_zero()};
    auto tr = integrate_profile(p, {xs, sv.v, sv.w}, Direction::Backward, ctrl, watch);
    REQUIRE(tr.termination.kind == EventKind::VHitsZero);
    const double theta = tr.termination.location;
    // find the enclosing recorded step and verify the trigger changes sign
    const double delta = 1e-11;
    bool found = false;
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        const auto& a = tr.samples[i - 1];
        const auto& b = tr.samples[i];
        if ((a.t - theta) * (b.t - theta) <= 0.0) {
            const double ga = a.y[0] - delta * std::abs(a.y[1]);
            const double gb = b.y[0] - delta * std::abs(b.y[1]);
            CHECK(ga * gb <= 0.0);
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("phase orbit stalls at a critical point and exhausts the budget") {
    Params p{3, 2};
    auto cp = critical_point(p, PointTag::P2);
    IntegratorControl ctrl;
    ctrl.max_steps = 500;
    auto tr = integrate_phase(p, {cp.coords[0], cp.coords[1], cp.coords[2]}, ctrl, {});
    CHECK(tr.termination.kind == EventKind::StepBudgetExhausted);
    CHECK((tr.back().vec() - cp.coords).norm() < 1e-12);
}

TEST_CASE("self-similar evaluation") {
    const double m = 3.0;
    IntegratorControl ctrl;
    auto tr = explicit_backward(m, 3e-6, ctrl);
    Params p = tr.params;
    const auto e = exponents(p);
    const double xi1 = explicit_support_edge(m);

    // t = 0, x = 0 reduces to f at the smallest sampled xi (origin anchor absent)
    const double u_mid = selfsimilar_eval(tr, 1.0, 0.5, 0.0);
    CHECK(u_mid == doctest::Approx(explicit_profile(m, 0.5)).epsilon(1e-6));

    // compact support: x beyond the interface evaluates through the anchor to 0
    CHECK(selfsimilar_eval(tr, 1.0, 2.0 * xi1, 0.0) == 0.0);

    // scaling against the closed form at a later time
    const double T = 1.0, t = 0.6, x = 0.4;
    const double xi = x * std::pow(T - t, e.beta);
    CHECK(selfsimilar_eval(tr, T, x, t) ==
          doctest::Approx(std::pow(T - t, -e.alpha) * explicit_profile(m, xi)).epsilon(1e-6));

    CHECK_THROWS_AS(selfsimilar_eval(tr, 1.0, 0.1, 1.0), std::invalid_argument);
}
