#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blowup/analysis.hpp"
#include "blowup/errors.hpp"
#include "blowup/shooting.hpp"

using namespace blowup;

TEST_CASE("backward shoots split at the monotonicity threshold, m=3 sigma=2") {
    Params p{3, 2};
    ShootControl ctrl;
    auto near = shoot_from_interface(p, 0.5, ctrl);
    CHECK(near.kind == BackwardKind::PositiveAtZero);
    CHECK(near.origin_value > 0.0);
    CHECK(near.origin_slope < 0.0);

    auto far = shoot_from_interface(p, 10.0, ctrl);
    CHECK(far.kind == BackwardKind::SignChange);
    CHECK(far.theta > 0.0);
    CHECK(far.theta < 10.0);

    CHECK_THROWS_AS(shoot_from_interface(p, -1.0, ctrl), std::invalid_argument);
}

TEST_CASE("profiles with interface below alpha^{1/sigma} are decreasing") {
    Params p{3, 2}; // threshold is exactly 1
    ShootControl ctrl;
    for (int i = 1; i <= 10; ++i) {
        const double eta = 0.95 * i / 10.0;
        auto out = shoot_from_interface(p, eta, ctrl);
        for (const auto& s : out.trajectory.samples)
            CHECK(s.y[1] <= 1e-12); // w <= 0 throughout: f decreasing
    }
}

TEST_CASE("backward shoot at the closed-form interface is a good candidate") {
    const double m = 3.0;
    Params p{m, sigma_star(m)};
    ShootControl ctrl;
    const double xi1 = explicit_support_edge(m);
    auto out = shoot_from_interface(p, xi1, ctrl);
    CHECK(out.kind == BackwardKind::GoodCandidate);
    CHECK(out.origin_value == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(out.endpoint == OriginEndpoint::EntersP2);
    // trajectory reproduces the closed form
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double xi = 0.1 + (0.9 * xi1 - 0.1) * i / 100.0;
        const double f_ref = explicit_profile(m, xi);
        if (!out.trajectory.contains_xi(xi)) continue;
        worst = std::max(worst,
                         std::abs(out.trajectory.state_at(xi).f(p) - f_ref) / f_ref);
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("interface bisection recovers the closed-form edge") {
    const double m = 3.0;
    Params p{m, sigma_star(m)};
    ShootControl ctrl;
    auto res = find_good_profile(p, {0.5, 10.0}, ctrl);
    CHECK(res.eta_star == doctest::Approx(explicit_support_edge(m)).epsilon(1e-4 / 1.6));
}

TEST_CASE("good profile at small sigma starts flat and positive") {
    Params p{3, 0.5};
    ShootControl ctrl;
    auto bracket = scan_interface_bracket(p, ctrl);
    auto res = find_good_profile(p, bracket, ctrl);
    CHECK(res.outcome.kind == BackwardKind::GoodCandidate);
    CHECK(res.outcome.origin_value > 1e-2);
    CHECK(std::abs(res.outcome.origin_slope) <= 1e-4);
}

TEST_CASE("bad brackets are rejected") {
    Params p{3, 2};
    ShootControl ctrl;
    CHECK_THROWS_AS(find_good_profile(p, {10.0, 0.5}, ctrl), InvalidBracket);
    CHECK_THROWS_AS(find_good_profile(p, {5.0, 10.0}, ctrl), InvalidBracket);
}

TEST_CASE("uniqueness proxy: halved series offset leaves the profile unchanged") {
    Params p{3, 2};
    ShootControl a, b;
    b.series_offset = a.series_offset / 2.0;
    const double eta = 0.8;
    auto oa = shoot_from_interface(p, eta, a);
    auto ob = shoot_from_interface(p, eta, b);
    double worst = 0.0;
    const double lo = a.ode.xi_min;
    const double hi = eta * (1.0 - 2.0 * a.series_offset);
    for (int i = 0; i <= 100; ++i) {
        const double xi = lo + (hi - lo) * i / 100.0;
        const double fa = oa.trajectory.state_at(xi).f(p);
        const double fb = ob.trajectory.state_at(xi).f(p);
        worst = std::max(worst, std::abs(fa - fb) / std::max(fb, 1e-30));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("small sigma sends every origin orbit to the tail") {
    Params p{4, 0.5};
    ShootControl ctrl;
    auto out = shoot_from_origin(p, 1.0, ctrl);
    CHECK(out.kind == ForwardKind::Tail);
    CHECK(out.tail_drift <= ctrl.tail_tol);
    CHECK_THROWS_AS(shoot_from_origin(p, 0.0, ctrl), std::invalid_argument);
}

TEST_CASE("large sigma splits the origin family, m=4 sigma=4") {
    Params p{4, 4};
    ShootControl ctrl;
    std::vector<double> grid;
    for (int i = 0; i < 25; ++i) grid.push_back(std::pow(10.0, -2.0 + 4.0 * i / 24.0));
    auto cls = classify_c_intervals(p, grid, ctrl);
    int tails = 0, crossings = 0;
    for (const auto& e : cls.entries) {
        if (e.kind == ForwardKind::Tail) ++tails;
        if (e.kind == ForwardKind::TransversalZero) ++crossings;
    }
    CHECK(tails > 0);
    CHECK(crossings > 0);
    REQUIRE(!cls.candidate_brackets.empty());

    auto ic = find_interface_c(p, cls.candidate_brackets.front(), ctrl);
    CHECK(ic.outcome.kind == ForwardKind::Interface);
    CHECK(ic.outcome.xi0 > 0.0);

    // near-origin exponent of the interface profile matches (s+2)/(m-1) = 2
    const auto& tr = ic.outcome.trajectory;
    const double xi_first = tr.xi_of(0);
    auto curve = curve_from(tr, 2.0 * xi_first, 8.0 * xi_first);
    auto fit = fit_origin(curve, p, 2.0 * xi_first, 8.0 * xi_first);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.05));

    // the backward bisection lands on the same interface point
    auto res = find_good_profile(p, scan_interface_bracket(p, ctrl), ctrl);
    CHECK(std::abs(res.eta_star - ic.outcome.xi0) <= 1e-3 * ic.outcome.xi0);

    // forward/backward cross-check; the backward leg loses the connection
    // below its peel scale, so compare on the outer part of the profile
    auto back = shoot_from_interface(p, ic.outcome.xi0, ctrl);
    const double lo = 0.6 * ic.outcome.xi0;
    double worst = 0.0, fmax = 0.0;
    for (int i = 0; i <= 150; ++i) {
        const double xi = lo + (0.9 * ic.outcome.xi0 - lo) * i / 150.0;
        if (!back.trajectory.contains_xi(xi)) continue;
        const double ff = tr.profile_at_xi(xi).f(p);
        const double fb = back.trajectory.state_at(xi).f(p);
        worst = std::max(worst, std::abs(ff - fb));
        fmax = std::max(fmax, std::abs(fb));
    }
    CHECK(fmax > 0.0);
    CHECK(worst <= 1e-4 * fmax);
}

TEST_CASE("classification bookkeeping") {
    Params p{4, 0.5};
    ShootControl ctrl;
    const double one[] = {1.0};
    auto cls = classify_c_intervals(p, one, ctrl);
    CHECK(cls.entries.size() == 1);
    CHECK(cls.intervals.size() == 1);
    CHECK(cls.candidate_brackets.empty());
    CHECK_THROWS_AS(classify_c_intervals(p, {}, ctrl), std::invalid_argument);
    const double bad[] = {2.0, 1.0};
    CHECK_THROWS_AS(classify_c_intervals(p, bad, ctrl), std::invalid_argument);
    CHECK_THROWS_AS(find_interface_c(p, {0.5, 1.5}, ctrl), InvalidBracket);
}

TEST_CASE("forward trajectories obey the crossing rules") {
    Params p{4, 4};
    const auto e = exponents(p);
    ShootControl ctrl;
    int crossings_down = 0, left_half_space = 0;
    for (double c : {0.05, 0.3, 1.0, 3.0, 20.0}) {
        auto out = shoot_from_origin(p, c, ctrl);
        const auto& s = out.trajectory.samples;
        bool below = false;
        for (std::size_t i = 1; i < s.size(); ++i) {
            // Y crossing zero downward happens at Z > 1 only
            if (s[i - 1].y[1] > 0.0 && s[i].y[1] <= 0.0) {
                ++crossings_down;
                CHECK(s[i].y[2] > 1.0 - 1e-9);
            }
            // once below Y = -beta/alpha, never back
            if (below) CHECK(s[i].y[1] < -e.beta / e.alpha + 1e-12);
            if (s[i].y[1] < -e.beta / e.alpha) below = true;
        }
        if (below) ++left_half_space;
    }
    CHECK(crossings_down > 0);
    CHECK(left_half_space > 0);
}
