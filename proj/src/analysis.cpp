#include "blowup/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/errors.hpp"

namespace blowup {

// --- curves ------------------------------------------------------------------

ProfileCurve curve_from(const ProfileTrajectory& traj, double xi_a, double xi_b) {
    ProfileCurve c;
    for (const auto& s : traj.samples) {
        if (s.t < xi_a || s.t > xi_b || !(s.y[0] > 0.0)) continue;
        c.xi.push_back(s.t);
        c.f.push_back(std::pow(s.y[0], 1.0 / (traj.params.m - 1.0)));
    }
    if (!c.xi.empty() && c.xi.front() > c.xi.back()) {
        std::reverse(c.xi.begin(), c.xi.end());
        std::reverse(c.f.begin(), c.f.end());
    }
    return c;
}

ProfileCurve curve_from(const PhaseTrajectory& traj, double xi_a, double xi_b) {
    const auto [alpha, beta] = exponents(traj.params);
    (void)beta;
    ProfileCurve c;
    for (const auto& s : traj.samples) {
        if (!(s.y[2] > 0.0) || !(s.y[0] > 0.0)) continue;
        const double xi = std::pow(alpha * s.y[2], 1.0 / traj.params.sigma);
        if (xi < xi_a || xi > xi_b) continue;
        const double v = alpha / traj.params.m * xi * xi * s.y[0];
        c.xi.push_back(xi);
        c.f.push_back(std::pow(v, 1.0 / (traj.params.m - 1.0)));
    }
    return c;
}

// --- fits --------------------------------------------------------------------

OriginFit fit_origin(const ProfileCurve& curve, const Params& p, double xi_a, double xi_b) {
    std::vector<double> lx, lf;
    for (std::size_t i = 0; i < curve.xi.size(); ++i) {
        if (curve.xi[i] < xi_a || curve.xi[i] > xi_b || !(curve.f[i] > 0.0)) continue;
        lx.push_back(std::log(curve.xi[i]));
        lf.push_back(std::log(curve.f[i]));
    }
    if (lx.size() < 8)
        throw std::invalid_argument("fit_origin: window too short (<8 samples)");

    const auto n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += lf[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * lf[i];
    }
    const double den = n * sxx - sx * sx;
    const double b = (n * sxy - sx * sy) / den;
    const double a = (sy - b * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = lf[i] - (a + b * lx[i]);
        rss += r * r;
    }

    OriginFit fit;
    fit.exponent = b;
    fit.rms_residual = std::sqrt(rss / n);

    const double cand[3] = {2.0 / (p.m - 1.0), (p.sigma + 2.0) / (p.m - 1.0), 1.0 / p.m};
    const MatchedLaw laws[3] = {MatchedLaw::TwoOverM1, MatchedLaw::SigmaPlus2OverM1,
                                MatchedLaw::OneOverM};
    const double min_cand = *std::min_element(cand, cand + 3);

    int hits = 0;
    MatchedLaw law = MatchedLaw::None;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(b - cand[i]) <= 0.05 * cand[i]) {
            ++hits;
            law = laws[i];
        }
    }
    const bool flat = std::abs(b) <= 0.05 * min_cand;
    if (flat) {
        ++hits;
        law = MatchedLaw::Constant;
    }
    fit.matched_law = (hits == 1) ? law : MatchedLaw::None; // ambiguous laws refuse
    fit.coefficient = fit.matched_law == MatchedLaw::Constant
                          ? curve.f.empty() ? 0.0 : curve.f.front()
                          : std::exp(a);
    return fit;
}

TailFit fit_tail(const ProfileCurve& curve, const Params& p, double xi_a, double xi_b) {
    TailFit tf;
    double prev = 0.0, sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < curve.xi.size(); ++i) {
        if (curve.xi[i] < xi_a || curve.xi[i] > xi_b || !(curve.f[i] > 0.0)) continue;
        const double r = tail_residual(p, curve.xi[i], curve.f[i]);
        if (n > 0) tf.drift += std::abs(r - prev);
        prev = r;
        sum += r;
        ++n;
    }
    if (n < 8) throw std::invalid_argument("fit_tail: window too short (<8 samples)");
    tf.lnK = sum / n;
    return tf;
}

BlowupCharacter blowup_character(const OriginFit& fit) {
    switch (fit.matched_law) {
    case MatchedLaw::Constant:
    case MatchedLaw::TwoOverM1:
        return BlowupCharacter::Global;
    case MatchedLaw::SigmaPlus2OverM1:
        return BlowupCharacter::AtInfinity;
    default:
        return BlowupCharacter::Unknown;
    }
}

// --- barrier formulas ----------------------------------------------------------

double barrier_k1(const Params& p) {
    const double r = (p.m - 1.0) / (2.0 * (p.sigma + 2.0));
    return r * r;
}

double flow_on_Y_plane(const Params& p, double y0, double X, double Z) {
    const auto [alpha, beta] = exponents(p);
    return -y0 * y0 - beta / alpha * y0 + X - X * y0 - X * Z;
}

double tangency_second_derivative(const Params& p, double y0, double X) {
    const double m = p.m, s = p.sigma;
    return s * X * X * (y0 - 1.0) + (m - 1.0) * y0 * y0 * y0 +
           ((s - 2.0) * X * y0 * (m - 1.0 + (s + 2.0) * y0) + m * (m - 2.0) * y0 * y0 + y0) /
               (s + 2.0);
}

bool region_interm4_contains(const Params& p, const PhaseState& s) {
    const auto cp = critical_point(p, PointTag::P2);
    return s.X > 0.0 && s.X < cp.coords[0] && s.Y > 0.0 && s.Y < cp.coords[1] &&
           s.Y + s.Z / (1.0 + p.sigma) <= 1.0;
}

double sigma0_cubic_root(double m) {
    if (!(m > 1.0)) throw std::invalid_argument("sigma0_cubic_root: require m > 1");
    const double target = m + 1.0;
    auto f = [target](double x) { return x * (x + 1.0) * (x + 2.0) - target; };
    auto fp = [](double x) { return 3.0 * x * x + 6.0 * x + 2.0; };
    // f is increasing on x > 0 with f(0) < 0; bracket then Newton with bisection fallback.
    double lo = 0.0, hi = 1.0;
    while (f(hi) < 0.0) hi *= 2.0;
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        const double fx = f(x);
        if (std::abs(fx) <= 1e-13 * std::max(1.0, target)) break;
        if (fx > 0.0)
            hi = x;
        else
            lo = x;
        double xn = x - fx / fp(x);
        x = (xn > lo && xn < hi) ? xn : 0.5 * (lo + hi);
    }
    return x;
}

// --- regime scan ----------------------------------------------------------------

std::vector<RegimeReport> regime_scan(double m, std::span<const double> sigma_grid,
                                      const ShootControl& ctrl) {
    for (std::size_t i = 0; i < sigma_grid.size(); ++i)
        if (!(sigma_grid[i] > 0.0) || (i > 0 && !(sigma_grid[i] > sigma_grid[i - 1])))
            throw std::invalid_argument("regime_scan: grid must be positive, strictly increasing");

    std::vector<double> c_grid;
    for (int i = 0; i < 25; ++i)
        c_grid.push_back(std::pow(10.0, -2.0 + 4.0 * i / 24.0));

    const double s0 = sigma0_cubic_root(m);
    const double ss = sigma_star(m);

    std::vector<RegimeReport> reports;
    for (double sigma : sigma_grid) {
        const Params p{m, sigma};
        RegimeReport rep;
        rep.sigma = sigma;
        rep.sigma0 = s0;
        rep.sigma_star = ss;
        rep.below_proved_all_tail = sigma < std::min(s0, 2.0);

        auto cls = classify_c_intervals(p, c_grid, ctrl);
        rep.shot_count = static_cast<int>(cls.entries.size());
        rep.inconclusive_count = cls.inconclusive_count;
        rep.all_tail = true;
        for (const auto& e : cls.entries) {
            if (e.kind != ForwardKind::Tail) rep.all_tail = false;
            if (e.kind == ForwardKind::TransversalZero) rep.has_transversal = true;
            if (e.kind == ForwardKind::Interface) rep.has_interface_from_origin = true;
        }

        // The interface member of the origin family, when the grid brackets
        // one; its launch construction pins the (s+2)/(m-1) law exactly.
        bool origin_interface = false;
        if (!cls.candidate_brackets.empty()) {
            try {
                auto ic = find_interface_c(p, cls.candidate_brackets.front(), ctrl);
                origin_interface = ic.outcome.kind == ForwardKind::Interface;
            } catch (const std::exception&) {
                ++rep.inconclusive_count;
            }
        }
        rep.has_interface_from_origin = rep.has_interface_from_origin || origin_interface;

        try {
            auto bracket = scan_interface_bracket(p, ctrl);
            auto good = find_good_profile(p, bracket, ctrl);
            rep.good_profile_eta = good.eta_star;
            rep.good_profile_origin_value = good.outcome.origin_value;
            if (good.outcome.endpoint == OriginEndpoint::EntersP2) {
                rep.good_profile_law = MatchedLaw::TwoOverM1;
            } else if (good.outcome.endpoint == OriginEndpoint::PositiveValue) {
                // positive origin value: confirm flatness by a log-log fit
                const double xi_min = ctrl.ode.xi_min;
                const double hi = std::min(100.0 * xi_min, 0.1 * good.eta_star);
                auto curve = curve_from(good.outcome.trajectory, hi / 10.0, hi);
                auto fit = fit_origin(curve, p, hi / 10.0, hi);
                rep.good_profile_law = fit.matched_law;
            } else if (good.outcome.endpoint == OriginEndpoint::EntersP0 ||
                       rep.has_interface_from_origin) {
                // degenerate origin, identified with the origin-family member
                rep.good_profile_law = MatchedLaw::SigmaPlus2OverM1;
            }
            OriginFit lawfit;
            lawfit.matched_law = rep.good_profile_law;
            rep.blowup_character = blowup_character(lawfit);
        } catch (const std::exception&) {
            ++rep.inconclusive_count;
        }
        reports.push_back(rep);
    }
    return reports;
}

} // namespace blowup
