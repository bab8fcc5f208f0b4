#include "blowup/model.hpp"

#include <cmath>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

double clamp_pos(double x) { return x > 0.0 ? x : 0.0; }

/// Denominator of psi^{m-1}: (m-1)s^2 + (3m+1)s + 4(m+1).
double psi_denominator(double m, double sigma) {
    return (m - 1.0) * sigma * sigma + (3.0 * m + 1.0) * sigma + 4.0 * (m + 1.0);
}

} // namespace

CriticalPoint critical_point(const Params& p, PointTag tag, std::optional<double> gamma) {
    const auto [alpha, beta] = exponents(p);
    const double m = p.m;
    CriticalPoint cp;
    cp.tag = tag;
    switch (tag) {
    case PointTag::P0:
        return cp;
    case PointTag::P0Gamma:
    case PointTag::P1Gamma: {
        if (!gamma || !(*gamma > 0.0))
            throw std::invalid_argument("critical_point: gamma > 0 required for P0Gamma/P1Gamma");
        cp.gamma = *gamma;
        cp.coords = {0.0, tag == PointTag::P1Gamma ? -beta / alpha : 0.0, *gamma};
        return cp;
    }
    case PointTag::P2:
        cp.coords = {(m - 1.0) / (2.0 * (m + 1.0) * alpha), 1.0 / ((m + 1.0) * alpha), 0.0};
        return cp;
    case PointTag::Q1:
        cp.at_infinity = true;
        cp.sphere = {1.0, 0.0, 0.0, 0.0};
        return cp;
    case PointTag::Q2:
        cp.at_infinity = true;
        cp.sphere = {0.0, 1.0, 0.0, 0.0};
        return cp;
    case PointTag::Q3:
        cp.at_infinity = true;
        cp.sphere = {0.0, -1.0, 0.0, 0.0};
        return cp;
    case PointTag::Q4:
        cp.at_infinity = true;
        cp.sphere = {0.0, 0.0, 1.0, 0.0};
        return cp;
    case PointTag::Q5: {
        cp.at_infinity = true;
        const double n = std::sqrt(1.0 + m * m);
        cp.sphere = {m / n, 1.0 / n, 0.0, 0.0};
        return cp;
    }
    }
    throw std::invalid_argument("critical_point: unknown tag");
}

Linearization linearize(const Params& p, const CriticalPoint& point) {
    const auto [alpha, beta] = exponents(p);
    const double m = p.m, s = p.sigma, ba = beta / alpha;

    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    switch (point.tag) {
    case PointTag::P0:
        M << 0, 0, 0,
             1, -ba, 0,
             0, 0, 0;
        break;
    case PointTag::P0Gamma:
        M << 0, 0, 0,
             1.0 - point.gamma, -ba, 0,
             s * point.gamma, 0, 0;
        break;
    case PointTag::P1Gamma:
        M << -(m - 1.0) * ba, 0, 0,
             1.0 + ba - point.gamma, ba, 0,
             s * point.gamma, 0, 0;
        break;
    case PointTag::P2: {
        const double k = 1.0 / (2.0 * (m + 1.0) * alpha);
        M << -2.0 * (m - 1.0), (m - 1.0) * (m - 1.0), 0,
             2.0 * (m + 1.0) * alpha - 2.0, -2.0 * beta * (m + 1.0) - (m + 3.0), -(m - 1.0),
             0, 0, s * (m - 1.0);
        M *= k;
        break;
    }
    case PointTag::Q5:
        M << 1.0, 1.0, beta / (m * alpha) - 1.0,
             0.0, -(m * s + m + 1.0) / m, 0.0,
             0.0, 0.0, -(m + 1.0) / m;
        break;
    default:
        throw UnsupportedPoint("linearize: no single linearization at this point");
    }

    Linearization lin;
    lin.point = point;
    lin.matrix = M;
    Eigen::EigenSolver<Eigen::Matrix3d> es(M);
    lin.eigenvalues = es.eigenvalues();
    lin.eigenvectors = es.eigenvectors();

    if (point.tag == PointTag::P1Gamma) {
        // The transverse direction has a closed form; pin it exactly.
        const double g = point.gamma;
        Eigen::Vector3d e1{-1.0, (alpha * (1.0 - g) + beta) / (m * beta),
                           alpha * s * g / ((m - 1.0) * beta)};
        const double lam1 = -(m - 1.0) * ba;
        int j = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(lin.eigenvalues[i].real() - lam1) <
                std::abs(lin.eigenvalues[j].real() - lam1))
                j = i;
        lin.eigenvectors.col(j) = e1.cast<std::complex<double>>();
    }
    return lin;
}

double psi_coefficient(const Params& p) {
    const double num = (p.m - 1.0) * (p.m - 1.0);
    return std::pow(num / psi_denominator(p.m, p.sigma), 1.0 / (p.m - 1.0));
}

Eigen::Vector3d p2_exit_direction(const Params& p) {
    const double D = psi_denominator(p.m, p.sigma);
    return {-(p.m - 1.0) * (p.m - 1.0) / D, -(p.m - 1.0) * (p.sigma + 2.0) / D, 1.0};
}

// --- closed-form profile ----------------------------------------------------

namespace {

struct ExplicitCoeffs {
    double sstar, A, B;
};

ExplicitCoeffs explicit_coeffs(double m) {
    const double ss = sigma_star(m);
    const double A = (m - 1.0) / (2.0 * m * (m + 1.0));
    const double B = (m - 1.0) * (m - 1.0) / (m * (ss + 2.0) * (m * ss + m + 1.0));
    return {ss, A, B};
}

} // namespace

double explicit_pressure(double m, double xi) {
    const auto [ss, A, B] = explicit_coeffs(m);
    if (xi <= 0.0 || !(xi < std::pow(A / B, 1.0 / ss))) return 0.0;
    return xi * xi * clamp_pos(A - B * std::pow(xi, ss));
}

double explicit_pressure_slope(double m, double xi) {
    const auto [ss, A, B] = explicit_coeffs(m);
    if (xi <= 0.0) return 0.0;
    if (A - B * std::pow(xi, ss) <= 0.0) return 0.0;
    return 2.0 * A * xi - (ss + 2.0) * B * std::pow(xi, ss + 1.0);
}

double explicit_profile(double m, double xi) {
    if (!(m > 1.0)) throw std::invalid_argument("explicit_profile: require m > 1");
    if (xi <= 0.0) return 0.0;
    return std::pow(explicit_pressure(m, xi), 1.0 / (m - 1.0));
}

double explicit_ode_residual(double m, double xi) {
    const auto [ss, A, B] = explicit_coeffs(m);
    const Params p{m, ss};
    const auto [alpha, beta] = exponents(p);
    const double g = explicit_pressure(m, xi);
    if (g <= 0.0) return 0.0;
    const double gp = 2.0 * A * xi - (ss + 2.0) * B * std::pow(xi, ss + 1.0);
    const double gpp = 2.0 * A - (ss + 2.0) * (ss + 1.0) * B * std::pow(xi, ss);
    const double q = m / (m - 1.0);
    // (f^m)'' - a f + b xi f' + xi^s f with f = g^{q-1}, f^m = g^q.
    return q * (q - 1.0) * std::pow(g, q - 2.0) * gp * gp + q * std::pow(g, q - 1.0) * gpp -
           alpha * std::pow(g, q - 1.0) + beta * xi * (q - 1.0) * std::pow(g, q - 2.0) * gp +
           std::pow(xi, ss) * std::pow(g, q - 1.0);
}

double explicit_support_edge(double m) {
    const auto [ss, A, B] = explicit_coeffs(m);
    return std::pow(A / B, 1.0 / ss);
}

// --- local series ------------------------------------------------------------

double interface_location(const Params& p, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("interface_location: gamma > 0");
    const auto [alpha, beta] = exponents(p);
    (void)beta;
    return std::pow(alpha * gamma, 1.0 / p.sigma);
}

SeriesValue local_series_eval(const LocalSeries& s, double xi) {
    const Params& p = s.params;
    const double m = p.m, sg = p.sigma;
    const auto [alpha, beta] = exponents(p);
    (void)beta;
    switch (s.anchor) {
    case SeriesAnchor::OriginP0: {
        const double c = s.coefficient;
        if (!(c > 0.0)) throw std::invalid_argument("OriginP0 series: c > 0 required");
        const double cm = std::pow(c, m - 1.0);
        return {cm * std::pow(xi, sg + 2.0), (sg + 2.0) * cm * std::pow(xi, sg + 1.0)};
    }
    case SeriesAnchor::InterfaceP1: {
        const double xi0 = interface_location(p, s.coefficient);
        const double v = (m - 1.0) * (xi0 * xi0 - xi * xi) / (2.0 * m * sg);
        if (v < 0.0) throw OutsideSupport("InterfaceP1 series: xi beyond the interface");
        return {v, -(m - 1.0) * xi / (m * sg)};
    }
    case SeriesAnchor::OriginP2: {
        const double A2 = (m - 1.0) / (2.0 * m * (m + 1.0));
        const double psim1 = (m - 1.0) * (m - 1.0) / psi_denominator(m, sg);
        return {A2 * xi * xi - psim1 / m * std::pow(xi, sg + 2.0),
                2.0 * A2 * xi - (sg + 2.0) * psim1 / m * std::pow(xi, sg + 1.0)};
    }
    case SeriesAnchor::TailQ4: {
        const double K = s.coefficient;
        if (!(K > 0.0)) throw std::invalid_argument("TailQ4 series: K > 0 required");
        // v = K^{m-1} xi^{s+2} e^{-(m-1) xi^s}; note (s+2)/(m-1)*(m-1) = s+2.
        const double v = std::pow(K, m - 1.0) * std::pow(xi, sg + 2.0) *
                         std::exp(-(m - 1.0) * std::pow(xi, sg));
        const double dlog = (sg + 2.0) / xi - (m - 1.0) * sg * std::pow(xi, sg - 1.0);
        return {v, v * dlog};
    }
    case SeriesAnchor::OriginQ5: {
        const double K = s.coefficient;
        if (!(K > 0.0)) throw std::invalid_argument("OriginQ5 series: K > 0 required");
        const double km = std::pow(K, m - 1.0);
        return {km * std::pow(xi, (m - 1.0) / m),
                (m - 1.0) / m * km * std::pow(xi, -1.0 / m)};
    }
    }
    throw std::invalid_argument("local_series_eval: unknown anchor");
}

double origin_coefficient_to_k(const Params& p, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("origin_coefficient_to_k: c > 0 required");
    return 1.0 / (p.m * std::pow(c, p.m - 1.0));
}

double tail_residual(const Params& p, double xi, double f) {
    if (!(f > 0.0)) throw std::invalid_argument("tail_residual: f > 0 required");
    if (!(xi > 0.0)) throw std::invalid_argument("tail_residual: xi > 0 required");
    return std::log(f) + std::pow(xi, p.sigma) - (p.sigma + 2.0) / (p.m - 1.0) * std::log(xi);
}

} // namespace blowup
