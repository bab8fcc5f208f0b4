#pragma once

#include <cmath>
#include <stdexcept>

namespace blowup {

/// Problem instance of u_t = (u^m)_xx + |x|^sigma u.  Requires m > 1, sigma > 0.
struct Params {
    double m;
    double sigma;

    Params(double m_, double sigma_) : m(m_), sigma(sigma_) {
        if (!(m > 1.0) || !std::isfinite(m))
            throw std::invalid_argument("Params: require m > 1");
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw std::invalid_argument("Params: require sigma > 0");
    }
};

/// Self-similar rates: u = (T-t)^{-alpha} f(|x| (T-t)^{beta}).
struct Exponents {
    double alpha;
    double beta;
};

/// alpha = (sigma+2)/(sigma(m-1)), beta = 1/sigma.
/// Satisfies alpha*(m-1) - 2*beta = 1 identically.
inline Exponents exponents(const Params& p) {
    return {(p.sigma + 2.0) / (p.sigma * (p.m - 1.0)), 1.0 / p.sigma};
}

/// The exponent sqrt(2(m+1)) at which the profile admits a closed form.
inline double sigma_star(double m) {
    if (!(m > 1.0))
        throw std::invalid_argument("sigma_star: require m > 1");
    return std::sqrt(2.0 * (m + 1.0));
}

} // namespace blowup
