#pragma once

#include <stdexcept>

namespace blowup {

/// Profile ODE right-hand side evaluated at v <= 0, where it is singular.
struct DegenerateState : std::domain_error {
    using std::domain_error::domain_error;
};

/// Interface series evaluated outside the support of the profile.
struct OutsideSupport : std::domain_error {
    using std::domain_error::domain_error;
};

/// Linearization requested at a point that has none in these coordinates.
struct UnsupportedPoint : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bisection bracket whose endpoints do not classify as required.
struct InvalidBracket : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace blowup
