#include "hypgap/params.hpp"

#include "hypgap/errors.hpp"

#include <cmath>
#include <string>

namespace hypgap {

ProblemParams::ProblemParams(double n, double theta1, double theta_max)
    : n_(n), theta1_(theta1), theta_max_(theta_max)
{
    if (!(n > 2.0 && n < 4.0))
        throw DomainError("n must satisfy 2 < n < 4, got " + std::to_string(n));
    if (!(theta_max > 0.0) || !std::isfinite(theta_max))
        throw DomainError("theta_max must be positive and finite");
    if (!(theta1 > 0.0))
        throw DomainError("theta1 must be positive, got " + std::to_string(theta1));
    if (theta1 > theta_max)
        throw DomainTooLarge("theta1 exceeds theta_max (" + std::to_string(theta_max) + ")");
}

} // namespace hypgap
