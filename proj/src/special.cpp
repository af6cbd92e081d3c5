#include "hypgap/special.hpp"

#include "hypgap/errors.hpp"

#include <cmath>
#include <string>

namespace hypgap {

namespace {

bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && std::floor(x) == x;
}

} // namespace

double gamma_real(double x)
{
    if (!std::isfinite(x))
        throw DomainError("gamma_real: non-finite argument");
    if (is_nonpositive_integer(x))
        throw PoleError("gamma_real: pole at " + std::to_string(x));
    return std::tgamma(x);
}

double hyp_series(Degree degree, double c, double z, const SeriesOptions& options)
{
    if (is_nonpositive_integer(c))
        throw DomainError("hyp_series: c must not be a nonpositive integer");
    if (!(std::abs(z) < 1.0))
        throw ConvergenceError("hyp_series: |z| >= 1 is outside the radius of convergence");

    double term = 1.0;
    double sum = 1.0;
    for (std::size_t k = 0; k < options.max_terms; ++k) {
        const double kd = static_cast<double>(k);
        term *= z * (kd * (kd + 1.0) + degree.L) / ((c + kd) * (kd + 1.0));
        sum += term;
        if (term == 0.0 || std::abs(term) < options.rel_tol * std::abs(sum))
            return sum;
    }
    throw ConvergenceError("hyp_series: no convergence after " + std::to_string(options.max_terms) +
                           " terms");
}

} // namespace hypgap
