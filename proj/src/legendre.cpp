#include "hypgap/legendre.hpp"

#include "hypgap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hypgap {

namespace {

// sinh^2(theta/2) = 1 at theta = 2 asinh(1), the radius of the series in theta.
const double kSeriesRadius = 2.0 * std::asinh(1.0);

void check_order(Order order)
{
    if (!(order.nu > -1.0 && order.nu < 1.0))
        throw DomainError("Legendre order must satisfy -1 < nu < 1, got " + std::to_string(order.nu));
}

void check_theta(double theta, double theta_max)
{
    if (!(theta > 0.0))
        throw DomainError("theta must be positive, got " + std::to_string(theta));
    if (theta > theta_max)
        throw DomainTooLarge("theta=" + std::to_string(theta) + " exceeds theta_max=" +
                             std::to_string(theta_max));
}

void check_switch(const LegendreOptions& options)
{
    if (!(options.theta_switch > 0.0 && options.theta_switch < kSeriesRadius))
        throw DomainError("theta_switch must lie in (0, 2 asinh 1)");
}

// lim_{c->0} 2F1[-l, l+1; c; z] / Gamma(c) = sum_{k>=1} (-l)_k (l+1)_k z^k / ((k-1)! k!), whose
// first term is L z. Needed for P^{nu+1} at nu = 0.
double regularized_at_zero(Degree degree, double z, const SeriesOptions& so)
{
    double term = degree.L * z;
    double sum = term;
    for (std::size_t k = 1; k < so.max_terms; ++k) {
        if (term == 0.0 || std::abs(term) < so.rel_tol * std::abs(sum))
            return sum;
        const double kd = static_cast<double>(k);
        term *= z * (kd * (kd + 1.0) + degree.L) / (kd * (kd + 1.0));
        sum += term;
    }
    throw ConvergenceError("legendre_series: regularized series did not converge");
}

ode::State<2> series_state(Degree degree, Order order, double theta, const SeriesOptions& so)
{
    const LegendreEval e = legendre_series(degree, order, theta, so);
    return {e.value, e.dtheta};
}

LegendreEval from_state(const ode::State<2>& y, Order order, double theta)
{
    const double raised = y[1] - order.nu * y[0] / std::tanh(theta);
    return {y[0], y[1], raised, LegendreMethod::Continuation};
}

struct LegendreRhs {
    double L;
    double nu2;
    void operator()(double t, const ode::State<2>& y, ode::State<2>& dy) const
    {
        const double s = std::sinh(t);
        dy[0] = y[1];
        dy[1] = -y[1] / std::tanh(t) - (L - nu2 / (s * s)) * y[0];
    }
};

ode::Options continuation_options(const LegendreOptions& options)
{
    ode::Options o;
    o.rtol = options.rtol;
    o.atol = options.atol;
    return o;
}

} // namespace

LegendreEval legendre_series(Degree degree, Order order, double theta, const SeriesOptions& options)
{
    check_order(order);
    if (!(theta > 0.0))
        throw DomainError("theta must be positive, got " + std::to_string(theta));
    if (!(theta < kSeriesRadius))
        throw ConvergenceError("legendre_series: theta outside the series radius");
    const double half = 0.5 * theta;
    const double sh = std::sinh(half);
    const double z = -sh * sh;
    const double cth = std::cosh(half) / sh;
    const double nu = order.nu;

    const double value = std::pow(cth, nu) / gamma_real(1.0 - nu) * hyp_series(degree, 1.0 - nu, z, options);
    const double raised = nu == 0.0 ? cth * regularized_at_zero(degree, z, options)
                                    : std::pow(cth, nu + 1.0) / gamma_real(-nu) * hyp_series(degree, -nu, z, options);
    const double dtheta = raised + nu * value / std::tanh(theta);
    return {value, dtheta, raised, LegendreMethod::Series};
}

LegendreEval legendre_p(Degree degree, Order order, double theta, const LegendreOptions& options)
{
    check_order(order);
    check_switch(options);
    check_theta(theta, options.theta_max);
    if (theta <= options.theta_switch)
        return legendre_series(degree, order, theta, options.series);

    const ode::State<2> y0 = series_state(degree, order, options.theta_switch, options.series);
    LegendreRhs rhs{degree.L, order.nu * order.nu};
    const auto result = ode::integrate<2>(rhs, options.theta_switch, y0, theta, continuation_options(options));
    return from_state(result.y, order, theta);
}

LegendreCurve::LegendreCurve(Degree degree, Order order, double theta_end, const LegendreOptions& options)
    : degree_(degree), order_(order), theta_end_(theta_end), options_(options)
{
    check_order(order);
    check_switch(options);
    check_theta(theta_end, options.theta_max);
    if (theta_end <= options.theta_switch)
        return;
    const ode::State<2> y0 = series_state(degree, order, options.theta_switch, options.series);
    LegendreRhs rhs{degree.L, order.nu * order.nu};
    auto keep = [this](const ode::DenseStep<2>& step) {
        steps_.push_back(step);
        return true;
    };
    ode::integrate<2>(rhs, options.theta_switch, y0, theta_end, continuation_options(options), keep);
}

LegendreEval LegendreCurve::operator()(double theta) const
{
    check_theta(theta, theta_end_);
    if (theta <= options_.theta_switch)
        return legendre_series(degree_, order_, theta, options_.series);
    auto it = std::lower_bound(steps_.begin(), steps_.end(), theta,
                               [](const ode::DenseStep<2>& s, double t) { return s.t1() < t; });
    if (it == steps_.end())
        it = std::prev(steps_.end());
    const ode::State<2> y = (theta == it->t1()) ? it->y1() : (*it)(theta);
    return from_state(y, order_, theta);
}

} // namespace hypgap
