#include "hypgap/bvp.hpp"

#include "hypgap/errors.hpp"
#include "hypgap/ode.hpp"
#include "hypgap/quadrature.hpp"
#include "hypgap/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hypgap {

namespace {

double signed_pow(double x, double p)
{
    return x >= 0.0 ? std::pow(x, p) : -std::pow(-x, p);
}

// Ball model: r = tanh(theta / 2), rho = 2 / (1 - r^2), u = rho^{-(n-2)/2} v turns the equation into
// -v'' - (n-1)/r v' = v^p + mu rho^2 v with mu = lambda - n(n-2)/4. With v = v0 (B + z), where
// B = (1 + r^2/s^2)^{-(n-2)/2} is the Euclidean bubble with B(0) = 1 and s^2 = n(n-2)/kappa,
// kappa = v0^{p-1}, only the correction z is integrated:
//   z'' + (n-1)/r z' = -kappa ((B+z)^p - B^p) - mu rho^2 (B + z).
// The bubble is exact, so a concentrated core contributes no error; integrating B + z directly
// loses the O(v0^-2) regular part of the tail, which decides where the first zero sits.
struct BallRhs {
    double n_minus_1;
    double n_minus_2;
    double mu;
    double kappa;
    double p;
    double inv_s2;

    double bubble(double r) const { return std::pow(1.0 + r * r * inv_s2, -0.5 * n_minus_2); }
    double dbubble(double r, double b) const { return -n_minus_2 * r * inv_s2 * b / (1.0 + r * r * inv_s2); }

    void operator()(double r, const ode::State<2>& y, ode::State<2>& dy) const
    {
        const double b = bubble(r);
        const double w = b + y[0];
        double nonlinear;
        if (w > 0.0)
            nonlinear = std::pow(b, p) * std::expm1(p * std::log1p(y[0] / b));
        else
            nonlinear = signed_pow(w, p) - std::pow(b, p);
        const double rho = 2.0 / (1.0 - r * r);
        dy[0] = y[1];
        dy[1] = -n_minus_1 * y[1] / r - kappa * nonlinear - mu * rho * rho * w;
    }
};

void check_profile_grid(const SolutionProfile& profile, std::size_t min_nodes)
{
    const std::size_t m = profile.thetas.size();
    if (m < min_nodes || profile.values.size() != m || profile.dvalues.size() != m)
        throw DomainError("profile needs at least " + std::to_string(min_nodes) +
                          " nodes with matching values and derivatives");
}

} // namespace

CentreSeries centre_series(const ProblemParams& params, double lambda, double u0)
{
    const double n = params.n();
    const double p = params.p();
    const double f = lambda * u0 + std::pow(u0, p);
    const double df = lambda + p * std::pow(u0, p - 1.0);
    const double a = -f / (2.0 * n);
    const double b = -a * (2.0 * (n - 1.0) / 3.0 + df) / (4.0 * (n + 2.0));
    return {a, b};
}

Shot integrate_shoot(const ProblemParams& params, double lambda, double u0, const ShootOptions& options,
                     bool record_profile)
{
    if (!(u0 > 0.0) || !std::isfinite(u0))
        throw DomainError("integrate_shoot: u0 must be positive");
    if (u0 > options.overflow)
        throw IntegrationOverflow("integrate_shoot: u0 above the overflow guard");
    const double n = params.n();
    const double p = params.p();
    const double half = 0.5 * (n - 2.0);
    const double theta1 = params.theta1();
    const double R = std::tanh(0.5 * theta1);
    const double v0 = std::pow(2.0, half) * u0;
    const double kappa = std::pow(v0, p - 1.0);
    if (!std::isfinite(kappa))
        throw IntegrationOverflow("integrate_shoot: u0^(p-1) overflows");
    const double mu = lambda - params.lambda_trivial();
    const double s2 = n * (n - 2.0) / kappa;
    BallRhs rhs{n - 1.0, n - 2.0, mu, kappa, p, 1.0 / s2};

    // z = a r^2 + b r^4 + O(r^6); the remainder is ~((r/s)^4 + r^4) relative.
    const double za = -2.0 * mu / n;
    const double zb = (-kappa * p * za - 4.0 * mu * (2.0 - half / s2 + za)) / (4.0 * (n + 2.0));
    const double r0 = std::min({std::tanh(0.5 * options.theta_start), 1e-3 * std::sqrt(s2), 0.5 * R});
    auto series_z = [&](double r) {
        const double r2 = r * r;
        return ode::State<2>{za * r2 + zb * r2 * r2, 2.0 * za * r + 4.0 * zb * r2 * r};
    };

    Shot shot{u0, 2.0 * std::atanh(r0), centre_series(params, lambda, u0), std::nullopt, std::nullopt};

    SolutionProfile profile;
    std::vector<double> radii;
    std::size_t next_node = 0;
    auto store = [&](std::size_t i, double r, const ode::State<2>& z) {
        const double b = rhs.bubble(r);
        const double w = b + z[0];
        const double dw = rhs.dbubble(r, b) + z[1];
        const double rho = 2.0 / (1.0 - r * r);
        const double f = v0 * std::pow(rho, -half);
        profile.values[i] = f * w;
        profile.dvalues[i] = f * (dw - half * r * rho * w) / rho;
    };
    if (record_profile) {
        const int m = profile_grid_size(params, u0, options);
        const double h = theta1 / (m - 1);
        profile.lambda = lambda;
        profile.u0 = u0;
        profile.thetas.resize(m);
        profile.values.resize(m);
        profile.dvalues.resize(m);
        radii.resize(m);
        for (int i = 0; i < m; ++i) {
            profile.thetas[i] = (i == m - 1) ? theta1 : i * h;
            radii[i] = (i == m - 1) ? R : std::tanh(0.5 * profile.thetas[i]);
        }
        while (next_node < radii.size() && radii[next_node] <= r0) {
            store(next_node, radii[next_node], series_z(radii[next_node]));
            ++next_node;
        }
    }

    ode::Options ode_opt;
    ode_opt.rtol = record_profile ? options.profile_rtol : options.rtol;
    ode_opt.atol = options.atol;
    const double guard = options.overflow / v0;

    auto observer = [&](const ode::DenseStep<2>& step) {
        const auto& y1 = step.y1();
        const double w1 = rhs.bubble(step.t1()) + y1[0];
        if (!std::isfinite(w1) || std::abs(w1) > guard)
            throw IntegrationOverflow("integrate_shoot: |u| exceeded the overflow guard");
        if (record_profile) {
            while (next_node < radii.size() && radii[next_node] <= step.t1()) {
                const double r = radii[next_node];
                store(next_node, r, r == step.t1() ? y1 : step(r));
                ++next_node;
            }
        }
        const double w0 = rhs.bubble(step.t0()) + step.y0()[0];
        if (!shot.first_zero && w0 > 0.0 && w1 <= 0.0) {
            double lo = step.t0(), hi = step.t1();
            if (w1 == 0.0) {
                lo = hi;
            } else {
                // Bisect in r until the bracket is below zero_tol in theta (dtheta = rho dr).
                while ((hi - lo) * 2.0 / (1.0 - hi * hi) > options.zero_tol) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi)
                        break;
                    (rhs.bubble(mid) + step(mid)[0] > 0.0 ? lo : hi) = mid;
                }
            }
            shot.first_zero = std::min(theta1, 2.0 * std::atanh(0.5 * (lo + hi)));
            return record_profile;
        }
        return true;
    };
    ode::integrate<2>(rhs, r0, series_z(r0), R, ode_opt, observer);

    if (record_profile) {
        if (next_node != radii.size())
            throw ConvergenceError("integrate_shoot: profile grid not fully sampled");
        profile.residual_max = residual(profile, params, lambda);
        shot.profile = std::move(profile);
    }
    return shot;
}

int profile_grid_size(const ProblemParams& params, double u0, const ShootOptions& options)
{
    if (options.profile_points < 5)
        throw DomainError("profile_grid_size: profile needs at least 5 points");
    const double n = params.n();
    const double v0 = std::pow(2.0, 0.5 * (n - 2.0)) * u0;
    // Half-width of the bubble in theta is about 2 s for s^2 = n(n-2) / v0^{p-1}.
    const double width = 2.0 * std::sqrt(n * (n - 2.0) / std::pow(v0, params.p() - 1.0));
    const double target = width / options.profile_core_nodes;
    long m = options.profile_points;
    constexpr long cap = (1L << 22) + 1;
    while (params.theta1() / static_cast<double>(m - 1) > target && m < cap)
        m = 2 * m - 1;
    return static_cast<int>(m);
}

std::vector<double> shooting_grid(const ShootOptions& options)
{
    const int k = options.sweep_points;
    if (k < 2 || !(options.u0_min > 0.0) || !(options.u0_max > options.u0_min))
        throw DomainError("shooting_grid: invalid sweep bounds");
    std::vector<double> grid(k);
    const double lmin = std::log(options.u0_min), lmax = std::log(options.u0_max);
    for (int i = 0; i < k; ++i)
        grid[i] = (i == 0) ? options.u0_min : (i == k - 1) ? options.u0_max : std::exp(lmin + (lmax - lmin) * i / (k - 1));
    return grid;
}

ShootOutcome shoot(const ProblemParams& params, double lambda, const ShootOptions& options)
{
    const double lambda_one = params.lambda_trivial() + find_L_one(params, options.degree);
    if (!(lambda < lambda_one))
        throw RejectedLambda("lambda=" + std::to_string(lambda) + " is not below lambda_1=" +
                             std::to_string(lambda_one) + "; no positive solution exists");
    const double theta1 = params.theta1();
    auto inside = [&](const std::optional<double>& z) { return z && *z <= theta1; };

    ShootOutcome out{ShootKind::NoSolution, std::nullopt, {}};
    for (double u0 : shooting_grid(options))
        out.evidence.push_back({u0, integrate_shoot(params, lambda, u0, options).first_zero});

    for (std::size_t i = 0; i + 1 < out.evidence.size(); ++i) {
        const auto& a = out.evidence[i];
        const auto& b = out.evidence[i + 1];
        if (inside(a.first_zero) == inside(b.first_zero))
            continue;
        double outside_u0 = inside(a.first_zero) ? b.u0 : a.u0;
        double inside_u0 = inside(a.first_zero) ? a.u0 : b.u0;
        double inside_zero = inside(a.first_zero) ? *a.first_zero : *b.first_zero;
        for (int it = 0; it < options.max_bisections && theta1 - inside_zero > options.match_tol; ++it) {
            const double mid = std::sqrt(outside_u0 * inside_u0);
            if (mid == outside_u0 || mid == inside_u0)
                break;
            const auto z = integrate_shoot(params, lambda, mid, options).first_zero;
            if (inside(z)) {
                inside_u0 = mid;
                inside_zero = *z;
            } else {
                outside_u0 = mid;
            }
        }
        if (theta1 - inside_zero > options.match_tol)
            throw ConvergenceError("shoot: bisection on u0 did not reach the boundary tolerance");
        out.kind = ShootKind::Solution;
        out.profile = integrate_shoot(params, lambda, inside_u0, options, true).profile;
        return out;
    }
    return out;
}

double residual(const SolutionProfile& profile, const ProblemParams& params, double lambda)
{
    check_profile_grid(profile, 102);
    const auto& t = profile.thetas;
    const auto& u = profile.values;
    const auto& du = profile.dvalues;
    const std::size_t m = t.size();
    const double h = (t.back() - t.front()) / static_cast<double>(m - 1);
    const double n1 = params.n() - 1.0;
    const double p = params.p();
    double worst = 0.0;
    // Fourth-order five-point second difference; nodes 0, 1, m-2, m-1 lack a full stencil.
    for (std::size_t i = 2; i + 2 < m; ++i) {
        const double d2 =
            (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h);
        const double r = d2 + n1 * du[i] / std::tanh(t[i]) + lambda * u[i] + signed_pow(u[i], p);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double sobolev_constant(double n)
{
    if (!(n > 2.0))
        throw DomainError("sobolev_constant: n must exceed 2");
    return std::numbers::pi * n * (n - 2.0) * std::pow(gamma_real(0.5 * n) / gamma_real(n), 2.0 / n);
}

double sphere_area(double n)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma_real(0.5 * n);
}

double rayleigh_quotient(const SolutionProfile& profile, const ProblemParams& params, double lambda)
{
    check_profile_grid(profile, 3);
    const std::size_t m = profile.thetas.size();
    const double n = params.n();
    const double h = profile.thetas.back() / static_cast<double>(m - 1);
    const double q = 2.0 * n / (n - 2.0);
    std::vector<double> grad(m), mass(m), crit(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double w = std::pow(std::sinh(profile.thetas[i]), n - 1.0);
        const double u = profile.values[i];
        grad[i] = profile.dvalues[i] * profile.dvalues[i] * w;
        mass[i] = u * u * w;
        crit[i] = std::pow(std::abs(u), q) * w;
    }
    const double omega = sphere_area(n);
    const double den = omega * simpson(crit, h);
    if (!(den > 0.0))
        throw DomainError("rayleigh_quotient: degenerate profile");
    return omega * (simpson(grad, h) - lambda * simpson(mass, h)) / std::pow(den, (n - 2.0) / n);
}

int count_crossings(const ProblemParams& params, double lambda, std::span<const double> u0_grid,
                    const ShootOptions& options)
{
    int crossings = 0;
    std::optional<bool> previous;
    for (double u0 : u0_grid) {
        const auto z = integrate_shoot(params, lambda, u0, options).first_zero;
        const bool inside = z && *z <= params.theta1();
        if (previous && *previous != inside)
            ++crossings;
        previous = inside;
    }
    return crossings;
}

} // namespace hypgap
