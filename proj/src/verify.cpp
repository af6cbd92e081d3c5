#include "hypgap/verify.hpp"

#include "hypgap/errors.hpp"
#include "hypgap/gap.hpp"
#include "hypgap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hypgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Samples f at theta = start / 2^k and extrapolates in theta^2.
template <class F>
Extrapolation extrapolate_to_zero(F&& f, int terms, double start, std::vector<double>& thetas)
{
    if (terms < 2)
        throw DomainError("extrapolation needs at least two terms");
    std::vector<int> cells;
    std::vector<double> raw;
    double theta = start;
    for (int k = 0; k < terms; ++k, theta *= 0.5) {
        cells.push_back(1 << k);
        thetas.push_back(theta);
        raw.push_back(f(theta));
    }
    return richardson_even(cells, raw);
}

template <class Eval>
YNuEval y_nu_with(Eval&& eval, Degree degree, Order order, double theta, double h)
{
    const double nu = order.nu;
    auto y_at = [&](double t) {
        const LegendreEval e = eval(t);
        const double sh = std::sinh(0.5 * t);
        return e.raised / (std::sinh(t) * e.value) + nu / (2.0 * sh * sh);
    };
    YNuEval out{};
    out.y = y_at(theta);
    out.derivative_fd = (-y_at(theta + 2.0 * h) + 8.0 * y_at(theta + h) - 8.0 * y_at(theta - h) +
                         y_at(theta - 2.0 * h)) / (12.0 * h);
    const double s = std::sinh(theta);
    out.rhs = -s * out.y * out.y + 2.0 * (nu - std::cosh(theta)) / s * out.y - degree.L / s;
    out.riccati_residual = std::abs(out.derivative_fd - out.rhs);
    return out;
}

template <class F>
double five_point_derivative(F&& f, double x, double h)
{
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

std::string format_double(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

CheckReport make_report(std::string name, double residual, double tolerance, std::vector<double> grid,
                        std::string notes = {})
{
    CheckReport r;
    r.name = std::move(name);
    r.max_residual = residual;
    r.tolerance = tolerance;
    r.pass = residual <= tolerance;
    r.grid = std::move(grid);
    r.notes = std::move(notes);
    return r;
}

} // namespace

WronskianResult wronskian_limit(const ProblemParams& params, double L_star, double L_one, int terms)
{
    const double alpha = params.alpha();
    WronskianResult out{};
    out.magnitude_expected = 2.0 * std::abs(std::sin(std::numbers::pi * alpha)) / std::numbers::pi;
    auto w_sinh = [&](double theta) {
        const LegendreEval y1 = legendre_series(Degree{L_one}, Order{alpha}, theta);
        const LegendreEval y2 = legendre_series(Degree{L_star}, Order{-alpha}, theta);
        return (y1.dtheta * y2.value - y2.dtheta * y1.value) * std::sinh(theta);
    };
    const Extrapolation ex = extrapolate_to_zero(w_sinh, terms, 1e-2, out.thetas);
    out.samples = ex.raw;
    out.limit_estimate = ex.value;
    out.extrapolation_error = ex.estimate;
    out.observed_sign = ex.value > 0.0 ? 1 : (ex.value < 0.0 ? -1 : 0);
    if (!(ex.estimate <= 1e-6))
        throw ConvergenceError("wronskian_limit: extrapolation did not settle (last correction " +
                               format_double(ex.estimate) + ")");
    return out;
}

WronskianResult wronskian_limit(const ProblemParams& params)
{
    return wronskian_limit(params, find_L_star(params), find_L_one(params));
}

double wronskian_integral_gap(const ProblemParams& params, double L_star, double L_one, double limit,
                              int gauss_panels)
{
    if (gauss_panels < 1)
        throw DomainError("wronskian_integral_gap: need at least one panel");
    const double theta1 = params.theta1();
    const double alpha = params.alpha();
    const LegendreCurve y1(Degree{L_one}, Order{alpha}, theta1);
    const LegendreCurve y2(Degree{L_star}, Order{-alpha}, theta1);
    const GaussRule rule = gauss_legendre(8);
    const double width = theta1 / gauss_panels;
    double integral = 0.0;
    for (int k = 0; k < gauss_panels; ++k) {
        const double mid = (k + 0.5) * width;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double t = mid + 0.5 * width * rule.nodes[j];
            integral += 0.5 * width * rule.weights[j] * std::sinh(t) * y1(t).value * y2(t).value;
        }
    }
    return std::abs(limit - (L_one - L_star) * integral);
}

PohozaevEval pohozaev_from(const ProblemParams& params, Degree degree, double theta, const LegendreEval& plus,
                           const LegendreEval& minus)
{
    const double n = params.n();
    const double alpha = params.alpha();
    const double L = degree.L;
    const double lambda = L + params.lambda_trivial();
    const double s = std::sinh(theta);
    const double c = std::cosh(theta);
    const double ct = c / s;

    // v = y1 y2 with both factors solving y'' + coth y' + k y = 0, k = L - alpha^2 / sinh^2.
    const double k = L - alpha * alpha / (s * s);
    const double dk = 2.0 * alpha * alpha * c / (s * s * s);
    const double v0 = plus.value * minus.value;
    const double v1 = plus.dtheta * minus.value + plus.value * minus.dtheta;
    const double v2 = 2.0 * plus.dtheta * minus.dtheta - ct * v1 - 2.0 * k * v0;
    const double v3 = -3.0 * ct * v2 - (2.0 * ct * ct + 4.0 * k - 1.0 / (s * s)) * v1 - (2.0 * dk + 4.0 * k * ct) * v0;

    // T = q v, q = sinh^{4-n}.
    const double q0 = std::pow(s, 4.0 - n);
    const double q1 = (4.0 - n) * std::pow(s, 3.0 - n) * c;
    const double q2 = (4.0 - n) * ((3.0 - n) * std::pow(s, 2.0 - n) * c * c + q0);
    const double q3 = (4.0 - n) * ((3.0 - n) * (2.0 - n) * std::pow(s, 1.0 - n) * c * c * c +
                                   (10.0 - 3.0 * n) * std::pow(s, 3.0 - n) * c);
    const double T0 = q0 * v0;
    const double T1 = q1 * v0 + q0 * v1;
    const double T2 = q2 * v0 + 2.0 * q1 * v1 + q0 * v2;
    const double T3 = q3 * v0 + 3.0 * q2 * v1 + 3.0 * q1 * v2 + q0 * v3;

    const double a1 = 0.25 * T3;
    const double a2 = 0.75 * (n - 3.0) * ct * T2;
    const double a3 = (0.25 * ct * ct * (n - 3.0) * (2.0 * n - 11.0) + lambda + 0.25 * (n - 7.0)) * T1;
    const double a4 = (n - 3.0) * (ct * (lambda - 2.0) - ct * ct * ct * (n - 4.0)) * T0;

    PohozaevEval out{};
    out.theta = theta;
    out.T = T0;
    out.dT = T1;
    out.B = (n - 1.0) / n * std::pow(s, 2.0 * n - 4.0) * (T1 + (n - 4.0) * ct * T0);
    out.A_residual = a1 + a2 + a3 + a4;
    out.A_scale = std::max({1.0, std::abs(a1) + std::abs(a2) + std::abs(a3) + std::abs(a4)});
    return out;
}

PohozaevEval pohozaev_eval(const ProblemParams& params, Degree degree, double theta, const LegendreOptions& options)
{
    if (!(theta > 0.0 && theta < params.theta1()))
        throw DomainError("pohozaev_eval: theta must lie in (0, theta1)");
    const double alpha = params.alpha();
    return pohozaev_from(params, degree, theta, legendre_p(degree, Order{alpha}, theta, options),
                         legendre_p(degree, Order{-alpha}, theta, options));
}

YNuEval y_nu_eval(Degree degree, Order order, double theta, double h, const LegendreOptions& options)
{
    if (!(h > 0.0) || !(theta > 2.0 * h))
        throw DomainError("y_nu_eval: need theta > 2h > 0");
    return y_nu_with([&](double t) { return legendre_p(degree, order, t, options); }, degree, order, theta, h);
}

YNuLimit y_nu_limit(Degree degree, Order order, int terms)
{
    std::vector<double> thetas;
    auto y = [&](double t) {
        const LegendreEval e = legendre_series(degree, order, t);
        const double sh = std::sinh(0.5 * t);
        return e.raised / (std::sinh(t) * e.value) + order.nu / (2.0 * sh * sh);
    };
    // y_nu is the difference of two ~1/theta^2 terms; starting at 0.2 keeps the cancellation mild.
    const Extrapolation ex = extrapolate_to_zero(y, terms, 0.2, thetas);
    return {ex.value, -degree.L / (2.0 * (1.0 - order.nu)), ex.estimate};
}

CheckReport energy_identity(std::span<const double> thetas, std::span<const double> v, std::span<const double> dv,
                            const ProblemParams& params, double lambda, bool include_power, double tolerance)
{
    const std::size_t m = thetas.size();
    if (m < 5 || v.size() != m || dv.size() != m)
        throw DomainError("energy_identity: need at least 5 matching nodes");
    const double h = (thetas.back() - thetas.front()) / static_cast<double>(m - 1);
    const double alpha = params.alpha();
    const double mu = lambda - params.lambda_trivial();
    const double p = params.p();
    std::vector<double> E(m), source(m);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double s = std::sinh(thetas[i]);
        const double G = -alpha * alpha + mu * s * s;
        const double dG = 2.0 * mu * s * std::cosh(thetas[i]);
        const double kinetic = s == 0.0 ? 0.0 : s * s * dv[i] * dv[i];
        const double power = include_power ? 2.0 / (p + 1.0) * std::pow(std::abs(v[i]), p + 1.0) : 0.0;
        E[i] = kinetic + power + G * v[i] * v[i];
        source[i] = dG * v[i] * v[i];
        scale = std::max(scale, std::abs(source[i]));
    }
    if (scale == 0.0)
        scale = 1.0;
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < m; ++i) {
        const double dE = (-E[i + 2] + 8.0 * E[i + 1] - 8.0 * E[i - 1] + E[i - 2]) / (12.0 * h);
        worst = std::max(worst, std::abs(dE - source[i]));
    }
    double worst_drop = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i)
        worst_drop = std::max(worst_drop, (E[i] - E[i + 1]) / h);
    CheckReport r = make_report("energy_identity", worst / scale, tolerance,
                                std::vector<double>(thetas.begin(), thetas.end()));
    r.notes = "worst_decrease=" + format_double(worst_drop / scale);
    return r;
}

std::vector<CheckReport> energy_monotonicity(const SolutionProfile& profile, const ProblemParams& params,
                                             double lambda, double tolerance)
{
    if (!(lambda > params.lambda_trivial()))
        throw DomainError("energy_monotonicity: needs lambda > n(n-2)/4");
    const std::size_t m = profile.thetas.size();
    if (profile.values.size() != m || profile.dvalues.size() != m)
        throw DomainError("energy_monotonicity: malformed profile");
    const double alpha = params.alpha();
    std::vector<double> v(m), dv(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = profile.thetas[i];
        if (t == 0.0) {
            v[i] = 0.0; // sinh^{-alpha} -> 0; the kinetic term vanishes in the limit too
            dv[i] = 0.0;
            continue;
        }
        const double w = std::pow(std::sinh(t), -alpha);
        v[i] = w * profile.values[i];
        dv[i] = w * (profile.dvalues[i] - alpha / std::tanh(t) * profile.values[i]);
    }
    CheckReport identity = energy_identity(profile.thetas, v, dv, params, lambda, true, tolerance);

    // Recompute E and the scale for the monotonicity report.
    const double mu = lambda - params.lambda_trivial();
    const double p = params.p();
    const double h = profile.thetas.back() / static_cast<double>(m - 1);
    double scale = 0.0, worst_drop = 0.0, previous = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double s = std::sinh(profile.thetas[i]);
        scale = std::max(scale, std::abs(2.0 * mu * s * std::cosh(profile.thetas[i]) * v[i] * v[i]));
        const double E = (s == 0.0 ? 0.0 : s * s * dv[i] * dv[i]) + 2.0 / (p + 1.0) * std::pow(std::abs(v[i]), p + 1.0) +
                         (-alpha * alpha + mu * s * s) * v[i] * v[i];
        if (i > 0)
            worst_drop = std::max(worst_drop, (previous - E) / h);
        previous = E;
    }
    if (scale == 0.0)
        scale = 1.0;
    CheckReport monotone = make_report("energy_monotone", worst_drop / scale, tolerance, {},
                                       "largest decrease of E per unit theta, relative to max |G' v^2|");
    return {std::move(identity), std::move(monotone)};
}

std::vector<CheckReport> run_suite(const ProblemParams& params, const SuiteOptions& options)
{
    const VerifyTolerances& tol = options.tolerances;
    const double theta1 = params.theta1();
    const double alpha = params.alpha();
    std::vector<CheckReport> reports;

    std::vector<double> grid;
    for (int i = 1; i <= options.grid_points; ++i)
        grid.push_back(theta1 * i / (options.grid_points + 1));

    auto guarded = [&](const std::string& name, double tolerance, auto&& body) {
        try {
            reports.push_back(body());
        } catch (const std::exception& e) {
            reports.push_back(make_report(name, kInf, tolerance, grid, std::string("error: ") + e.what()));
        }
    };

    double L_star = 0.0, L_one = 0.0;
    try {
        L_star = options.L_star_override ? *options.L_star_override : find_L_star(params, options.degree);
        L_one = find_L_one(params, options.degree);
    } catch (const std::exception& e) {
        reports.push_back(make_report("gap_order", kInf, 0.0, {}, std::string("error: ") + e.what()));
        return reports;
    }
    reports.push_back(make_report("gap_order", std::max({L_star - L_one, 0.25 - L_one, -L_star}), 0.0, {},
                                  "L_star=" + format_double(L_star) + " L_one=" + format_double(L_one)));

    double limit = 0.0;
    guarded("wronskian_limit", tol.wronskian, [&] {
        const WronskianResult w = wronskian_limit(params, L_star, L_one);
        limit = w.limit_estimate;
        return make_report("wronskian_limit", std::abs(std::abs(w.limit_estimate) - w.magnitude_expected),
                           tol.wronskian, w.thetas,
                           "limit=" + format_double(w.limit_estimate) + " expected_magnitude=" +
                               format_double(w.magnitude_expected) +
                               " observed_sign=" + (w.observed_sign >= 0 ? "+" : "-"));
    });
    guarded("wronskian_integral", tol.wronskian_integral, [&] {
        if (limit == 0.0)
            throw ConvergenceError("no Wronskian limit available");
        return make_report("wronskian_integral",
                           wronskian_integral_gap(params, L_star, L_one, limit) / std::abs(limit),
                           tol.wronskian_integral, {});
    });

    const std::vector<double> degrees{0.25 * L_star, 0.5 * L_star, L_star};
    guarded("A_residual", tol.a_residual, [&] {
        double worst_A = 0.0, worst_B = -kInf;
        for (double L : degrees) {
            const LegendreCurve plus(Degree{L}, Order{alpha}, theta1);
            const LegendreCurve minus(Degree{L}, Order{-alpha}, theta1);
            for (double t : grid) {
                const PohozaevEval e = pohozaev_from(params, Degree{L}, t, plus(t), minus(t));
                worst_A = std::max(worst_A, std::abs(e.A_residual) / e.A_scale);
                worst_B = std::max({worst_B, e.B, -e.T});
            }
        }
        reports.push_back(make_report("B_negative", worst_B, 0.0, grid,
                                      "max over L in {L*/4, L*/2, L*} of max(B, -T)"));
        return make_report("A_residual", worst_A, tol.a_residual, grid, "relative to the largest terms");
    });
    if (std::none_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.name == "B_negative"; }))
        reports.push_back(make_report("B_negative", kInf, 0.0, grid, "A_residual block failed"));

    guarded("riccati", tol.riccati, [&] {
        double worst_res = 0.0, worst_y = -kInf, worst_lim = 0.0;
        for (double L : degrees) {
            for (double nu : {alpha, -alpha}) {
                const LegendreCurve curve(Degree{L}, Order{nu}, theta1);
                for (double t : grid) {
                    const YNuEval e = y_nu_with(curve, Degree{L}, Order{nu}, t, 1e-5);
                    worst_res = std::max(worst_res, e.riccati_residual);
                    worst_y = std::max(worst_y, e.y);
                }
                const YNuLimit lim = y_nu_limit(Degree{L}, Order{nu});
                worst_lim = std::max(worst_lim, std::abs(lim.estimate - lim.expected));
            }
        }
        reports.push_back(make_report("y_negative", worst_y, 0.0, grid, "max of y_nu, nu = +-alpha"));
        reports.push_back(make_report("y_limit", worst_lim, tol.y_limit, {}, "vs -L/(2(1-nu))"));
        return make_report("riccati", worst_res, tol.riccati, grid, "five-point difference, h=1e-5");
    });
    for (const char* name : {"y_negative", "y_limit"}) {
        if (std::none_of(reports.begin(), reports.end(), [&](const CheckReport& r) { return r.name == name; }))
            reports.push_back(make_report(name, kInf, 0.0, grid, "riccati block failed"));
    }

    guarded("raising", tol.relations, [&] {
        double worst_up = 0.0, worst_down = 0.0;
        for (double L : {0.5 * L_star, L_one}) {
            for (double nu : {alpha, -alpha}) {
                const LegendreCurve curve(Degree{L}, Order{nu}, theta1);
                for (double t : grid) {
                    const double h = 1e-3 * std::min(t, 1.0);
                    const LegendreEval e = curve(t);
                    const double ct = 1.0 / std::tanh(t);
                    const double up = five_point_derivative([&](double x) { return curve(x).value; }, t, h);
                    const double up_rhs = e.raised + nu * ct * e.value;
                    worst_up = std::max(worst_up, std::abs(up - up_rhs) / std::max(1.0, std::abs(up_rhs)));
                    const double down = five_point_derivative([&](double x) { return curve(x).raised; }, t, h);
                    const double down_rhs = (-L - nu * (nu + 1.0)) * e.value - (nu + 1.0) * ct * e.raised;
                    worst_down = std::max(worst_down, std::abs(down - down_rhs) / std::max(1.0, std::abs(down_rhs)));
                }
            }
        }
        reports.push_back(make_report("lowering", worst_down, tol.relations, grid));
        return make_report("raising", worst_up, tol.relations, grid);
    });
    if (std::none_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.name == "lowering"; }))
        reports.push_back(make_report("lowering", kInf, tol.relations, grid, "raising block failed"));

    guarded("series_continuation", tol.overlap, [&] {
        LegendreOptions early;
        early.theta_switch = 0.5;
        std::vector<double> window;
        for (int i = 0; i <= 110; ++i)
            window.push_back(0.6 + 0.01 * i);
        double worst = 0.0;
        for (double L : {L_star, L_one}) {
            for (double nu : {alpha, -alpha}) {
                const LegendreCurve curve(Degree{L}, Order{nu}, window.back(), early);
                double peak = 0.0, diff = 0.0;
                for (double t : window) {
                    const double a = legendre_series(Degree{L}, Order{nu}, t).value;
                    peak = std::max(peak, std::abs(a));
                    diff = std::max(diff, std::abs(curve(t).value - a));
                }
                worst = std::max(worst, diff / peak);
            }
        }
        return make_report("series_continuation", worst, tol.overlap, window, "relative to the window maximum");
    });

    guarded("energy_identity", tol.energy, [&] {
        const double lambda = params.lambda_trivial() + 0.5 * (L_star + L_one);
        const ShootOutcome out = shoot(params, lambda, options.shoot);
        if (out.kind != ShootKind::Solution || !out.profile)
            throw ConvergenceError("no solution found at lambda=" + format_double(lambda));
        auto pair = energy_monotonicity(*out.profile, params, lambda, tol.energy);
        pair[0].notes += " lambda=" + format_double(lambda);
        reports.push_back(std::move(pair[1]));
        return std::move(pair[0]);
    });
    if (std::none_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.name == "energy_monotone"; }))
        reports.push_back(make_report("energy_monotone", kInf, tol.energy, {}, "energy block failed"));

    std::stable_sort(reports.begin(), reports.end(),
                     [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
    return reports;
}

} // namespace hypgap
