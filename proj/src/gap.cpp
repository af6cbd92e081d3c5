#include "hypgap/gap.hpp"

#include "hypgap/errors.hpp"
#include "hypgap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace hypgap {

std::optional<double> first_zero_theta(Degree degree, Order order, double theta_cap,
                                       const ZeroSearchOptions& options, const LegendreOptions& legendre)
{
    if (options.scan_points < 2)
        throw DomainError("first_zero_theta: need at least two scan points");
    const LegendreCurve curve(degree, order, theta_cap, legendre);
    const double start = std::min(options.scan_start, theta_cap / options.scan_points);
    const double step = (theta_cap - start) / (options.scan_points - 1);

    auto value = [&](double t) { return curve(t).value; };
    double t_prev = start;
    double v_prev = value(t_prev);
    if (v_prev == 0.0)
        return t_prev;
    for (int i = 1; i < options.scan_points; ++i) {
        const double t = (i == options.scan_points - 1) ? theta_cap : start + i * step;
        const double v = value(t);
        if (v == 0.0)
            return t;
        if ((v < 0.0) != (v_prev < 0.0)) {
            double lo = t_prev, hi = t;
            const bool lo_negative = v_prev < 0.0;
            while (hi - lo > options.theta_tol) {
                const double mid = 0.5 * (lo + hi);
                const double vm = value(mid);
                if (vm == 0.0)
                    return mid;
                ((vm < 0.0) == lo_negative ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        t_prev = t;
        v_prev = v;
    }
    return std::nullopt;
}

DegreeSearchResult find_first_degree(Order order, const ProblemParams& params, const DegreeSearchOptions& options)
{
    const double theta1 = params.theta1();
    LegendreOptions legendre = options.legendre;
    legendre.theta_max = params.theta_max();
    // The first zero moves strictly inward as L grows, so "zero at or before theta1" is an
    // upper set in L.
    auto zero_at = [&](double L) { return first_zero_theta(Degree{L}, order, theta1, options.zero, legendre); };

    double lo = 0.0;
    double hi = options.L_start;
    std::optional<double> z = zero_at(hi);
    while (!z) {
        lo = hi;
        hi *= 2.0;
        if (hi > options.L_limit)
            throw BracketFailure("find_first_degree: no zero inside theta1 for L up to " +
                                 std::to_string(options.L_limit));
        z = zero_at(hi);
    }
    if (theta1 - *z <= options.theta_match_tol)
        return {hi, hi - lo};
    while (hi - lo > options.rel_bracket_tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        const auto zm = zero_at(mid);
        if (zm) {
            hi = mid;
            if (theta1 - *zm <= options.theta_match_tol)
                return {hi, hi - lo};
        } else {
            lo = mid;
        }
    }
    return {0.5 * (lo + hi), hi - lo};
}

double find_L_star(const ProblemParams& params, const DegreeSearchOptions& options)
{
    return find_first_degree(Order{-params.alpha()}, params, options).L;
}

double find_L_one(const ProblemParams& params, const DegreeSearchOptions& options)
{
    return find_first_degree(Order{params.alpha()}, params, options).L;
}

GapResult gap_interval(const ProblemParams& params, const DegreeSearchOptions& options)
{
    const auto star = find_first_degree(Order{-params.alpha()}, params, options);
    const auto one = find_first_degree(Order{params.alpha()}, params, options);
    if (!(star.L > 0.0 && star.L < one.L))
        throw InvariantViolation("gap_interval: expected 0 < L* < L1, got L*=" + std::to_string(star.L) +
                                 " L1=" + std::to_string(one.L));
    if (!(one.L >= 0.25))
        throw InvariantViolation("gap_interval: L1 below the spectral bottom 1/4");
    const double base = params.lambda_trivial();
    return GapResult{star.L, one.L, base, base + star.L, base + one.L, std::max(star.bracket_width, one.bracket_width)};
}

// ---------------------------------------------------------------------------------------

namespace {

/// -(a(x) u')' = mu b(x) u on (0, X) with b(x) = x^beta s(x), natural condition at 0 and
/// u(X) = 0. Cell-centred finite volumes with exact face coefficients and quadrature cell masses.
struct SturmLiouville {
    double X;
    double beta;
    std::function<double(double)> face;
    std::function<double(double)> smooth;
};

double cell_mass(const SturmLiouville& p, const GaussRule& g, double a, double b, bool first)
{
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    const double s0 = first ? p.smooth(0.0) : 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double x = mid + half * g.nodes[k];
        acc += g.weights[k] * std::pow(x, p.beta) * (p.smooth(x) - s0);
    }
    acc *= half;
    if (first)
        acc += s0 * std::pow(b, p.beta + 1.0) / (p.beta + 1.0);
    return acc;
}

double smallest_eigenvalue(const SturmLiouville& p, int m, const EigenOptions& options)
{
    if (m < 100)
        throw DomainError("finite-volume eigen oracle needs m >= 100 cells");
    const double h = p.X / m;
    const GaussRule g = gauss_legendre(options.gauss_points);

    std::vector<double> face(m + 1);
    face[0] = 0.0;
    for (int j = 1; j <= m; ++j)
        face[j] = p.face(j * h);
    std::vector<double> mass(m);
    for (int i = 0; i < m; ++i)
        mass[i] = cell_mass(p, g, i * h, (i + 1) * h, i == 0);

    // K: diag_i = (face_i + face_{i+1})/h, last row Dirichlet at half a cell: face_m doubled.
    std::vector<double> diag(m), off(m - 1);
    for (int i = 0; i < m; ++i)
        diag[i] = (face[i] + (i == m - 1 ? 2.0 : 1.0) * face[i + 1]) / h;
    for (int i = 0; i + 1 < m; ++i)
        off[i] = -face[i + 1] / h;

    // LDL^T-style forward elimination, reused every iteration.
    std::vector<double> piv(m), mult(m, 0.0);
    piv[0] = diag[0];
    for (int i = 1; i < m; ++i) {
        mult[i] = off[i - 1] / piv[i - 1];
        piv[i] = diag[i] - mult[i] * off[i - 1];
    }
    auto solve = [&](std::vector<double>& x) {
        for (int i = 1; i < m; ++i)
            x[i] -= mult[i] * x[i - 1];
        x[m - 1] /= piv[m - 1];
        for (int i = m - 2; i >= 0; --i)
            x[i] = (x[i] - off[i] * x[i + 1]) / piv[i];
    };
    // Sums of positive terms only, so the quotient carries no cancellation.
    auto rayleigh = [&](const std::vector<double>& u) {
        double num = 2.0 * face[m] * u[m - 1] * u[m - 1] / h;
        for (int j = 1; j < m; ++j) {
            const double d = u[j] - u[j - 1];
            num += face[j] * d * d / h;
        }
        double den = 0.0;
        for (int i = 0; i < m; ++i)
            den += mass[i] * u[i] * u[i];
        return num / den;
    };

    std::vector<double> u(m);
    for (int i = 0; i < m; ++i)
        u[i] = std::cos(0.5 * std::numbers::pi * (i + 0.5) / m);
    double mu = rayleigh(u);
    for (int it = 0; it < options.max_iterations; ++it) {
        for (int i = 0; i < m; ++i)
            u[i] *= mass[i];
        solve(u);
        const double norm = *std::max_element(u.begin(), u.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        });
        for (double& x : u)
            x /= norm;
        const double next = rayleigh(u);
        if (std::abs(next - mu) <= options.rel_tol * std::abs(next))
            return next;
        mu = next;
    }
    throw ConvergenceError("inverse iteration did not converge");
}

double sinh_over_x(double x)
{
    return x == 0.0 ? 1.0 : std::sinh(x) / x;
}

} // namespace

double fd_eigen_L_one(const ProblemParams& params, int m, const EigenOptions& options)
{
    const double e = params.n() - 1.0;
    SturmLiouville p{params.theta1(), e, [e](double x) { return std::pow(std::sinh(x), e); },
                     [e](double x) { return std::pow(sinh_over_x(x), e); }};
    return smallest_eigenvalue(p, m, options) - params.lambda_trivial();
}

double fd_eigen_L_star(const ProblemParams& params, int m, const EigenOptions& options)
{
    const double beta = 3.0 - params.n();
    SturmLiouville p{std::tanh(0.5 * params.theta1()), beta, [beta](double r) { return std::pow(r, beta); },
                     [](double r) {
                         const double q = 1.0 - r * r;
                         return 4.0 / (q * q);
                     }};
    return smallest_eigenvalue(p, m, options);
}

Extrapolation richardson_even(const std::vector<int>& cells, const std::vector<double>& raw)
{
    const std::size_t k = raw.size();
    if (k == 0 || cells.size() != k)
        throw DomainError("richardson_even: need matching, non-empty inputs");
    for (std::size_t i = 1; i < k; ++i)
        if (cells[i] != 2 * cells[i - 1])
            throw DomainError("richardson_even: cell counts must double");
    std::vector<std::vector<double>> table(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        table[i][0] = raw[i];
        double factor = 1.0;
        for (std::size_t j = 1; j <= i; ++j) {
            factor *= 4.0;
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
        }
    }
    const double top = table[k - 1][k - 1];
    const double prev = k > 1 ? table[k - 2][k - 2] : top;
    return {cells, raw, top, std::abs(top - prev)};
}

namespace {

template <class F>
Extrapolation extrapolate(F&& solve, int m0, int levels)
{
    if (levels < 1)
        throw DomainError("extrapolation needs at least one level");
    std::vector<int> cells;
    std::vector<double> raw;
    for (int l = 0, m = m0; l < levels; ++l, m *= 2) {
        cells.push_back(m);
        raw.push_back(solve(m));
    }
    return richardson_even(cells, raw);
}

} // namespace

Extrapolation fd_eigen_L_one_extrapolated(const ProblemParams& params, int m0, int levels, const EigenOptions& options)
{
    return extrapolate([&](int m) { return fd_eigen_L_one(params, m, options); }, m0, levels);
}

Extrapolation fd_eigen_L_star_extrapolated(const ProblemParams& params, int m0, int levels, const EigenOptions& options)
{
    return extrapolate([&](int m) { return fd_eigen_L_star(params, m, options); }, m0, levels);
}

} // namespace hypgap
