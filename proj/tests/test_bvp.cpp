#include "hypgap/bvp.hpp"
#include "hypgap/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace hypgap;

namespace {

constexpr double pi = std::numbers::pi;

SolutionProfile planted(int m, double theta1, double (*u)(double), double (*du)(double))
{
    SolutionProfile p;
    const double h = theta1 / (m - 1);
    for (int i = 0; i < m; ++i) {
        const double t = i * h;
        p.thetas.push_back(t);
        p.values.push_back(u(t));
        p.dvalues.push_back(du(t));
    }
    p.u0 = p.values.front();
    return p;
}

double eig_u(double t) { return t == 0.0 ? pi : std::sin(pi * t) / std::sinh(t); }
double eig_du(double t)
{
    if (t == 0.0)
        return 0.0;
    const double s = std::sinh(t);
    return (pi * std::cos(pi * t) * s - std::sin(pi * t) * std::cosh(t)) / (s * s);
}

SolutionProfile solved(const ProblemParams& params, double lambda, const ShootOptions& opt = {})
{
    const ShootOutcome out = shoot(params, lambda, opt);
    REQUIRE(out.kind == ShootKind::Solution);
    REQUIRE(out.profile);
    return *out.profile;
}

} // namespace

TEST_CASE("centre coefficient balances the equation")
{
    for (double n : {2.2, 3.0, 3.7}) {
        const ProblemParams p(n, 1.0);
        for (double lambda : {-1.0, 0.5, 7.0}) {
            for (double u0 : {1e-3, 0.8, 40.0}) {
                const double a = centre_series(p, lambda, u0).a;
                const double f = lambda * u0 + std::pow(u0, p.p());
                CHECK(std::abs(2.0 * n * a + f) <= 1e-15 * std::max(1.0, std::abs(f)));
            }
        }
    }
}

TEST_CASE("solution at lambda = 1 + pi^2/2 vanishes at theta1")
{
    const double lambda = 1.0 + pi * pi / 2.0;
    const SolutionProfile prof = solved(ProblemParams(3.0, 1.0), lambda);
    // Shoot the same height on a larger ball so the zero is reported rather than cut off.
    const Shot s = integrate_shoot(ProblemParams(3.0, 1.5), lambda, prof.u0);
    REQUIRE(s.first_zero);
    CHECK(std::abs(*s.first_zero - 1.0) <= 1e-8);
}

TEST_CASE("small heights follow the linear problem")
{
    // n = 3: u ~ sin(k theta)/sinh(theta), k = sqrt(lambda - 1)
    const double k = pi / 1.5;
    const Shot s = integrate_shoot(ProblemParams(3.0, 2.0), 1.0 + k * k, 1e-7);
    REQUIRE(s.first_zero);
    CHECK(std::abs(*s.first_zero - 1.5) < 1e-7);

    // other n: the zero of the regular Legendre solution with L = lambda - n(n-2)/4
    // n = 3.8 keeps p - 1 small enough for the nonlinear shift to be visible
    const ProblemParams p(3.8, 3.0);
    const double L = 4.0;
    const auto lin = first_zero_theta(Degree{L}, Order{p.alpha()}, 3.0);
    REQUIRE(lin);
    double prev_gap = 1e300;
    for (double u0 : {1e-1, 1e-2, 1e-3}) {
        const Shot sh = integrate_shoot(p, p.lambda_trivial() + L, u0);
        REQUIRE(sh.first_zero);
        const double gap = std::abs(*sh.first_zero - *lin);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-7);
}

TEST_CASE("lambda at or above lambda_1 is rejected")
{
    const ProblemParams p(3.0, 1.0);
    CHECK_THROWS_AS(shoot(p, 1.0 + pi * pi + 1.0), RejectedLambda);
    CHECK_THROWS_AS(shoot(p, 12.0), RejectedLambda);
    CHECK_THROWS_AS(integrate_shoot(p, 5.0, 0.0), DomainError);
}

TEST_CASE("mid-interval solution")
{
    const ProblemParams params(3.0, 1.0);
    const double lambda = 0.5 * ((1.0 + pi * pi / 4.0) + (1.0 + pi * pi));
    const SolutionProfile prof = solved(params, lambda);
    CHECK(prof.residual_max <= 1e-6 * std::max(1.0, std::pow(prof.u0, params.p())));
    CHECK(prof.residual_max == residual(prof, params, lambda));
    CHECK(rayleigh_quotient(prof, params, lambda) < sobolev_constant(3.0));

    for (std::size_t i = 1; i + 1 < prof.values.size(); ++i)
        REQUIRE(prof.values[i] > 0.0);
    CHECK(std::abs(prof.values.back()) <= 1e-8 * prof.u0);
    CHECK(prof.thetas.front() == 0.0);
    CHECK(prof.thetas.back() == 1.0);

    const double a = centre_series(params, lambda, prof.u0).a;
    const double delta = prof.thetas[1];
    CHECK(std::abs(prof.dvalues[1]) <= 3.0 * std::abs(a) * delta);
}

TEST_CASE("other dimensions solve inside the interval")
{
    for (double n : {2.3, 3.6}) {
        const ProblemParams params(n, 1.0);
        const GapResult g = gap_interval(params);
        const double lambda = 0.5 * (g.lambda_gap_top + g.lambda_one);
        const SolutionProfile prof = solved(params, lambda);
        CHECK(prof.residual_max <= 1e-6 * std::max(1.0, std::pow(prof.u0, params.p())));
        CHECK(rayleigh_quotient(prof, params, lambda) < sobolev_constant(n));
    }
}

TEST_CASE("inside the gap there is no solution")
{
    const ProblemParams params(3.0, 1.0);
    const ShootOutcome out = shoot(params, 1.0 + pi * pi / 4.0 - 0.1);
    CHECK(out.kind == ShootKind::NoSolution);
    CHECK_FALSE(out.profile);
    REQUIRE(out.evidence.size() >= 20);
    CHECK(out.evidence.front().u0 == 1e-3);
    CHECK(out.evidence.back().u0 == 1e6);
    for (const auto& s : out.evidence)
        CHECK((!s.first_zero || *s.first_zero > 1.0));
}

TEST_CASE("halving the integration tolerance barely moves u0")
{
    const ProblemParams params(3.0, 1.0);
    ShootOptions fine;
    fine.rtol = 0.5e-10;
    const double coarse_u0 = solved(params, 7.0).u0;
    const double fine_u0 = solved(params, 7.0, fine).u0;
    CHECK(std::abs(coarse_u0 - fine_u0) <= 1e-7 * fine_u0);
}

TEST_CASE("crossing counts")
{
    const ProblemParams params(3.0, 1.0);
    const auto grid = shooting_grid();
    CHECK(grid.size() == 60);
    CHECK(count_crossings(params, 7.0, grid) == 1);
    CHECK(count_crossings(params, 3.0, grid) == 0);
    CHECK(count_crossings(params, 7.0, std::span<const double>{}) == 0);
}

TEST_CASE("residual of a planted quadratic")
{
    // u = 1 - t^2 is reproduced exactly by the five-point stencil
    const ProblemParams params(3.0, 0.5);
    const double lambda = 2.0;
    const SolutionProfile prof = planted(
        201, 0.5, [](double t) { return 1.0 - t * t; }, [](double t) { return -2.0 * t; });
    double expected = 0.0;
    for (std::size_t i = 2; i + 2 < prof.thetas.size(); ++i) {
        const double t = prof.thetas[i], u = 1.0 - t * t;
        const double r = -2.0 + 2.0 * (-2.0 * t) / std::tanh(t) + lambda * u + std::pow(u, 5.0);
        expected = std::max(expected, std::abs(r));
    }
    CHECK(std::abs(residual(prof, params, lambda) - expected) <= 1e-9 * expected);
}

TEST_CASE("residual spikes at a corrupted node")
{
    const ProblemParams params(3.0, 1.0);
    SolutionProfile prof = planted(401, 1.0, eig_u, eig_du);
    // a small multiple of the linear eigenfunction, so the u^p term stays negligible
    for (auto& u : prof.values)
        u *= 1e-3;
    for (auto& du : prof.dvalues)
        du *= 1e-3;
    const double lambda = 1.0 + pi * pi;
    const double base = residual(prof, params, lambda);
    const double h = prof.thetas[1];
    const double delta = 1e-7;
    prof.values[200] += delta;
    CHECK(residual(prof, params, lambda) - base >= delta / (h * h));
}

TEST_CASE("residual needs enough nodes")
{
    const SolutionProfile prof = planted(
        50, 1.0, [](double t) { return 1.0 - t; }, [](double) { return -1.0; });
    CHECK_THROWS_AS(residual(prof, ProblemParams(3.0, 1.0), 1.0), DomainError);
}

TEST_CASE("Sobolev constant")
{
    CHECK(std::abs(sobolev_constant(3.0) - 5.47790408953133187) < 1e-12);
    CHECK(std::abs(sobolev_constant(4.0) - 10.2603986412949128) < 1e-11);
    CHECK(sobolev_constant(2.0 + 1e-6) < 1e-4);
    CHECK(sobolev_constant(2.0 + 1e-3) < sobolev_constant(2.1));
    CHECK(std::abs(sphere_area(3.0) - 4.0 * pi) < 1e-13);
}

TEST_CASE("Rayleigh quotient is scale invariant")
{
    const ProblemParams params(3.0, 1.0);
    const SolutionProfile prof = solved(params, 7.0);
    SolutionProfile twice = prof;
    for (auto& v : twice.values)
        v *= 2.0;
    for (auto& v : twice.dvalues)
        v *= 2.0;
    const double q1 = rayleigh_quotient(prof, params, 7.0);
    const double q2 = rayleigh_quotient(twice, params, 7.0);
    CHECK(std::abs(q1 - q2) <= 1e-10 * std::abs(q1));
}

TEST_CASE("Rayleigh quotient of the eigenfunction near lambda_1")
{
    const ProblemParams params(3.0, 1.0);
    const SolutionProfile prof = planted(4001, 1.0, eig_u, eig_du);
    const double lambda_one = 1.0 + pi * pi;
    const double q_far = rayleigh_quotient(prof, params, lambda_one - 1.0);
    const double q_near = rayleigh_quotient(prof, params, lambda_one - 1e-3);
    CHECK(q_near > 0.0);
    CHECK(q_near < 1e-2 * q_far);
}
