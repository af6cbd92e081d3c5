// Acceptance gates: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "cli.hpp"

#include "hypgap/bvp.hpp"
#include "hypgap/errors.hpp"
#include "hypgap/gap.hpp"
#include "hypgap/legendre.hpp"
#include "hypgap/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace hypgap;

namespace {

constexpr double pi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// Runs the built executable and captures stdout.
int run_tool(const std::string& args, std::string& out)
{
    const std::string cmd = std::string("\"") + HYPGAP_TOOL + "\" " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe)
        return -1;
    std::array<char, 512> buf{};
    out.clear();
    while (std::fgets(buf.data(), buf.size(), pipe))
        out += buf.data();
    const int status = ::pclose(pipe);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, double> parse_key_values(const std::string& text)
{
    std::map<std::string, double> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos)
            kv[line.substr(0, eq)] = cli::parse_number(line.substr(eq + 1));
    }
    return kv;
}

void criterion_1(Verdict& v)
{
    double worst = 0.0, slowest = 0.0;
    for (double t1 : {1.0, 0.5, 2.0}) {
        const double top = 0.75 + 0.25 + pi * pi / (4.0 * t1 * t1);
        const double one = 0.75 + 0.25 + pi * pi / (t1 * t1);
        std::string out;
        const auto t0 = Clock::now();
        const int code = run_tool("gap --n 3 --theta1 " + cli::format_number(t1), out);
        const double dt = seconds_since(t0);
        slowest = std::max(slowest, dt);
        v.require(code == 0, "exit code at theta1=" + cli::format_number(t1));
        if (code != 0)
            continue;
        const auto kv = parse_key_values(out);
        const double e1 = std::abs(kv.at("lambda_gap_top") - top);
        const double e2 = std::abs(kv.at("lambda1") - one);
        worst = std::max({worst, e1, e2});
        v.require(e1 <= 1e-8 && e2 <= 1e-8, "closed form at theta1=" + cli::format_number(t1));
        v.require(dt < 1.0, "runtime at theta1=" + cli::format_number(t1));
    }
    v.detail << "max |err|=" << sci(worst) << " (tol 1e-8), slowest run " << sci(slowest) << " s (limit 1 s)";
}

void criterion_2(Verdict& v)
{
    const auto t0 = Clock::now();
    double worst_star = 0.0, worst_one = 0.0;
    for (double n : {2.2, 2.5, 3.0, 3.5, 3.8}) {
        for (double t1 : {0.5, 1.0, 2.0}) {
            const ProblemParams p(n, t1);
            const double ds = std::abs(find_L_star(p) - fd_eigen_L_star_extrapolated(p).value);
            const double d1 = std::abs(find_L_one(p) - fd_eigen_L_one_extrapolated(p).value);
            worst_star = std::max(worst_star, ds);
            worst_one = std::max(worst_one, d1);
            v.require(ds <= 1e-6 && d1 <= 1e-6, "n=" + cli::format_number(n) + " theta1=" + cli::format_number(t1));
        }
    }
    const double dt = seconds_since(t0);
    v.require(dt < 60.0, "runtime");
    v.detail << "max |L*-fd|=" << sci(worst_star) << ", max |L1-fd|=" << sci(worst_one) << " (tol 1e-6), "
             << sci(dt) << " s (limit 60 s)";
}

void criterion_3(Verdict& v)
{
    double min_gap = 1e300, min_one = 1e300;
    for (double n : {2.2, 2.5, 3.0, 3.5, 3.8}) {
        for (double t1 : {0.5, 1.0, 2.0}) {
            const GapResult g = gap_interval(ProblemParams(n, t1));
            min_gap = std::min(min_gap, g.L_one - g.L_star);
            min_one = std::min(min_one, g.L_one);
            v.require(0.0 < g.L_star && g.L_star < g.L_one, "L* < L1 at n=" + cli::format_number(n));
            v.require(g.L_one >= 0.25, "L1 >= 1/4 at n=" + cli::format_number(n));
        }
    }
    std::string out;
    const int code = run_tool("sweep --theta1 1 --n-min 2.1 --n-max 3.9 --n-step 0.05", out);
    v.require(code == 0, "sweep exit code");
    std::istringstream in(out);
    std::string line;
    std::getline(in, line);
    v.require(line == "n,theta1,lambda_trivial,lambda_gap_top,lambda1", "sweep header");
    int rows = 0;
    double prev_n = 0.0;
    while (std::getline(in, line)) {
        std::vector<double> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            f.push_back(cli::parse_number(cell));
        v.require(f.size() == 5, "row width");
        if (f.size() != 5)
            break;
        v.require(f[0] > prev_n, "ascending n");
        v.require(f[2] < f[3] && f[3] < f[4], "ordered row at n=" + cli::format_number(f[0]));
        prev_n = f[0];
        ++rows;
    }
    v.require(rows == 37, "37 rows over [2.1, 3.9]");
    v.detail << "min L1-L*=" << sci(min_gap) << ", min L1=" << sci(min_one) << " (bound 0.25), sweep rows=" << rows;
}

void criterion_4(Verdict& v)
{
    const ProblemParams params(3.0, 1.0);
    const double lambda = 7.0;
    const auto t0 = Clock::now();
    const ShootOutcome out = shoot(params, lambda);
    v.require(out.kind == ShootKind::Solution && out.profile.has_value(), "solution found");
    if (!out.profile)
        return;
    const SolutionProfile& prof = *out.profile;
    const double q = rayleigh_quotient(prof, params, lambda);
    const double dt = seconds_since(t0);
    const double s3 = sobolev_constant(3.0);
    const double boundary = std::abs(prof.values.back()) / prof.u0;
    v.require(prof.residual_max <= 1e-6, "residual");
    v.require(boundary <= 1e-8, "u(theta1) <= 1e-8 u0");
    v.require(q < s3, "Q < S_3");
    v.require(dt < 5.0, "runtime");
    v.detail << "u0=" << cli::format_number(prof.u0) << ", residual=" << sci(prof.residual_max)
             << " (tol 1e-6), |u(theta1)|/u0=" << sci(boundary) << " (tol 1e-8), Q=" << cli::format_number(q)
             << " S_3=" << cli::format_number(s3) << " margin " << sci(s3 - q) << ", " << sci(dt) << " s (limit 5 s)";
}

void criterion_5(Verdict& v)
{
    const ProblemParams params(3.0, 1.0);
    const auto grid = shooting_grid();
    double closest = 1e300;
    for (double lambda : {1.0, 2.0, 3.0, 3.4674}) {
        const ShootOutcome out = shoot(params, lambda);
        v.require(out.kind == ShootKind::NoSolution, "no solution at lambda=" + cli::format_number(lambda));
        v.require(out.evidence.size() >= 20 && out.evidence.front().u0 == 1e-3 && out.evidence.back().u0 == 1e6,
                  "sweep spans [1e-3, 1e6]");
        for (const auto& s : out.evidence) {
            if (s.first_zero) {
                closest = std::min(closest, *s.first_zero - params.theta1());
                v.require(*s.first_zero > params.theta1(), "zero inside at lambda=" + cli::format_number(lambda));
            }
        }
    }
    std::string counts;
    for (double lambda : {3.6, 5.0, 7.0, 10.0}) {
        const int c = count_crossings(params, lambda, grid);
        counts += ' ' + std::to_string(c);
        v.require(c == 1, "one bracket at lambda=" + cli::format_number(lambda));
    }
    if (closest == 1e300)
        v.detail << "gap lambdas: no sampled u0 has a zero in (0, theta1]";
    else
        v.detail << "gap lambdas: closest zero beyond theta1 by " << sci(closest);
    v.detail << "; crossings at 3.6,5,7,10:" << counts;
}

void criterion_6(Verdict& v)
{
    const auto t0 = Clock::now();
    int checks = 0;
    for (auto [n, t1] : {std::pair{3.0, 1.0}, std::pair{2.5, 1.0}, std::pair{3.5, 0.5}}) {
        for (const auto& r : run_suite(ProblemParams(n, t1))) {
            ++checks;
            if (!r.pass)
                v.require(false, r.name + " at n=" + cli::format_number(n) + " residual " + sci(r.max_residual) +
                                     " tol " + sci(r.tolerance));
        }
    }
    const double dt = seconds_since(t0);
    v.require(dt < 30.0, "runtime");
    v.detail << checks << " checks over 3 configurations, " << sci(dt) << " s (limit 30 s)";
}

void criterion_7(Verdict& v)
{
    double overlap = 0.0;
    for (double n : {2.5, 3.0, 3.5}) {
        const double a = 0.5 * (2.0 - n);
        for (double L : {0.5, 2.0, 10.0}) {
            for (double nu : {a, -a}) {
                LegendreOptions cont;
                cont.theta_switch = 0.8;
                double vmax = 0.0, dmax = 0.0;
                for (int i = 0; i <= 50; ++i) {
                    const double t = 1.0 + 0.5 * i / 50.0;
                    const double s = legendre_series(Degree{L}, Order{nu}, t).value;
                    const double c = legendre_p(Degree{L}, Order{nu}, t, cont).value;
                    vmax = std::max(vmax, std::abs(s));
                    dmax = std::max(dmax, std::abs(s - c));
                }
                overlap = std::max(overlap, dmax / vmax);
            }
        }
    }
    double closed = 0.0;
    for (double L : {0.5, 2.0, 10.0, 0.25 + pi * pi}) {
        const double k = std::sqrt(L - 0.25);
        for (int i = 1; i <= 100; ++i) {
            const double t = 2.0 * i / 100.0;
            const double sh = std::sqrt(std::sinh(t));
            const double em = std::sqrt(2.0 / pi) * std::sin(k * t) / (k * sh);
            const double ep = std::sqrt(2.0 / pi) * std::cos(k * t) / sh;
            if (std::abs(std::sin(k * t)) > 1e-2)
                closed = std::max(closed, std::abs(legendre_p(Degree{L}, Order{-0.5}, t).value - em) / std::abs(em));
            if (std::abs(std::cos(k * t)) > 1e-2)
                closed = std::max(closed, std::abs(legendre_p(Degree{L}, Order{0.5}, t).value - ep) / std::abs(ep));
        }
    }
    v.require(overlap <= 1e-9, "series vs continuation");
    v.require(closed <= 1e-9, "n=3 closed forms");
    v.detail << "overlap rel=" << sci(overlap) << ", closed-form rel=" << sci(closed) << " (tol 1e-9)";
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"1 closed-form gap boundary at n=3", criterion_1},
        {"2 eigenvalue cross-oracle", criterion_2},
        {"3 gap ordering, lower bound and sweep", criterion_3},
        {"4 existence and energy bound", criterion_4},
        {"5 non-existence and uniqueness evidence", criterion_5},
        {"6 identity suite", criterion_6},
        {"7 special-function regression", criterion_7},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        const auto t0 = Clock::now();
        try {
            check(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail.str() << " [" << sci(seconds_since(t0))
                  << " s]" << std::endl;
        failed += v.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
