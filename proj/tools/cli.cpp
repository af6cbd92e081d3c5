#include "cli.hpp"

#include "hypgap/errors.hpp"
#include "hypgap/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hypgap::cli {

namespace {

std::string to_chars_string(double x, std::optional<int> precision)
{
    char buf[64];
    const auto res = precision ? std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, *precision)
                               : std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string short_number(double x)
{
    return to_chars_string(x, 3);
}

} // namespace

std::string format_number(double x)
{
    return to_chars_string(x, 12);
}

std::string format_exact(double x)
{
    return to_chars_string(x, std::nullopt);
}

double parse_number(const std::string& text)
{
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last)
        throw std::invalid_argument("not a number: '" + text + "'");
    return x;
}

std::vector<double> sweep_dimensions(double n_min, double n_max, double n_step)
{
    if (!(n_step > 0.0) || !(n_max >= n_min))
        throw DomainError("sweep: need n_step > 0 and n_max >= n_min");
    if (!(n_min > 2.0 && n_max < 4.0))
        throw DomainError("sweep: [n_min, n_max] must lie inside (2, 4)");
    const auto count = static_cast<long>(std::floor((n_max - n_min) / n_step + 1e-9)) + 1;
    if (count > 100000)
        throw DomainError("sweep: too many rows");
    std::vector<double> dims;
    for (long i = 0; i < count; ++i)
        dims.push_back(parse_number(format_number(n_min + static_cast<double>(i) * n_step)));
    return dims;
}

std::vector<SweepRow> compute_sweep(double theta1, const std::vector<double>& dims, unsigned jobs,
                                    const DegreeSearchOptions& options)
{
    std::vector<SweepRow> rows(dims.size());
    std::vector<std::exception_ptr> failures(dims.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < dims.size(); i = next++) {
            try {
                const ProblemParams params(dims[i], theta1);
                const GapResult g = gap_interval(params, options);
                rows[i] = {dims[i], theta1, g.lambda_trivial, g.lambda_gap_top, g.lambda_one};
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(dims.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::string s = "n,theta1,lambda_trivial,lambda_gap_top,lambda1\n";
    for (const auto& r : rows) {
        s += format_number(r.n) + ',' + format_number(r.theta1) + ',' + format_number(r.lambda_trivial) + ',' +
             format_number(r.lambda_gap_top) + ',' + format_number(r.lambda_one) + '\n';
    }
    return s;
}

std::string sweep_svg(const std::vector<SweepRow>& rows)
{
    constexpr double width = 800, height = 600, left = 80, right = 30, top = 40, bottom = 60;
    double x0 = rows.empty() ? 2.0 : rows.front().n, x1 = rows.empty() ? 4.0 : rows.back().n;
    if (x1 <= x0)
        x1 = x0 + 1.0;
    double y0 = 0.0, y1 = 1.0;
    for (const auto& r : rows) {
        y0 = std::min(y0, r.lambda_trivial);
        y1 = std::max(y1, r.lambda_one);
    }
    y1 *= 1.05;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };
    auto point = [&](double x, double y) { return short_number(px(x)) + ',' + short_number(py(y)); };
    auto polyline = [&](auto field, const std::string& dash, const std::string& label) {
        std::string pts;
        for (const auto& r : rows)
            pts += point(r.n, field(r)) + ' ';
        return "<polyline class=\"" + label + "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"" +
               (dash.empty() ? std::string() : " stroke-dasharray=\"" + dash + "\"") + " points=\"" + pts + "\"/>\n";
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    svg << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
    std::string band;
    for (const auto& r : rows)
        band += point(r.n, r.lambda_gap_top) + ' ';
    for (auto it = rows.rbegin(); it != rows.rend(); ++it)
        band += point(it->n, it->lambda_trivial) + ' ';
    svg << "<polygon class=\"gap\" fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"none\" points=\"" << band << "\"/>\n";
    svg << polyline([](const SweepRow& r) { return r.lambda_trivial; }, "2,4", "lambda_trivial");
    svg << polyline([](const SweepRow& r) { return r.lambda_gap_top; }, "10,6", "lambda_gap_top");
    svg << polyline([](const SweepRow& r) { return r.lambda_one; }, "", "lambda1");

    svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
        << height - bottom << "\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
        << "\"/>\n</g>\n";
    svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double x = x0 + (x1 - x0) * i / 5.0;
        const double y = y0 + (y1 - y0) * i / 5.0;
        svg << "<text x=\"" << short_number(px(x)) << "\" y=\"" << height - bottom + 20
            << "\" text-anchor=\"middle\">" << short_number(x) << "</text>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << short_number(py(y) + 4)
            << "\" text-anchor=\"end\">" << short_number(y) << "</text>\n";
    }
    svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\">n</text>\n";
    svg << "<text x=\"20\" y=\"" << (top + height - bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << (top + height - bottom) / 2 << ")\">lambda</text>\n";
    svg << "</g>\n</svg>\n";
    return svg.str();
}

std::string profile_csv(const SolutionProfile& profile)
{
    std::string s = "theta,u,du\n";
    for (std::size_t i = 0; i < profile.thetas.size(); ++i)
        s += format_exact(profile.thetas[i]) + ',' + format_exact(profile.values[i]) + ',' +
             format_exact(profile.dvalues[i]) + '\n';
    return s;
}

SolutionProfile read_profile_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "theta,u,du")
        throw std::runtime_error(path.string() + ": expected header theta,u,du");
    SolutionProfile p;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        if (a == std::string::npos || b == std::string::npos)
            throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
        p.thetas.push_back(parse_number(line.substr(0, a)));
        p.values.push_back(parse_number(line.substr(a + 1, b - a - 1)));
        p.dvalues.push_back(parse_number(line.substr(b + 1)));
    }
    if (!p.values.empty())
        p.u0 = p.values.front();
    return p;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents)
{
    std::filesystem::path tmp = path;
    tmp += ".partial";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write " + tmp.string());
            out << contents;
            out.flush();
            if (!out)
                throw std::runtime_error("write failed for " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

namespace {

int cmd_gap(double n, double theta1, std::optional<double> tol, std::ostream& out)
{
    DegreeSearchOptions opt;
    if (tol)
        opt.rel_bracket_tol = *tol;
    const GapResult g = gap_interval(ProblemParams(n, theta1), opt);
    out << "L_star=" << format_number(g.L_star) << '\n'
        << "L1=" << format_number(g.L_one) << '\n'
        << "lambda_trivial=" << format_number(g.lambda_trivial) << '\n'
        << "lambda_gap_top=" << format_number(g.lambda_gap_top) << '\n'
        << "lambda1=" << format_number(g.lambda_one) << '\n';
    return kOk;
}

int cmd_sweep(double theta1, double n_min, double n_max, double n_step, const std::string& csv_path,
              const std::string& svg_path, unsigned jobs, std::ostream& out)
{
    (void)ProblemParams(3.0, theta1); // validates theta1 before any work
    const auto rows = compute_sweep(theta1, sweep_dimensions(n_min, n_max, n_step), jobs);
    for (const auto& r : rows) {
        if (!(r.lambda_trivial < r.lambda_gap_top && r.lambda_gap_top < r.lambda_one))
            throw InvariantViolation("sweep: unordered row at n=" + format_number(r.n));
    }
    const std::string csv = sweep_csv(rows);
    if (csv_path.empty()) {
        out << csv;
    } else {
        write_file_atomically(csv_path, csv);
    }
    if (!svg_path.empty()) {
        try {
            write_file_atomically(svg_path, sweep_svg(rows));
        } catch (...) {
            if (!csv_path.empty()) {
                std::error_code ec;
                std::filesystem::remove(csv_path, ec);
            }
            throw;
        }
    }
    return kOk;
}

int cmd_solve(double n, double theta1, double lambda, const std::string& csv_path, std::ostream& out)
{
    const ProblemParams params(n, theta1);
    const ShootOutcome res = shoot(params, lambda);
    if (res.kind == ShootKind::NoSolution || !res.profile) {
        out << "no-solution\n";
        out << "u0 first_zero\n";
        for (const auto& s : res.evidence)
            out << format_number(s.u0) << ' ' << (s.first_zero ? format_number(*s.first_zero) : "none") << '\n';
        return kOk;
    }
    const SolutionProfile& prof = *res.profile;
    if (!csv_path.empty())
        write_file_atomically(csv_path, profile_csv(prof));
    out << "u0=" << format_number(prof.u0) << '\n'
        << "residual=" << format_number(prof.residual_max) << '\n'
        << "Q=" << format_number(rayleigh_quotient(prof, params, lambda)) << '\n'
        << "S_n=" << format_number(sobolev_constant(n)) << '\n';
    return kOk;
}

int cmd_verify(double n, double theta1, const SuiteOptions& options, std::ostream& out)
{
    const auto reports = run_suite(ProblemParams(n, theta1), options);
    bool all = true;
    for (const auto& r : reports) {
        out << r.name << ' ' << format_number(r.max_residual) << ' ' << (r.pass ? "pass" : "fail") << '\n';
        all = all && r.pass;
    }
    return all ? kOk : kVerificationFailed;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Solution gap of the critical semilinear problem on hyperbolic balls"};
    app.require_subcommand(1);

    double n = 0.0, theta1 = 0.0, lambda = 0.0;
    std::optional<double> tol;
    auto* gap = app.add_subcommand("gap", "L*, L1 and the lambda thresholds");
    gap->add_option("--n", n, "dimension, 2 < n < 4")->required();
    gap->add_option("--theta1", theta1, "geodesic radius, 0 < theta1 <= 10")->required();
    gap->add_option("--tol", tol, "relative bracket tolerance on L");

    double n_min = 2.1, n_max = 3.9, n_step = 0.05;
    std::string csv_path, svg_path;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "thresholds over a range of n (CSV, optional SVG)");
    sweep->add_option("--theta1", theta1)->required();
    sweep->add_option("--n-min,--n_min", n_min);
    sweep->add_option("--n-max,--n_max", n_max);
    sweep->add_option("--n-step,--n_step", n_step);
    sweep->add_option("--out-csv,--out_csv,--out", csv_path, "CSV path; stdout if omitted");
    sweep->add_option("--out-svg,--out_svg,--svg", svg_path, "SVG path");
    sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* solve = app.add_subcommand("solve", "shoot for the positive radial solution");
    solve->add_option("--n", n)->required();
    solve->add_option("--theta1", theta1)->required();
    solve->add_option("--lambda", lambda)->required();
    solve->add_option("--out-csv,--out_csv,--out", csv_path, "profile CSV path");

    SuiteOptions suite;
    double l_star_scale = 1.0;
    auto* verify = app.add_subcommand("verify", "run the identity checks");
    verify->add_option("--n", n)->required();
    verify->add_option("--theta1", theta1)->required();
    verify->add_option("--tol-a", suite.tolerances.a_residual);
    verify->add_option("--tol-riccati", suite.tolerances.riccati);
    verify->add_option("--tol-y-limit", suite.tolerances.y_limit);
    verify->add_option("--tol-wronskian", suite.tolerances.wronskian);
    verify->add_option("--tol-wronskian-integral", suite.tolerances.wronskian_integral);
    verify->add_option("--tol-relations", suite.tolerances.relations);
    verify->add_option("--tol-overlap", suite.tolerances.overlap);
    verify->add_option("--tol-energy", suite.tolerances.energy);
    verify->add_option("--grid-points", suite.grid_points)->check(CLI::Range(5, 10000));
    verify->add_option("--l-star-scale", l_star_scale, "multiply L* before checking (sensitivity canary)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gap)
            return cmd_gap(n, theta1, tol, out);
        if (*sweep)
            return cmd_sweep(theta1, n_min, n_max, n_step, csv_path, svg_path, jobs, out);
        if (*solve)
            return cmd_solve(n, theta1, lambda, csv_path, out);
        if (*verify) {
            if (l_star_scale != 1.0)
                suite.L_star_override = l_star_scale * find_L_star(ProblemParams(n, theta1));
            return cmd_verify(n, theta1, suite, out);
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

} // namespace hypgap::cli
