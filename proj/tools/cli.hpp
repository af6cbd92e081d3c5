#pragma once

#include "hypgap/bvp.hpp"
#include "hypgap/gap.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hypgap::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kNumerical = 3 };

/// 12 significant digits, '.' separator, independent of the global locale.
std::string format_number(double x);
/// Shortest representation that parses back to the same double.
std::string format_exact(double x);
/// Throws std::invalid_argument on anything but a complete decimal number.
double parse_number(const std::string& text);

struct SweepRow {
    double n;
    double theta1;
    double lambda_trivial;
    double lambda_gap_top;
    double lambda_one;
};

/// n_min, n_min + n_step, ... up to n_max, each rounded to 12 significant digits so that a
/// row matches `gap --n <printed n>` exactly.
std::vector<double> sweep_dimensions(double n_min, double n_max, double n_step);

/// One gap_interval per n, on up to `jobs` threads; rows come back in the order of `dims`.
/// The first failing row's exception is rethrown after all workers stop.
std::vector<SweepRow> compute_sweep(double theta1, const std::vector<double>& dims, unsigned jobs,
                                    const DegreeSearchOptions& options = {});

std::string sweep_csv(const std::vector<SweepRow>& rows);
/// 800x600 static plot: lambda_trivial dotted, gap top dashed, lambda_1 solid, gap shaded.
std::string sweep_svg(const std::vector<SweepRow>& rows);

/// Header `theta,u,du`, full precision so the residual can be recomputed exactly.
std::string profile_csv(const SolutionProfile& profile);
SolutionProfile read_profile_csv(const std::filesystem::path& path);

/// Writes via a sibling temporary file and renames, so a failed run leaves nothing behind.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

/// Entry point for `gap`, `sweep`, `solve` and `verify`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hypgap::cli
