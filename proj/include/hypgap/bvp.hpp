#pragma once

#include "hypgap/gap.hpp"
#include "hypgap/params.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hypgap {

/// Radial profile u(theta) on a uniform grid over [0, theta1].
struct SolutionProfile {
    double lambda = 0.0;
    double u0 = 0.0;
    std::vector<double> thetas;
    std::vector<double> values;
    std::vector<double> dvalues;
    double residual_max = 0.0;
};

struct ShootOptions {
    double theta_start = 1e-4; ///< upper bound; shrunk further for strongly concentrated shots
    double rtol = 1e-10;
    double atol = 1e-30; ///< on the bubble correction, which is tiny in a concentrated core
    double zero_tol = 1e-10;
    double overflow = 1e12;
    double profile_rtol = 1e-12; ///< for the final profile pass, whose second differences amplify noise
    int profile_points = 2049;   ///< minimum; doubled until the core width spans profile_core_nodes
    int profile_core_nodes = 64;
    int sweep_points = 60;
    double u0_min = 1e-3;
    double u0_max = 1e6;
    double match_tol = 1e-9;
    int max_bisections = 200;
    DegreeSearchOptions degree{};
};

/// Series data at the centre: u = u0 + a theta^2 + b theta^4 + O(theta^6).
struct CentreSeries {
    double a;
    double b;
};

CentreSeries centre_series(const ProblemParams& params, double lambda, double u0);

struct Shot {
    double u0;
    double theta_start;
    CentreSeries series;
    std::optional<double> first_zero; ///< first zero of u in (0, theta1], if any
    std::optional<SolutionProfile> profile;
};

/// Integrates -u'' - (n-1) coth(theta) u' = lambda u + u^p from the centre with u(0) = u0,
/// stopping at the first zero of u (or at theta1). With record_profile the integration runs to
/// theta1 and the profile is sampled on a uniform grid (see profile_grid_size).
Shot integrate_shoot(const ProblemParams& params, double lambda, double u0, const ShootOptions& options = {},
                     bool record_profile = false);

/// Number of profile nodes for a shot from u0: profile_points, doubled (minus one) until the
/// spacing resolves the concentration width of the core.
int profile_grid_size(const ProblemParams& params, double u0, const ShootOptions& options = {});

struct ShootSample {
    double u0;
    std::optional<double> first_zero;
};

enum class ShootKind { Solution, NoSolution };

struct ShootOutcome {
    ShootKind kind;
    std::optional<SolutionProfile> profile;
    std::vector<ShootSample> evidence; ///< the u0 sweep, in ascending u0
};

/// Geometric u0 grid used by the sweep.
std::vector<double> shooting_grid(const ShootOptions& options = {});

/// Sweeps u0, bisects the first bracket where the first zero crosses theta1. Throws
/// RejectedLambda for lambda >= lambda_1.
ShootOutcome shoot(const ProblemParams& params, double lambda, const ShootOptions& options = {});

/// max over interior nodes of |u'' + (n-1) coth(theta) u' + lambda u + u^p|, u'' from the
/// five-point fourth-order second difference of the stored values and u' from the stored derivative.
double residual(const SolutionProfile& profile, const ProblemParams& params, double lambda);

/// pi n (n-2) (Gamma(n/2)/Gamma(n))^{2/n}; defined for n > 2.
double sobolev_constant(double n);

/// Surface area of the unit sphere, 2 pi^{n/2} / Gamma(n/2).
double sphere_area(double n);

/// Q_lambda(u) in geodesic coordinates by composite Simpson on the profile grid.
double rayleigh_quotient(const SolutionProfile& profile, const ProblemParams& params, double lambda);

/// Sign changes of (first_zero(u0) - theta1) along u0_grid; a shot without a zero counts as
/// beyond theta1.
int count_crossings(const ProblemParams& params, double lambda, std::span<const double> u0_grid,
                    const ShootOptions& options = {});

} // namespace hypgap
