#pragma once

#include "hypgap/bvp.hpp"
#include "hypgap/legendre.hpp"
#include "hypgap/params.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hypgap {

struct CheckReport {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false; ///< max_residual <= tolerance
    std::vector<double> grid;
    std::string notes;
};

/// Per-check tolerances. Sign checks report the signed extreme value against 0.
struct VerifyTolerances {
    double a_residual = 1e-8;   ///< relative to the largest term of the third-order equation
    double riccati = 1e-5;      ///< absolute
    double y_limit = 1e-8;      ///< absolute
    double wronskian = 1e-4;    ///< on the magnitude of the limit
    double wronskian_integral = 1e-8; ///< relative to the limit
    double relations = 1e-8;    ///< raising/lowering, relative to max(1, |rhs|)
    double overlap = 1e-9;      ///< series vs continuation, relative to the window maximum
    double energy = 1e-4;       ///< relative to max |G' v^2|
};

// ---------------------------------------------------------------------------------------
// Wronskian of y1 = P_{L1}^alpha and y2 = P_{L*}^{-alpha}, W = y1' y2 - y2' y1.

struct WronskianResult {
    double limit_estimate;     ///< lim_{theta -> 0} W(theta) sinh(theta)
    double magnitude_expected; ///< 2 |sin(pi alpha)| / pi
    double extrapolation_error;
    int observed_sign;
    std::vector<double> thetas;
    std::vector<double> samples; ///< W sinh at thetas
};

/// W sinh at theta = 1e-2 / 2^k, k < terms, extrapolated in theta^2. Throws
/// ConvergenceError if the last two diagonal entries differ by more than 1e-6.
WronskianResult wronskian_limit(const ProblemParams& params, double L_star, double L_one, int terms = 6);
WronskianResult wronskian_limit(const ProblemParams& params);

/// (sinh W)' = (L* - L1) sinh y1 y2, and sinh W vanishes at theta1 because both factors do,
/// so the limit equals (L1 - L*) * integral_0^theta1 sinh y1 y2. Returns |limit - integral term|.
double wronskian_integral_gap(const ProblemParams& params, double L_star, double L_one, double limit,
                              int gauss_panels = 64);

// ---------------------------------------------------------------------------------------
// T = sinh^{4-n} P^alpha P^{-alpha} (same degree), lambda = L + n(n-2)/4.

struct PohozaevEval {
    double theta;
    double T;
    double dT;
    double B;          ///< (n-1)/n sinh^{2n-4} (T' + (n-4) coth T)
    double A_residual; ///< left side of the third-order equation for T
    double A_scale;    ///< max(1, sum of |terms|)
};

PohozaevEval pohozaev_eval(const ProblemParams& params, Degree degree, double theta,
                           const LegendreOptions& options = {});
/// Same, from the two Legendre evaluations P^alpha and P^{-alpha} at theta.
PohozaevEval pohozaev_from(const ProblemParams& params, Degree degree, double theta, const LegendreEval& plus,
                           const LegendreEval& minus);

// ---------------------------------------------------------------------------------------
// y_nu = P^{nu+1} / (sinh P^nu) + nu / (2 sinh^2(theta/2)).

struct YNuEval {
    double y;
    double derivative_fd; ///< five-point central difference over h
    double rhs;           ///< -sinh y^2 + 2 (nu - cosh) y / sinh - L / sinh
    double riccati_residual;
};

YNuEval y_nu_eval(Degree degree, Order order, double theta, double h = 1e-5, const LegendreOptions& options = {});

struct YNuLimit {
    double estimate; ///< extrapolated from theta = 0.2 / 2^k
    double expected; ///< -L / (2 (1 - nu))
    double extrapolation_error;
};

YNuLimit y_nu_limit(Degree degree, Order order, int terms = 6);

// ---------------------------------------------------------------------------------------
// Energy E = sinh^2 v'^2 + 2/(p+1) v^{p+1} + G v^2 with G = -alpha^2 + (lambda - n(n-2)/4) sinh^2
// and u = sinh^alpha v; along solutions dE/dtheta = G' v^2.

/// Checks the energy identity on nodal (theta, v, v') data on a uniform grid by central differences of E.
/// With include_power = false the v^{p+1} term is dropped (the identity then holds for the
/// linear equation). Reports the identity residual relative to max |G' v^2|; `notes` records
/// the worst decrease of E.
CheckReport energy_identity(std::span<const double> thetas, std::span<const double> v, std::span<const double> dv,
                            const ProblemParams& params, double lambda, bool include_power = true,
                            double tolerance = 1e-4);

/// Converts the profile to v, v' and returns {identity report, monotonicity report}.
std::vector<CheckReport> energy_monotonicity(const SolutionProfile& profile, const ProblemParams& params,
                                             double lambda, double tolerance = 1e-4);

// ---------------------------------------------------------------------------------------

struct SuiteOptions {
    VerifyTolerances tolerances{};
    int grid_points = 50;                 ///< interior theta-grid theta1 * i / (grid_points + 1)
    std::optional<double> L_star_override; ///< replaces the computed L* everywhere (sensitivity canary)
    DegreeSearchOptions degree{};
    ShootOptions shoot{};
};

/// Runs every check; failures are reported, never thrown. Sorted by name.
std::vector<CheckReport> run_suite(const ProblemParams& params, const SuiteOptions& options = {});

} // namespace hypgap
