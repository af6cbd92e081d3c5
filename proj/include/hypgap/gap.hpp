#pragma once

#include "hypgap/legendre.hpp"
#include "hypgap/params.hpp"

#include <optional>
#include <vector>

namespace hypgap {

/// The three lambda thresholds of the problem on the ball of radius theta1:
/// no solution on (lambda_trivial, lambda_gap_top], a unique one on (lambda_gap_top, lambda_one).
struct GapResult {
    double L_star;
    double L_one;
    double lambda_trivial;
    double lambda_gap_top;
    double lambda_one;
    double tol; ///< widest L-bracket left by the two bisections
};

struct ZeroSearchOptions {
    int scan_points = 200;
    double scan_start = 1e-3;
    double theta_tol = 1e-12;
};

struct DegreeSearchOptions {
    double L_start = 1e-6;
    double L_limit = 1e8;
    double theta_match_tol = 1e-12;
    double rel_bracket_tol = 1e-11;
    ZeroSearchOptions zero{};
    LegendreOptions legendre{};
};

/// Smallest theta in (0, theta_cap] where P_l^nu(cosh theta) vanishes, or nullopt if the
/// scan sees no sign change.
std::optional<double> first_zero_theta(Degree degree, Order order, double theta_cap,
                                       const ZeroSearchOptions& options = {},
                                       const LegendreOptions& legendre = {});

struct DegreeSearchResult {
    double L;
    double bracket_width;
};

/// Smallest L > 0 such that P_l^nu(cosh theta) > 0 on (0, theta1) and vanishes at theta1.
DegreeSearchResult find_first_degree(Order order, const ProblemParams& params,
                                     const DegreeSearchOptions& options = {});

/// L* (order -alpha): the gap top is n(n-2)/4 + L*.
double find_L_star(const ProblemParams& params, const DegreeSearchOptions& options = {});
/// L_1 (order alpha): lambda_1 = n(n-2)/4 + L_1.
double find_L_one(const ProblemParams& params, const DegreeSearchOptions& options = {});

/// Throws InvariantViolation if 0 < L* < L_1 or L_1 >= 1/4 fails.
GapResult gap_interval(const ProblemParams& params, const DegreeSearchOptions& options = {});

// ---------------------------------------------------------------------------------------
// Finite-volume oracles, independent of the Legendre machinery.

struct EigenOptions {
    double rel_tol = 1e-10;
    int max_iterations = 500;
    int gauss_points = 8;
};

/// First Dirichlet eigenvalue of -(sinh^{n-1} u')' = lambda sinh^{n-1} u on (0, theta1),
/// discretized on m cells; returns lambda_1 - n(n-2)/4.
double fd_eigen_L_one(const ProblemParams& params, int m, const EigenOptions& options = {});

/// Lagrange multiplier mu of min int phi'^2 r^{3-n} subject to int phi^2 r^{3-n} rho^2 = 1 on
/// (0, R), R = tanh(theta1/2), rho = 2/(1-r^2), phi(R) = 0; m cells.
double fd_eigen_L_star(const ProblemParams& params, int m, const EigenOptions& options = {});

struct Extrapolation {
    std::vector<int> cells;
    std::vector<double> raw;
    double value;    ///< top of the Richardson table
    double estimate; ///< |top - previous diagonal entry|, a rough error bar
};

/// Richardson extrapolation of an O(h^2) + O(h^4) + ... sequence computed on m0, 2 m0, 4 m0, ...
Extrapolation richardson_even(const std::vector<int>& cells, const std::vector<double>& raw);

Extrapolation fd_eigen_L_one_extrapolated(const ProblemParams& params, int m0 = 1000, int levels = 3,
                                          const EigenOptions& options = {});
Extrapolation fd_eigen_L_star_extrapolated(const ProblemParams& params, int m0 = 1000, int levels = 3,
                                           const EigenOptions& options = {});

} // namespace hypgap
