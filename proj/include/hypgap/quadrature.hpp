#pragma once

#include <span>
#include <vector>

namespace hypgap {

struct GaussRule {
    std::vector<double> nodes; ///< on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// Composite Simpson rule on a uniform grid with an even number of intervals
/// (odd number of samples). Throws DomainError otherwise.
double simpson(std::span<const double> samples, double h);

} // namespace hypgap
