#pragma once

#include "hypgap/params.hpp"

#include <cstddef>

namespace hypgap {

/// Gamma function for real argument; throws PoleError at 0, -1, -2, ...
double gamma_real(double x);

struct SeriesOptions {
    double rel_tol = 1e-15;
    std::size_t max_terms = 10000;
};

/// 2F1[-l, l+1; c; z] for |z| < 1, summed through the real term recurrence
///
///     t_{k+1} = t_k * z * (k(k+1) + L) / ((c + k)(k + 1)),
///
/// which uses (-l + k)(l + 1 + k) = k(k+1) + L so the degree only enters via L.
double hyp_series(Degree degree, double c, double z, const SeriesOptions& options = {});

} // namespace hypgap
