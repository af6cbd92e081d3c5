#include "hypgap/quadrature.hpp"

#include "hypgap/errors.hpp"

#include <cmath>
#include <numbers>

namespace hypgap {

GaussRule gauss_legendre(int n)
{
    if (n < 1)
        throw DomainError("gauss_legendre: need at least one node");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double simpson(std::span<const double> samples, double h)
{
    const std::size_t m = samples.size();
    if (m < 3 || m % 2 == 0)
        throw DomainError("simpson: need an odd number (>= 3) of samples");
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i)
        (i % 2 ? odd : even) += samples[i];
    return h / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

} // namespace hypgap
