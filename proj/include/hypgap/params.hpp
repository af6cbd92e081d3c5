#pragma once

namespace hypgap {

inline constexpr double kDefaultThetaMax = 10.0;

/// Dimension parameter n in (2,4) and geodesic radius theta1 of the ball.
class ProblemParams {
public:
    /// Throws DomainError unless 2 < n < 4 and 0 < theta1 <= theta_max.
    ProblemParams(double n, double theta1, double theta_max = kDefaultThetaMax);

    double n() const { return n_; }
    double theta1() const { return theta1_; }
    double theta_max() const { return theta_max_; }

    /// alpha = (2 - n) / 2, in (-1, 0).
    double alpha() const { return 0.5 * (2.0 - n_); }
    /// Critical exponent p = (n + 2) / (n - 2).
    double p() const { return (n_ + 2.0) / (n_ - 2.0); }
    /// n(n-2)/4, the bottom of the admissible lambda range.
    double lambda_trivial() const { return 0.25 * n_ * (n_ - 2.0); }

private:
    double n_;
    double theta1_;
    double theta_max_;
};

/// Degree of P_l^nu given only through L = -l(l+1).
struct Degree {
    double L;
};

/// Order nu of P_l^nu.
struct Order {
    double nu;
};

} // namespace hypgap
