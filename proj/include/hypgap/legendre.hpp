#pragma once

#include "hypgap/ode.hpp"
#include "hypgap/params.hpp"
#include "hypgap/special.hpp"

#include <vector>

namespace hypgap {

enum class LegendreMethod { Series, Continuation };

/// P_l^nu(cosh theta) together with its theta-derivative and the raised function
/// P_l^{nu+1}(cosh theta); dtheta = raised + nu coth(theta) value.
struct LegendreEval {
    double value;
    double dtheta;
    double raised;
    LegendreMethod method;
};

struct LegendreOptions {
    /// Hypergeometric series below, ODE continuation above. Must stay below 2 asinh(1).
    double theta_switch = 1.2;
    double theta_max = kDefaultThetaMax;
    double rtol = 1e-12;
    double atol = 1e-14;
    SeriesOptions series{};
};

/// Series representation
///   P_l^nu(cosh t) = coth^nu(t/2) / Gamma(1-nu) * 2F1[-l, l+1; 1-nu; -sinh^2(t/2)],
/// valid while sinh^2(t/2) < 1.
LegendreEval legendre_series(Degree degree, Order order, double theta, const SeriesOptions& options = {});

/// P_l^nu(cosh theta) on (0, theta_max]; series below theta_switch, continuation of the
/// Legendre equation y'' + coth(t) y' + (L - nu^2/sinh^2 t) y = 0 above it.
LegendreEval legendre_p(Degree degree, Order order, double theta, const LegendreOptions& options = {});

/// P_l^nu(cosh theta) on a whole interval (0, theta_end]. The continuation branch is
/// integrated once and evaluated through its dense output, so repeated queries are cheap.
class LegendreCurve {
public:
    LegendreCurve(Degree degree, Order order, double theta_end, const LegendreOptions& options = {});

    LegendreEval operator()(double theta) const;

    double theta_end() const { return theta_end_; }
    Degree degree() const { return degree_; }
    Order order() const { return order_; }

private:
    Degree degree_;
    Order order_;
    double theta_end_;
    LegendreOptions options_;
    std::vector<ode::DenseStep<2>> steps_;
};

} // namespace hypgap
