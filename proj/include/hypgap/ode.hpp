#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the classical 4th order dense output
// (Hairer, Norsett & Wanner, "Solving ODEs I", contd5). Fixed-size state, no allocation
// in the step loop.

#include "hypgap/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>

namespace hypgap::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-14;
    double initial_step = 0.0; ///< 0 selects the step automatically
    double max_step = 0.0;     ///< 0 means unbounded
    std::size_t max_steps = 2'000'000;
};

/// Continuous extension over one accepted step [t0, t0 + h].
template <std::size_t N>
class DenseStep {
public:
    double t0() const { return t0_; }
    double t1() const { return t0_ + h_; }
    double h() const { return h_; }
    const State<N>& y0() const { return r_[0]; }
    const State<N>& y1() const { return y1_; }

    State<N> operator()(double t) const
    {
        const double s = (t - t0_) / h_;
        const double s1 = 1.0 - s;
        State<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = r_[0][i] + s * (r_[1][i] + s1 * (r_[2][i] + s * (r_[3][i] + s1 * r_[4][i])));
        return y;
    }

private:
    template <std::size_t M, class Rhs, class Observer>
    friend struct Integrator;

    double t0_ = 0.0;
    double h_ = 0.0;
    std::array<State<N>, 5> r_{};
    State<N> y1_{};
};

enum class Stop { Finished, Observer };

template <std::size_t N>
struct Result {
    Stop stop;
    double t;
    State<N> y;
    std::size_t steps;
    std::size_t rejected;
};

template <std::size_t N, class Rhs, class Observer>
struct Integrator {
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                            a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                            a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    Rhs& f;
    Observer& observe;
    const Options& opt;

    double error_norm(const State<N>& y0, const State<N>& y1, const State<N>& err) const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            const double q = err[i] / sc;
            acc += q * q;
        }
        return std::sqrt(acc / static_cast<double>(N));
    }

    double initial_step(double t, const State<N>& y, const State<N>& f0, double dir) const
    {
        double dy = 0.0, df = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            dy += (y[i] / sc) * (y[i] / sc);
            df += (f0[i] / sc) * (f0[i] / sc);
        }
        dy = std::sqrt(dy / N);
        df = std::sqrt(df / N);
        double h = (dy < 1e-10 || df < 1e-10) ? 1e-6 : 0.01 * dy / df;
        State<N> y1, f1;
        for (std::size_t i = 0; i < N; ++i)
            y1[i] = y[i] + dir * h * f0[i];
        f(t + dir * h, y1, f1);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            const double q = (f1[i] - f0[i]) / sc;
            d2 += q * q;
        }
        d2 = std::sqrt(d2 / N) / h;
        const double dmax = std::max(df, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / dmax, 0.2);
        return std::min(100.0 * h, h1);
    }

    Result<N> run(double t, State<N> y, double t_end)
    {
        const double dir = t_end >= t ? 1.0 : -1.0;
        const double span = std::abs(t_end - t);
        State<N> k1, k2, k3, k4, k5, k6, k7, yt, ynew, err;
        f(t, y, k1);
        double h = opt.initial_step > 0.0 ? opt.initial_step : initial_step(t, y, k1, dir);
        if (opt.max_step > 0.0)
            h = std::min(h, opt.max_step);
        h = std::min(h, span);
        DenseStep<N> dense;
        std::size_t steps = 0, rejected = 0;
        bool last_rejected = false;
        if (span == 0.0)
            return {Stop::Finished, t, y, 0, 0};

        while (true) {
            if (steps + rejected >= opt.max_steps)
                throw ConvergenceError("ode: step limit reached at t=" + std::to_string(t));
            bool last = false;
            if ((t_end - (t + dir * h)) * dir <= 1e-14 * span) {
                h = std::abs(t_end - t);
                last = true;
            }
            if (!(h > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t)) || h < 1e-300)
                throw ConvergenceError("ode: step size underflow at t=" + std::to_string(t));
            const double hs = dir * h;

            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + hs * a21 * k1[i];
            f(t + c2 * hs, yt, k2);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
            f(t + c3 * hs, yt, k3);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            f(t + c4 * hs, yt, k4);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            f(t + c5 * hs, yt, k5);
            for (std::size_t i = 0; i < N; ++i)
                yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            const double t_new = last ? t_end : t + hs;
            f(t_new, yt, k6);
            for (std::size_t i = 0; i < N; ++i)
                ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            f(t_new, ynew, k7);
            for (std::size_t i = 0; i < N; ++i)
                err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

            const double e = error_norm(y, ynew, err);
            if (!std::isfinite(e))
                throw IntegrationOverflow("ode: non-finite state at t=" + std::to_string(t));
            if (e <= 1.0) {
                dense.t0_ = t;
                dense.h_ = t_new - t;
                for (std::size_t i = 0; i < N; ++i) {
                    const double dyi = ynew[i] - y[i];
                    const double bspl = hs * k1[i] - dyi;
                    dense.r_[0][i] = y[i];
                    dense.r_[1][i] = dyi;
                    dense.r_[2][i] = bspl;
                    dense.r_[3][i] = dyi - hs * k7[i] - bspl;
                    dense.r_[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                           d6 * k6[i] + d7 * k7[i]);
                }
                dense.y1_ = ynew;
                ++steps;
                t = t_new;
                y = ynew;
                k1 = k7;
                if (!observe(static_cast<const DenseStep<N>&>(dense)))
                    return {Stop::Observer, t, y, steps, rejected};
                if (last)
                    return {Stop::Finished, t, y, steps, rejected};
                double fac = 0.9 * std::pow(std::max(e, 1e-10), -0.2);
                fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
                h *= fac;
                last_rejected = false;
            } else {
                ++rejected;
                h *= std::max(0.2, 0.9 * std::pow(e, -0.2));
                last_rejected = true;
            }
            if (opt.max_step > 0.0)
                h = std::min(h, opt.max_step);
        }
    }
};

/// Integrates y' = f(t, y) from t0 to t_end (either direction). `observe(const DenseStep<N>&)`
/// is called after every accepted step; returning false stops the integration there.
template <std::size_t N, class Rhs, class Observer>
Result<N> integrate(Rhs&& f, double t0, const State<N>& y0, double t_end, const Options& opt,
                    Observer&& observe)
{
    Integrator<N, std::remove_reference_t<Rhs>, std::remove_reference_t<Observer>> it{f, observe, opt};
    return it.run(t0, y0, t_end);
}

template <std::size_t N, class Rhs>
Result<N> integrate(Rhs&& f, double t0, const State<N>& y0, double t_end, const Options& opt)
{
    auto keep_going = [](const DenseStep<N>&) { return true; };
    return integrate<N>(f, t0, y0, t_end, opt, keep_going);
}

} // namespace hypgap::ode
