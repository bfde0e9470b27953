// Adaptive Dormand-Prince 5(4) with 4th-order dense output.
// Coefficients follow Hairer, Norsett & Wanner, Solving ODEs I (DOPRI5).
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include "duffing/errors.hpp"

namespace duffing {

struct StepStats {
    long accepted{0};
    long rejected{0};

    StepStats& operator+=(const StepStats& o) {
        accepted += o.accepted;
        rejected += o.rejected;
        return *this;
    }
};

struct StepControl {
    double rel_tol{1e-10};
    double abs_tol{1e-12};
    double max_step{1.0};
};

template <std::size_t N>
class Dopri5 {
  public:
    using State = std::array<double, N>;
    using Rhs = std::function<void(double, const State&, State&)>;

    // One accepted step with its continuous extension.
    struct DenseStep {
        double t0{}, t1{};
        State y0{}, y1{};
        std::array<State, 5> cont{};

        State eval(double t) const {
            const double h = t1 - t0;
            const double th = (t - t0) / h;
            const double th1 = 1.0 - th;
            State out;
            for (std::size_t i = 0; i < N; ++i) {
                out[i] = cont[0][i] +
                         th * (cont[1][i] + th1 * (cont[2][i] + th * (cont[3][i] + th1 * cont[4][i])));
            }
            return out;
        }
    };

    using StepCallback = std::function<void(const DenseStep&)>;

    // Integrate from (t0, y0) to t_end (t_end > t0), invoking on_step after each
    // accepted step. Returns the final state; throws NumericalError on step-size
    // underflow or excessive step counts.
    static State integrate(const Rhs& rhs, double t0, const State& y0, double t_end,
                           const StepControl& ctl, StepStats* stats = nullptr,
                           const StepCallback& on_step = nullptr) {
        if (!(t_end > t0)) throw ConfigError("dopri5: t_end must exceed t0");

        State y = y0;
        State k1;
        rhs(t0, y, k1);
        double t = t0;
        double h = initial_step(rhs, t0, y, k1, ctl);

        State k2, k3, k4, k5, k6, k7, ytmp, ynew;
        long accepted = 0, rejected = 0;

        while (t < t_end) {
            if (h > ctl.max_step) h = ctl.max_step;
            if (t + h >= t_end) h = t_end - t;
            if (!(h > std::abs(t) * 1e-14 + 1e-300))
                throw NumericalError("dopri5: step size underflow at t=" + std::to_string(t));

            stage(rhs, t, y, k1, h, k2, k3, k4, k5, k6, k7, ytmp, ynew);

            double err_norm = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc =
                    ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                                      kE6 * k6[i] + kE7 * k7[i]);
                const double q = e / sc;
                err_norm += q * q;
            }
            // error per unit step keeps the accumulated error near tol over the
            // whole span rather than tol per step
            err_norm = std::sqrt(err_norm / static_cast<double>(N)) / h;

            if (err_norm <= 1.0) {
                ++accepted;
                if (on_step) {
                    DenseStep ds;
                    ds.t0 = t;
                    ds.t1 = t + h;
                    ds.y0 = y;
                    ds.y1 = ynew;
                    build_dense(y, ynew, k1, k3, k4, k5, k6, k7, h, ds.cont);
                    on_step(ds);
                }
                t += h;
                y = ynew;
                k1 = k7;  // FSAL
                const double fac =
                    std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2)));
                h *= fac;
            } else {
                ++rejected;
                h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
            }
            if (accepted + rejected > 50'000'000)
                throw NumericalError("dopri5: step budget exhausted");
        }
        if (stats) {
            stats->accepted += accepted;
            stats->rejected += rejected;
        }
        return y;
    }

  private:
    // Butcher tableau.
    static constexpr double kA21 = 1.0 / 5;
    static constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
    static constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
    static constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                            kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
    static constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                            kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
    static constexpr double kA71 = 35.0 / 384, kA73 = 500.0 / 1113, kA74 = 125.0 / 192,
                            kA75 = -2187.0 / 6784, kA76 = 11.0 / 84;
    static constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
    static constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                            kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
    static constexpr double kD1 = -12715105075.0 / 11282082432.0;
    static constexpr double kD3 = 87487479700.0 / 32700410799.0;
    static constexpr double kD4 = -10690763975.0 / 1880347072.0;
    static constexpr double kD5 = 701980252875.0 / 199316789632.0;
    static constexpr double kD6 = -1453857185.0 / 822651844.0;
    static constexpr double kD7 = 69997945.0 / 29380423.0;

    static void stage(const Rhs& rhs, double t, const State& y, const State& k1, double h,
                      State& k2, State& k3, State& k4, State& k5, State& k6, State& k7,
                      State& ytmp, State& ynew) {
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
        rhs(t + kC2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        rhs(t + kC3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        rhs(t + kC4 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        rhs(t + kC5 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] =
                y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] +
                                  kA76 * k6[i]);
        rhs(t + h, ynew, k7);
    }

    static void build_dense(const State& y0, const State& y1, const State& k1, const State& k3,
                            const State& k4, const State& k5, const State& k6, const State& k7,
                            double h, std::array<State, 5>& cont) {
        for (std::size_t i = 0; i < N; ++i) {
            const double ydiff = y1[i] - y0[i];
            const double bspl = h * k1[i] - ydiff;
            cont[0][i] = y0[i];
            cont[1][i] = ydiff;
            cont[2][i] = bspl;
            cont[3][i] = ydiff - h * k7[i] - bspl;
            cont[4][i] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] +
                              kD6 * k6[i] + kD7 * k7[i]);
        }
    }

    static double initial_step(const Rhs& rhs, double t0, const State& y0, const State& f0,
                               const StepControl& ctl) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = ctl.abs_tol + ctl.rel_tol * std::abs(y0[i]);
            d0 += (y0[i] / sc) * (y0[i] / sc);
            d1 += (f0[i] / sc) * (f0[i] / sc);
        }
        d0 = std::sqrt(d0 / static_cast<double>(N));
        d1 = std::sqrt(d1 / static_cast<double>(N));
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * (d0 / d1);
        h0 = std::min(h0, ctl.max_step);

        // One explicit Euler probe to estimate the second derivative scale.
        State y1, f1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h0 * f0[i];
        rhs(t0 + h0, y1, f1);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = ctl.abs_tol + ctl.rel_tol * std::abs(y0[i]);
            const double df = (f1[i] - f0[i]) / sc;
            d2 += df * df;
        }
        d2 = std::sqrt(d2 / static_cast<double>(N)) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                        : std::pow(0.01 / dm, 0.2);
        return std::min({100.0 * h0, h1, ctl.max_step});
    }
};

}  // namespace duffing
