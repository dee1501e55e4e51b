#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfm {

struct IntegratorConfig {
    enum class Mode { FixedStep, Adaptive };
    Mode mode = Mode::Adaptive;
    double dt = 1e-5;       // FixedStep
    double abs_tol = 1e-8;  // Adaptive
    double rel_tol = 1e-6;
    double max_step = 1e-3;

    static IntegratorConfig fixed_step(double dt) {
        if (!(dt > 0.0)) throw std::invalid_argument("fixed_step: dt must be > 0");
        IntegratorConfig c;
        c.mode = Mode::FixedStep;
        c.dt = dt;
        return c;
    }
    static IntegratorConfig adaptive(double abs_tol = 1e-8, double rel_tol = 1e-6,
                                     double max_step = 1e-3) {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(max_step > 0.0))
            throw std::invalid_argument("adaptive: tolerances must be > 0");
        IntegratorConfig c;
        c.mode = Mode::Adaptive;
        c.abs_tol = abs_tol;
        c.rel_tol = rel_tol;
        c.max_step = max_step;
        return c;
    }
};

/// Explicit ODE driver: classical RK4 in fixed-step mode, Dormand-Prince 5(4)
/// with PI-free standard step control in adaptive mode. advance() lands on
/// t_end exactly, which is how callers obtain output samples at their own
/// times. RHS signature: void(double t, const double* y, double* dydt).
template <class RHS>
class OdeDriver {
  public:
    OdeDriver(RHS rhs, std::size_t dim, IntegratorConfig cfg)
        : rhs_(std::move(rhs)), dim_(dim), cfg_(cfg) {
        for (auto* b : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &y5_})
            b->assign(dim_, 0.0);
        h_ = cfg_.mode == IntegratorConfig::Mode::Adaptive ? cfg_.max_step : cfg_.dt;
    }

    void advance(std::vector<double>& y, double& t, double t_end) {
        if (y.size() != dim_) throw std::invalid_argument("OdeDriver: state size mismatch");
        if (t_end <= t) return;
        if (cfg_.mode == IntegratorConfig::Mode::FixedStep)
            advance_fixed(y, t, t_end);
        else
            advance_adaptive(y, t, t_end);
        t = t_end;
    }

  private:
    void advance_fixed(std::vector<double>& y, double t, double t_end) {
        const double span = t_end - t;
        const long n = std::max(1L, std::lround(span / cfg_.dt));
        const double h = span / double(n);
        for (long s = 0; s < n; ++s) rk4_step(y, t + s * h, h);
    }

    void rk4_step(std::vector<double>& y, double t, double h) {
        rhs_(t, y.data(), k1_.data());
        axpy(y, 0.5 * h, k1_, tmp_);
        rhs_(t + 0.5 * h, tmp_.data(), k2_.data());
        axpy(y, 0.5 * h, k2_, tmp_);
        rhs_(t + 0.5 * h, tmp_.data(), k3_.data());
        axpy(y, h, k3_, tmp_);
        rhs_(t + h, tmp_.data(), k4_.data());
        for (std::size_t i = 0; i < dim_; ++i)
            y[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    void advance_adaptive(std::vector<double>& y, double t, double t_end) {
        bool have_k1 = false;
        h_ = std::min(h_, cfg_.max_step);
        while (t < t_end) {
            double h = std::min(h_, t_end - t);
            if (!have_k1) {
                rhs_(t, y.data(), k1_.data());
                have_k1 = true;
            }
            const double err = dp45_attempt(y, t, h);
            if (err <= 1.0) {
                y.swap(y5_);
                t += h;
                k1_.swap(k7_); // FSAL
                const double grow =
                    err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
                h_ = std::min(cfg_.max_step, h * grow);
            } else {
                const double shrink = std::max(0.2, 0.9 * std::pow(err, -0.2));
                h_ = h * shrink;
                if (h_ < 1e-14 * std::max(1.0, std::abs(t)))
                    throw std::runtime_error(
                        "stiffness limit: step underflow at t = " + std::to_string(t) +
                        "; lower sigma1 stiffness or use fixed-step mode");
            }
        }
    }

    // One Dormand-Prince attempt from (t, y) with step h; fills y5_ and k7_,
    // returns the scaled error norm. k1_ must hold rhs(t, y).
    double dp45_attempt(const std::vector<double>& y, double t, double h) {
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                         b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                         e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                         e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

        for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
        rhs_(t + h / 5.0, tmp_.data(), k2_.data());
        for (std::size_t i = 0; i < dim_; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        rhs_(t + 3.0 * h / 10.0, tmp_.data(), k3_.data());
        for (std::size_t i = 0; i < dim_; ++i)
            tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        rhs_(t + 4.0 * h / 5.0, tmp_.data(), k4_.data());
        for (std::size_t i = 0; i < dim_; ++i)
            tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        rhs_(t + 8.0 * h / 9.0, tmp_.data(), k5_.data());
        for (std::size_t i = 0; i < dim_; ++i)
            tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                  a65 * k5_[i]);
        rhs_(t + h, tmp_.data(), k6_.data());
        for (std::size_t i = 0; i < dim_; ++i)
            y5_[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] +
                                 b6 * k6_[i]);
        rhs_(t + h, y5_.data(), k7_.data());

        double acc = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                  e6 * k6_[i] + e7 * k7_[i]);
            const double scale =
                cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y[i]), std::abs(y5_[i]));
            const double q = e / scale;
            acc += q * q;
        }
        return std::sqrt(acc / double(dim_));
    }

    static void axpy(const std::vector<double>& y, double a, const std::vector<double>& k,
                     std::vector<double>& out) {
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
    }

    RHS rhs_;
    std::size_t dim_;
    IntegratorConfig cfg_;
    double h_ = 0.0;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y5_;
};

/// One-shot integration of y' = rhs over [t0, t1].
template <class RHS>
std::vector<double> integrate(RHS rhs, std::vector<double> y0, double t0, double t1,
                              const IntegratorConfig& cfg) {
    OdeDriver<RHS> driver(std::move(rhs), y0.size(), cfg);
    double t = t0;
    driver.advance(y0, t, t1);
    return y0;
}

} // namespace pfm
