#include "pfm/distributed.hpp"
#include "pfm/integrate.hpp"
#include "pfm/pressure_grid.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace pfm;

TEST_CASE("g curve limits and Stribeck midpoint", "[distributed]") {
    const FrictionParams p = FrictionParams::p1();
    CHECK(g_curve(0.0, p) == Catch::Approx(p.mu_s).epsilon(1e-15));
    CHECK(g_curve(1e3, p) == Catch::Approx(p.mu_c).epsilon(1e-15));
    CHECK(g_curve(p.v_s, p) == Catch::Approx(1.0 + 0.2 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("cell velocity is the rigid motion field", "[distributed]") {
    const Vec2 a = cell_velocity({1.0, 0.0, 0.0}, 0.003, -0.008);
    CHECK(a.x == 1.0);
    CHECK(a.y == 0.0);
    const Vec2 b = cell_velocity({0.0, 0.0, 1.0}, 0.01, 0.0);
    CHECK(b.x == 0.0);
    CHECK(b.y == Catch::Approx(0.01).epsilon(1e-15));
    const Vec2 c = cell_velocity({1.0, 0.0, 2.0}, 0.005, 0.005);
    CHECK(c.x == Catch::Approx(0.99).epsilon(1e-15));
    CHECK(c.y == Catch::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("elasto-plastic factor branches", "[distributed]") {
    const double z_max = 1.2e-6;
    const double s_ba = 0.9;
    const double z_ba = s_ba * z_max;

    // Below breakaway: zero regardless of direction.
    CHECK(elasto_plastic_beta(Vec2{0.5 * z_ba, 0.0}, Vec2{1.0, 0.0}, z_max, s_ba) == 0.0);
    // Saturated and aligned: one.
    CHECK(elasto_plastic_beta(Vec2{z_max, 0.0}, Vec2{0.3, 0.0}, z_max, s_ba) ==
          Catch::Approx(1.0).epsilon(1e-15));
    // Midpoint of the transition with aligned velocity: the sinusoid gives 1/2.
    const double mid = 0.5 * (z_ba + z_max);
    CHECK(elasto_plastic_beta(Vec2{mid, 0.0}, Vec2{2.0, 0.0}, z_max, s_ba) ==
          Catch::Approx(0.5).epsilon(1e-12));
    // Anti-aligned: eps = 0.
    CHECK(elasto_plastic_beta(Vec2{z_max, 0.0}, Vec2{-1.0, 0.0}, z_max, s_ba) == 0.0);
    // Zero states never evaluate z_hat.
    CHECK(elasto_plastic_beta(Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, z_max, s_ba) == 0.0);
    CHECK(elasto_plastic_beta(Vec2{z_max, 0.0}, Vec2{0.0, 0.0}, z_max, s_ba) == 0.0);
}

TEST_CASE("bristle rate fixed points", "[distributed]") {
    const PressureGrid grid = discretize(SurfaceSpec::circle(0.01), 11, 1.0);
    FrictionParams p = FrictionParams::p1();

    BristleField z(grid.n), rate(grid.n);
    SECTION("zero velocity everywhere freezes the field") {
        for (int i : grid.active) {
            z.zx[i] = 1e-7;
            z.zy[i] = -2e-7;
        }
        bristle_rate({0.0, 0.0, 0.0}, z, grid, p, rate);
        for (int i : grid.active) {
            CHECK(rate.zx[i] == 0.0);
            CHECK(rate.zy[i] == 0.0);
        }
    }

    SECTION("steady-state deflection has zero rate") {
        const Twist v{0.004, -0.002, 1.5};
        for (int i : grid.active) {
            const Vec2 vt = cell_velocity(v, grid.cx[i], grid.cy[i]);
            const double speed = norm(vt);
            const double g = g_curve(speed, p);
            z.zx[i] = g * vt.x / (p.sigma0 * speed);
            z.zy[i] = g * vt.y / (p.sigma0 * speed);
        }
        bristle_rate(v, z, grid, p, rate);
        for (int i : grid.active) {
            CHECK(std::abs(rate.zx[i]) < 1e-12);
            CHECK(std::abs(rate.zy[i]) < 1e-12);
        }
    }

    SECTION("elasto-plastic is a pure spring below breakaway") {
        p.elasto_plastic = true;
        const Twist v{0.006, 0.001, -2.0};
        for (int i : grid.active) {
            z.zx[i] = 3e-7; // well under z_ba = 0.9 * g/sigma0 ~ 1e-6
            z.zy[i] = -2e-7;
        }
        bristle_rate(v, z, grid, p, rate);
        for (int i : grid.active) {
            const Vec2 vt = cell_velocity(v, grid.cx[i], grid.cy[i]);
            CHECK(rate.zx[i] == vt.x);
            CHECK(rate.zy[i] == vt.y);
        }
    }
}

TEST_CASE("wrench reaches the Coulomb limits", "[distributed]") {
    const double f_N = 2.0;
    const PressureGrid grid = discretize(SurfaceSpec::circle(0.01), 101, f_N);

    SECTION("steady sliding fast against Stribeck") {
        FrictionParams p = FrictionParams::p1();
        p.sigma2 = 0.0;
        const Wrench f = steady_state_wrench({1.0, 0.0, 0.0}, grid, p);
        CHECK(f.fx == Catch::Approx(-p.mu_c * f_N).epsilon(1e-9));
        CHECK(std::abs(f.fy) < 1e-12);
        CHECK(std::abs(f.tau) < 1e-12);
    }

    SECTION("pure rotation torque equals mu fN r") {
        const FrictionParams p = FrictionParams::p0();
        const Wrench f = steady_state_wrench({0.0, 0.0, 3.0}, grid, p);
        CHECK(std::abs(f.fx) < 1e-12);
        CHECK(std::abs(f.fy) < 1e-12);
        CHECK(f.tau == Catch::Approx(-p.mu_c * f_N * grid.r).epsilon(1e-9));
    }

    SECTION("zero state, zero rate, zero viscous gives zero wrench") {
        FrictionParams p = FrictionParams::p0();
        BristleField z(grid.n), rate(grid.n);
        const Wrench f = wrench({0.01, 0.02, 1.0}, z, rate, grid, p);
        CHECK(f.fx == 0.0);
        CHECK(f.fy == 0.0);
        CHECK(f.tau == 0.0);
    }
}

TEST_CASE("single cell reduces to the scalar model", "[distributed][oracle]") {
    const double f_N = 2.5;
    const PressureGrid grid = single_cell_grid(1e-4, f_N);
    const PackedContact c = PackedContact::from(grid);

    auto velocity = [](double t) {
        if (t < 0.05) return 0.2 * t; // ramp to 0.01
        if (t < 0.15) return 0.01;
        if (t < 0.2) return 0.01 - 0.3 * (t - 0.15); // down through zero to -0.005
        return -0.005;
    };
    const double dt = 1e-5;
    const double duration = 0.3;

    for (bool ep : {false, true}) {
        FrictionParams p = FrictionParams::p1();
        p.elasto_plastic = ep;
        oracle::ScalarParams sp;
        sp.sigma2 = p.sigma2;
        sp.mu_s = p.mu_s;
        sp.elasto_plastic = ep;
        const auto ref = oracle::integrate_scalar(velocity, f_N, sp, duration, dt);

        std::vector<double> y(2, 0.0), rate(2, 0.0);
        auto rhs = [&](double t, const double* z, double* dz) {
            rate_packed({velocity(t), 0.0, 0.0}, z, c, p, dz);
        };
        OdeDriver<decltype(rhs)> driver(rhs, 2, IntegratorConfig::fixed_step(dt));
        double t = 0.0;
        double max_err = 0.0, max_ref = 0.0;
        for (std::size_t k = 0; k < ref.t.size(); ++k) {
            driver.advance(y, t, ref.t[k]);
            const Twist v{velocity(t), 0.0, 0.0};
            rate_packed(v, y.data(), c, p, rate.data());
            const Wrench f = wrench_packed(v, y.data(), rate.data(), c, p);
            max_err = std::max(max_err, std::abs(f.fx - ref.f[k]));
            max_ref = std::max(max_ref, std::abs(ref.f[k]));
            CHECK(std::abs(f.fy) == 0.0);
        }
        CAPTURE(ep);
        CHECK(max_err <= 1e-9 * max_ref);
    }
}

TEST_CASE("steady state dissipates and respects the force bound", "[distributed][property]") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uv(-0.05, 0.05), uw(-5.0, 5.0);
    const PressureGrid grids[] = {discretize(SurfaceSpec::circle(0.01), 11, 1.3),
                                  discretize(SurfaceSpec::gradient_line(0.02), 11, 0.7)};
    const FrictionParams p = FrictionParams::p1();
    for (const auto& grid : grids) {
        for (int k = 0; k < 200; ++k) {
            const Twist v{uv(rng), uv(rng), uw(rng)};
            const Wrench f = steady_state_wrench(v, grid, p);
            const double power = f.fx * v.vx + f.fy * v.vy + f.tau * v.omega;
            CHECK(power <= 1e-12);
            const double vt = std::hypot(v.vx, v.vy);
            CHECK(std::hypot(f.fx, f.fy) <=
                  p.mu_s * grid.f_N * (1.0 + p.sigma2 * vt / p.mu_s) + 1e-12);
        }
    }
}

TEST_CASE("rotating the twist rotates the steady force", "[distributed][property]") {
    const PressureGrid grid = discretize(SurfaceSpec::circle(0.01), 41, 1.0);
    const FrictionParams p = FrictionParams::p0();
    const Twist v{0.008, 0.0, 1.2};
    const Wrench f = steady_state_wrench(v, grid, p);
    const double phi = 0.7;
    const Twist vr{v.vx * std::cos(phi), v.vx * std::sin(phi), v.omega};
    const Wrench fr = steady_state_wrench(vr, grid, p);
    const double fmag = std::hypot(f.fx, f.fy);
    CHECK(std::abs(fr.fx - (f.fx * std::cos(phi) - f.fy * std::sin(phi))) < 0.02 * fmag);
    CHECK(std::abs(fr.fy - (f.fx * std::sin(phi) + f.fy * std::cos(phi))) < 0.02 * fmag);
    CHECK(std::abs(std::abs(fr.tau) - std::abs(f.tau)) < 0.02 * std::abs(f.tau));
}

TEST_CASE("bilinear interpolation identities", "[distributed][bilinear]") {
    const PressureGrid grid = discretize(SurfaceSpec::circle(0.01), 21, 1.0);
    const FrictionParams p = FrictionParams::p0();
    const double omega = 2.0;

    SECTION("CoR on a cell corner reproduces the plain evaluation") {
        const double cx = grid.x0 + 7 * grid.hx - 0.5 * grid.hx;
        const double cy = grid.y0 + 9 * grid.hy - 0.5 * grid.hy;
        const Twist v{omega * cy, -omega * cx, omega};
        const Wrench a = steady_state_bilinear(v, grid, p);
        const Wrench b = steady_state_wrench(v, grid, p);
        CHECK(a.fx == Catch::Approx(b.fx).margin(1e-15));
        CHECK(a.fy == Catch::Approx(b.fy).margin(1e-15));
        CHECK(a.tau == Catch::Approx(b.tau).margin(1e-15));
    }

    SECTION("CoR on a cell center blends the four corners equally") {
        const double cx = grid.x0 + 6 * grid.hx;
        const double cy = grid.y0 + 5 * grid.hy;
        const Twist v{omega * cy, -omega * cx, omega};
        const Wrench got = steady_state_bilinear(v, grid, p);
        Wrench avg{};
        for (int dx = 0; dx <= 1; ++dx) {
            for (int dy = 0; dy <= 1; ++dy) {
                const Vec2 corner{cx + (dx - 0.5) * grid.hx, cy + (dy - 0.5) * grid.hy};
                const Twist vc{omega * corner.y, -omega * corner.x, omega};
                avg = avg + 0.25 * steady_state_wrench(vc, grid, p);
            }
        }
        CHECK(got.fx == Catch::Approx(avg.fx).margin(1e-12));
        CHECK(got.fy == Catch::Approx(avg.fy).margin(1e-12));
        CHECK(got.tau == Catch::Approx(avg.tau).margin(1e-12));
    }

    SECTION("pure translation falls back to the plain evaluator") {
        const Twist v{0.01, -0.003, 0.0};
        const Wrench a = steady_state_bilinear(v, grid, p);
        const Wrench b = steady_state_wrench(v, grid, p);
        CHECK(a.fx == b.fx);
        CHECK(a.fy == b.fy);
    }
}

TEST_CASE("bilinear interpolation removes the force steps of a line contact",
          "[distributed][bilinear]") {
    const PressureGrid grid = discretize(SurfaceSpec::line(0.02), 21, 1.0);
    const FrictionParams p = FrictionParams::p0();
    const double omega = 1.0;

    // Sweep the CoR along the line across one cell width.
    const double x_start = grid.x0 + 4 * grid.hx;
    double prev_plain = 0.0, prev_blend = 0.0;
    double jump_plain = 0.0, jump_blend = 0.0;
    const int steps = 100;
    for (int k = 0; k <= steps; ++k) {
        const double cx = x_start + grid.hx * k / steps;
        const Twist v{0.0, -omega * cx, omega};
        const double f_plain = steady_state_wrench(v, grid, p).fy;
        const double f_blend = steady_state_bilinear(v, grid, p).fy;
        if (k > 0) {
            jump_plain = std::max(jump_plain, std::abs(f_plain - prev_plain));
            jump_blend = std::max(jump_blend, std::abs(f_blend - prev_blend));
        }
        prev_plain = f_plain;
        prev_blend = f_blend;
    }
    CHECK(jump_blend < 0.2 * jump_plain);
}
