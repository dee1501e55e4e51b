#pragma once

#include "pfm/distributed.hpp"
#include "pfm/friction_params.hpp"
#include "pfm/integrate.hpp"
#include "pfm/limit_surface.hpp"
#include "pfm/math.hpp"
#include "pfm/pressure_grid.hpp"
#include "pfm/profile.hpp"
#include "pfm/reduced.hpp"
#include "pfm/surface.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfm {

enum class ModelKind { Distributed, ReducedEllipsoid, ReducedLS };

inline const char* model_name(ModelKind k) {
    switch (k) {
    case ModelKind::Distributed: return "distributed";
    case ModelKind::ReducedEllipsoid: return "reduced-ellipsoid";
    case ModelKind::ReducedLS: return "reduced-ls";
    }
    return "?";
}

/// A contact patch owned by one simulation. Handles normal-load updates:
/// plain surfaces just rescale the load, Hertzian surfaces are re-discretized
/// (the active-cell pattern is load-invariant, so bristle states carry over by
/// index), and load-dependent pressure profiles additionally re-compute the
/// limit-surface table once f_N moves beyond a relative threshold.
struct ContactSurface {
    SurfaceSpec spec;
    int n = 21;
    int n_ls = 20;
    double table_refresh_rel = 1e-3;
    bool needs_table = false;

    PressureGrid grid;
    PackedContact packed;
    LimitSurfaceTable table;
    double table_f_N = 0.0;

    static ContactSurface make(const SurfaceSpec& spec, int n, double f_N, bool needs_table,
                               int n_ls = 20) {
        ContactSurface s;
        s.spec = spec;
        s.n = n;
        s.n_ls = n_ls;
        s.needs_table = needs_table;
        s.grid = discretize(spec, n, f_N);
        s.packed = PackedContact::from(s.grid);
        if (needs_table) {
            s.table = precompute(s.grid, n_ls);
            s.table_f_N = f_N;
        }
        return s;
    }

    /// Reuse an externally computed (cached) table instead of re-sampling.
    void adopt_table(LimitSurfaceTable t) {
        table = std::move(t);
        table_f_N = grid.f_N;
        needs_table = true;
    }

    void set_normal_force(double f_N) {
        if (f_N < 0.0) throw std::runtime_error("normal force went negative");
        if (f_N == grid.f_N) return;
        if (spec.force_dependent_shape() && f_N > 0.0) {
            grid = discretize(spec, n, f_N);
            packed = PackedContact::from(grid);
            if (needs_table && spec.force_dependent_distribution() &&
                std::abs(f_N - table_f_N) > table_refresh_rel * table_f_N) {
                table = precompute(grid, n_ls);
                table_f_N = f_N;
            }
        } else {
            grid.f_N = f_N;
            packed.f_N = f_N;
        }
    }
};

struct RigidBody2D {
    double mass = 1.0;       // kg
    double inertia = 1.0;    // kg m^2
    Vec2 com_offset{};       // CoM offset from the contact-area center [m]

    static RigidBody2D disc(double mass, double radius) {
        RigidBody2D b;
        b.mass = mass;
        b.inertia = 0.5 * mass * radius * radius;
        return b;
    }
    static RigidBody2D box(double mass, double w, double h) {
        RigidBody2D b;
        b.mass = mass;
        b.inertia = mass * (w * w + h * h) / 12.0;
        return b;
    }
};

/// External loads: f_N(t) is held step-wise constant at update_rate_hz, the
/// in-plane wrench is evaluated continuously.
struct LoadProfile {
    std::function<double(double)> normal_force = [](double) { return 1.0; };
    std::function<Wrench(double)> external = [](double) { return Wrench{}; };
    double update_rate_hz = 100.0;
};

/// Whether the patch travels with the body (an object sliding on a support)
/// or stays fixed in the world (a gripper pad the object slips against).
enum class ContactFrame { BodyAttached, WorldFixed };

struct KinematicSample {
    double t;
    Twist v;
    Wrench f;
};

struct DynamicSample {
    double t;
    double x, y, theta;
    Twist v;   // CoM twist
    Wrench f;  // friction wrench at the CoP
    double fn;
};

namespace detail {

struct ReducedKernel {
    const ContactSurface* surf;
    const FrictionParams* params;
    ModelKind kind;

    Vec3 rate(const Vec3& z, const Twist& v) const {
        const ScalingMatrices s{surf->grid.r, surf->grid.u};
        if (kind == ModelKind::ReducedEllipsoid) return reduced_rate_ellipsoid(z, v, s, *params);
        if (!surf->table.valid())
            throw std::runtime_error(
                "reduced-ls model has no limit-surface table; run precompute first");
        if (params->elasto_plastic)
            return reduced_rate_ls_elastoplastic(z, v, s, surf->table, surf->grid.r, *params);
        return reduced_rate_ls(z, v, s, surf->table, surf->grid.r, *params);
    }

    Wrench force(const Vec3& z, const Vec3& zr, const Twist& v) const {
        const ScalingMatrices s{surf->grid.r, surf->grid.u};
        return reduced_wrench(z, zr, v, s, *params, surf->grid.f_N);
    }
};

} // namespace detail

/// Integrates only the bristle states along an imposed twist profile and
/// reports the CoP wrench at each output step.
inline std::vector<KinematicSample> simulate_kinematic(const TwistProfile& profile,
                                                       ModelKind kind, ContactSurface& surf,
                                                       const FrictionParams& params,
                                                       const IntegratorConfig& integrator,
                                                       double output_dt = 1e-3) {
    std::vector<KinematicSample> out;
    const double T = profile.duration();
    const std::size_t n_out = std::size_t(std::llround(T / output_dt));

    if (kind == ModelKind::Distributed) {
        const PackedContact& c = surf.packed;
        const std::size_t m = c.size();
        std::vector<double> y(2 * m, 0.0), rate(2 * m, 0.0);
        auto rhs = [&](double t, const double* z, double* dz) {
            rate_packed(profile.at(t), z, c, params, dz);
        };
        OdeDriver<decltype(rhs)> driver(rhs, y.size(), integrator);
        double t = 0.0;
        for (std::size_t k = 0; k <= n_out; ++k) {
            const double t_next = std::min(T, double(k) * output_dt);
            driver.advance(y, t, t_next);
            const Twist v = profile.at(t);
            rate_packed(v, y.data(), c, params, rate.data());
            out.push_back({t, v, wrench_packed(v, y.data(), rate.data(), c, params)});
        }
        return out;
    }

    detail::ReducedKernel kern{&surf, &params, kind};
    std::vector<double> y(3, 0.0);
    auto rhs = [&](double t, const double* z, double* dz) {
        const Vec3 r = kern.rate({z[0], z[1], z[2]}, profile.at(t));
        dz[0] = r.x;
        dz[1] = r.y;
        dz[2] = r.z;
    };
    OdeDriver<decltype(rhs)> driver(rhs, 3, integrator);
    double t = 0.0;
    for (std::size_t k = 0; k <= n_out; ++k) {
        const double t_next = std::min(T, double(k) * output_dt);
        driver.advance(y, t, t_next);
        const Twist v = profile.at(t);
        const Vec3 z{y[0], y[1], y[2]};
        const Vec3 zr = kern.rate(z, v);
        out.push_back({t, v, kern.force(z, zr, v)});
    }
    return out;
}

/// Full rigid-body simulation: m v' = f_ext + f_fric (+ gravity),
/// I w' = tau_ext + tau_fric, coupled with the bristle states. The friction
/// wrench, computed at the CoP, is transported to the CoM with the current
/// lever arm. State layout: [x y theta vx vy omega | bristles].
inline std::vector<DynamicSample>
simulate_dynamic(const RigidBody2D& body, const LoadProfile& loads, ModelKind kind,
                 ContactSurface& surf, const FrictionParams& params,
                 const IntegratorConfig& integrator, double duration, double output_dt = 1e-3,
                 ContactFrame frame = ContactFrame::BodyAttached, Vec2 gravity = {0.0, 0.0},
                 Vec2 start_pos = {0.0, 0.0}) {
    if (!(duration > 0.0)) throw std::invalid_argument("simulate_dynamic: duration must be > 0");

    const bool dist = kind == ModelKind::Distributed;
    const std::size_t m = dist ? surf.packed.size() : 0;
    const std::size_t dim = 6 + (dist ? 2 * m : 3);
    std::vector<double> y(dim, 0.0), zrate(dist ? 2 * m : 3, 0.0);
    y[0] = start_pos.x;
    y[1] = start_pos.y;

    detail::ReducedKernel kern{&surf, &params, kind};

    auto twist_at_cop = [&](const double* s) {
        // Lever arm from CoM to the (world-fixed) patch CoP; zero when the
        // patch travels with the body.
        Vec2 arm{0.0, 0.0};
        if (frame == ContactFrame::WorldFixed) arm = {-s[0], -s[1]};
        return Twist{s[3] - s[5] * arm.y, s[4] + s[5] * arm.x, s[5]};
    };

    auto rhs = [&](double t, const double* s, double* ds) {
        const Twist v = twist_at_cop(s);
        Wrench fric;
        if (dist) {
            rate_packed(v, s + 6, surf.packed, params, ds + 6);
            fric = wrench_packed(v, s + 6, ds + 6, surf.packed, params);
        } else {
            const Vec3 z{s[6], s[7], s[8]};
            const Vec3 zr = kern.rate(z, v);
            ds[6] = zr.x;
            ds[7] = zr.y;
            ds[8] = zr.z;
            fric = kern.force(z, zr, v);
        }
        // Transport the CoP wrench to the CoM.
        double tau_com = fric.tau;
        if (frame == ContactFrame::WorldFixed)
            tau_com += cross2({-s[0], -s[1]}, {fric.fx, fric.fy});
        const Wrench ext = loads.external(t);
        ds[0] = s[3];
        ds[1] = s[4];
        ds[2] = s[5];
        ds[3] = (fric.fx + ext.fx) / body.mass + gravity.x;
        ds[4] = (fric.fy + ext.fy) / body.mass + gravity.y;
        ds[5] = (tau_com + ext.tau) / body.inertia;
    };

    OdeDriver<decltype(rhs)> driver(rhs, dim, integrator);

    std::vector<DynamicSample> out;
    auto record = [&](double t) {
        const Twist v_cop = twist_at_cop(y.data());
        Wrench fric;
        if (dist) {
            rate_packed(v_cop, y.data() + 6, surf.packed, params, zrate.data());
            fric = wrench_packed(v_cop, y.data() + 6, zrate.data(), surf.packed, params);
        } else {
            const Vec3 z{y[6], y[7], y[8]};
            fric = kern.force(z, kern.rate(z, v_cop), v_cop);
        }
        out.push_back(
            {t, y[0], y[1], y[2], Twist{y[3], y[4], y[5]}, fric, surf.grid.f_N});
    };

    const double seg = 1.0 / loads.update_rate_hz;
    double t = 0.0;
    surf.set_normal_force(loads.normal_force(0.0));
    record(0.0);
    std::size_t out_idx = 1;
    std::size_t seg_idx = 1;
    const double slop = 1e-9 * std::max(1.0, duration);
    while (t < duration - slop) {
        const double seg_end = std::min(duration, double(seg_idx) * seg);
        while (out_idx * output_dt <= seg_end + slop && out_idx * output_dt <= duration + slop) {
            driver.advance(y, t, std::min(double(out_idx) * output_dt, duration));
            record(t);
            ++out_idx;
        }
        driver.advance(y, t, seg_end);
        if (t < duration - slop) surf.set_normal_force(loads.normal_force(t));
        ++seg_idx;
    }
    return out;
}

/// Smallest constant load that breaks static friction, by bisection. Probes
/// apply the load for probe_time and call it slip when the displacement
/// leaves the elastic deflection scale.
inline double measure_breakaway_force(ModelKind kind, ContactSurface& surf,
                                      const FrictionParams& params, const RigidBody2D& body,
                                      bool torsional, const IntegratorConfig& integrator,
                                      double probe_time = 0.15, int iters = 18) {
    const double f_N = surf.grid.f_N;
    const double zmax = g_curve(0.0, params) / params.sigma0;
    const double slip_threshold =
        torsional ? 5.0 * zmax / surf.grid.r : 5.0 * zmax;
    double lo = 0.0;
    double hi = 2.0 * params.mu_s * f_N * (torsional ? surf.grid.r : 1.0);
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (lo + hi);
        LoadProfile loads;
        loads.normal_force = [f_N](double) { return f_N; };
        loads.external = [&](double) {
            return torsional ? Wrench{0.0, 0.0, mid} : Wrench{mid, 0.0, 0.0};
        };
        auto trace = simulate_dynamic(body, loads, kind, surf, params, integrator, probe_time,
                                      probe_time / 10.0);
        const auto& last = trace.back();
        const double disp = torsional ? std::abs(last.theta)
                                      : std::sqrt(last.x * last.x + last.y * last.y);
        (disp > slip_threshold ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

struct GripperSetup {
    RigidBody2D body;
    Vec2 start_pos;
    LoadProfile loads;
};

/// In-hand slip-stick configuration: a 0.15 x 0.08 m, 0.2 kg plate hanging in
/// a parallel gripper (vertical plane, gravity -y), CoM offset along +x from
/// the contact-area center. The two normal-force profiles are qualitative
/// reconstructions: a 1 Hz sine sweep and a hold/release square wave, both
/// held step-wise constant at 100 Hz.
inline GripperSetup gripper_setup(int case_id, int profile_id, const PressureGrid& grid) {
    if (case_id != 1 && case_id != 2) throw std::invalid_argument("gripper case must be 1 or 2");
    if (profile_id != 1 && profile_id != 2)
        throw std::invalid_argument("normal profile must be 1 or 2");
    GripperSetup s;
    s.body = RigidBody2D::box(0.2, 0.15, 0.08);
    s.body.com_offset = {case_id == 1 ? 0.025 : 0.002, 0.0};
    // Patch CoP sits at the world origin; the CoA is -cop away from it.
    s.start_pos = Vec2{-grid.cop.x, -grid.cop.y} + s.body.com_offset;
    if (profile_id == 1) {
        s.loads.normal_force = [](double t) { return 6.5 + 4.5 * std::sin(2.0 * kPi * t); };
    } else {
        s.loads.normal_force = [](double t) {
            const double phase = t - std::floor(t);
            return phase < 0.4 ? 10.0 : 1.2;
        };
    }
    s.loads.update_rate_hz = 100.0;
    return s;
}

inline std::vector<DynamicSample> gripper_scenario(int case_id, int profile_id, ModelKind kind,
                                                   ContactSurface& surf,
                                                   const FrictionParams& params,
                                                   const IntegratorConfig& integrator,
                                                   double duration = 2.0,
                                                   double output_dt = 1e-3) {
    const GripperSetup s = gripper_setup(case_id, profile_id, surf.grid);
    return simulate_dynamic(s.body, s.loads, kind, surf, params, integrator, duration, output_dt,
                            ContactFrame::WorldFixed, {0.0, -9.81}, s.start_pos);
}

/// Trace CSV, one row per output step, 17 significant digits, written to a
/// temp file and renamed into place.
inline void write_trace_csv(const std::vector<DynamicSample>& trace, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << "t,x,y,theta,vx,vy,omega,fx,fy,tau,fn\n";
        char buf[320];
        for (const auto& s : trace) {
            std::snprintf(buf, sizeof buf,
                          "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          s.t, s.x, s.y, s.theta, s.v.vx, s.v.vy, s.v.omega, s.f.fx, s.f.fy,
                          s.f.tau, s.fn);
            out << buf;
        }
    }
    std::filesystem::rename(tmp, path);
}

inline void write_kinematic_csv(const std::vector<KinematicSample>& trace,
                                const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << "t,vx,vy,omega,fx,fy,tau\n";
        char buf[240];
        for (const auto& s : trace) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                          s.v.vx, s.v.vy, s.v.omega, s.f.fx, s.f.fy, s.f.tau);
            out << buf;
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace pfm
