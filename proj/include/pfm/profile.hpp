#pragma once

#include "pfm/math.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfm {

/// Piecewise-linear twist signal (t, vx, vy, omega breakpoints).
struct TwistProfile {
    std::vector<double> t;
    std::vector<Twist> v;

    double duration() const { return t.empty() ? 0.0 : t.back(); }

    Twist at(double time) const {
        if (t.empty()) return {};
        if (time <= t.front()) return v.front();
        if (time >= t.back()) return v.back();
        const auto it = std::upper_bound(t.begin(), t.end(), time);
        const std::size_t k = std::size_t(it - t.begin());
        const double w = (time - t[k - 1]) / (t[k] - t[k - 1]);
        return {v[k - 1].vx + w * (v[k].vx - v[k - 1].vx),
                v[k - 1].vy + w * (v[k].vy - v[k - 1].vy),
                v[k - 1].omega + w * (v[k].omega - v[k - 1].omega)};
    }

    /// Same breakpoint shape compressed or stretched to a new duration.
    TwistProfile rescaled(double new_duration) const {
        TwistProfile out = *this;
        const double s = new_duration / duration();
        for (double& x : out.t) x *= s;
        return out;
    }
};

/// The benchmark motion used throughout: translation-only, rotation-only and
/// mixed phases over 5 s, designed so the center of rotation sweeps through a
/// contact patch of ~0.01 m scale. Also shipped as data/velocity_profile.csv.
inline TwistProfile canonical_profile() {
    TwistProfile p;
    const double rows[][4] = {
        {0.00, 0.000, 0.000, 0.0},  {0.25, 0.010, 0.000, 0.0},  {0.75, 0.010, 0.000, 0.0},
        {1.00, 0.000, 0.000, 0.0},  {1.25, 0.000, 0.000, 2.0},  {1.75, 0.000, 0.000, 2.0},
        {2.25, 0.010, 0.005, 2.0},  {2.75, -0.010, 0.005, 2.0}, {3.25, -0.010, -0.010, 1.0},
        {3.75, 0.005, -0.005, -1.0}, {4.25, 0.010, 0.000, -2.0}, {4.60, 0.000, 0.008, -2.0},
        {5.00, 0.000, 0.000, 0.0},
    };
    for (const auto& r : rows) {
        p.t.push_back(r[0]);
        p.v.push_back({r[1], r[2], r[3]});
    }
    return p;
}

inline TwistProfile load_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile: " + path);
    std::string line;
    if (!std::getline(in, line) || line.find("t") == std::string::npos)
        throw std::runtime_error("profile CSV needs a t,vx,vy,omega header: " + path);
    TwistProfile p;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        double c[4];
        for (int k = 0; k < 4; ++k) {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("bad profile row: " + line);
            c[k] = std::stod(tok);
        }
        if (!p.t.empty() && c[0] <= p.t.back())
            throw std::runtime_error("profile times must increase: " + line);
        p.t.push_back(c[0]);
        p.v.push_back({c[1], c[2], c[3]});
    }
    if (p.t.size() < 2) throw std::runtime_error("profile needs at least two rows: " + path);
    return p;
}

inline void save_profile_csv(const TwistProfile& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,vx,vy,omega\n";
    char buf[160];
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.t[i], p.v[i].vx, p.v[i].vy,
                      p.v[i].omega);
        out << buf;
    }
}

} // namespace pfm
