#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace pfm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

// 2D cross product: area spanned by (a, b), the torque arm form.
inline double cross2(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }

/// Planar velocity (v_x, v_y, omega) expressed at the center of pressure.
struct Twist {
    double vx = 0.0;
    double vy = 0.0;
    double omega = 0.0;
};

/// Planar force wrench (f_x, f_y, tau) expressed at the center of pressure.
struct Wrench {
    double fx = 0.0;
    double fy = 0.0;
    double tau = 0.0;
};

inline Wrench operator+(Wrench a, Wrench b) { return {a.fx + b.fx, a.fy + b.fy, a.tau + b.tau}; }
inline Wrench operator-(Wrench a, Wrench b) { return {a.fx - b.fx, a.fy - b.fy, a.tau - b.tau}; }
inline Wrench operator*(double s, Wrench a) { return {s * a.fx, s * a.fy, s * a.tau}; }

// Compensated (Kahan) accumulator; cell sums must not depend on how the
// loop is chunked, so every reduction in the force loops goes through this.
class KahanSum {
  public:
    void add(double v) {
        const double y = v - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

inline constexpr double kPi = 3.14159265358979323846;

} // namespace pfm
