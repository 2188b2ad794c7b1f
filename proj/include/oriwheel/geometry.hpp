#ifndef ORIWHEEL_GEOMETRY_HPP
#define ORIWHEEL_GEOMETRY_HPP

#include <cmath>
#include <algorithm>

namespace oriwheel {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec3{x / n, y / n, z / n} : Vec3{};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dist(const Vec3& a, const Vec3& b) { return (a - b).norm(); }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Rotate (y, z) components about the x axis by angle (radians); x unchanged.
inline Vec3 rotate_x(const Vec3& p, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {p.x, c * p.y - s * p.z, s * p.y + c * p.z};
}

/// Rotate about the line parallel to x through (0, cy, cz).
inline Vec3 rotate_x_about(const Vec3& p, double angle, double cy, double cz) {
    Vec3 q{p.x, p.y - cy, p.z - cz};
    q = rotate_x(q, angle);
    return {q.x, q.y + cy, q.z + cz};
}

/// Mirror across the plane x = x0.
inline Vec3 mirror_x(const Vec3& p, double x0 = 0.0) { return {2.0 * x0 - p.x, p.y, p.z}; }

/// Signed angle from a to b in the plane, in (-pi, pi].
inline double signed_angle(const Vec2& a, const Vec2& b) {
    return std::atan2(a.cross(b), a.dot(b));
}

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

constexpr double kPi = 3.14159265358979323846;

} // namespace oriwheel

#endif // ORIWHEEL_GEOMETRY_HPP
