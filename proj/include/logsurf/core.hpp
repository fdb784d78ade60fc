#ifndef LOGSURF_CORE_HPP
#define LOGSURF_CORE_HPP

#include <cmath>
#include <cstdint>

namespace logsurf {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
// counterclockwise rotation by +90 degrees
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

// Kernel execution mode. Parallel uses OpenMP when compiled in; every parallel
// loop assigns whole output elements and keeps scalar reductions serial, so
// Serial and Parallel produce bit-identical results for any thread count.
enum class ExecMode { Serial, Parallel };

} // namespace logsurf

#endif
