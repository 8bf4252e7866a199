#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ppife {

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point& operator+=(const Point& o) { x += o.x; y += o.y; return *this; }
    Point& operator-=(const Point& o) { x -= o.x; y -= o.y; return *this; }
    Point& operator*=(double s) { x *= s; y *= s; return *this; }

    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(Point a, double s) { return a *= s; }
    friend Point operator*(double s, Point a) { return a *= s; }
    friend bool operator==(const Point&, const Point&) = default;
};

using Vec2 = Point;

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }
inline Point lerp(const Point& a, const Point& b, double t) { return a + t * (b - a); }

/// Side of the interface: Minus is the region where the level set is negative.
enum class Side { Minus, Plus };

inline int side_index(Side s) { return s == Side::Minus ? 0 : 1; }

// Error hierarchy. Each numerical failure mode gets its own type so callers
// can attach element/edge context or decide to recover.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class MultipleCrossings : public Error {
public:
    using Error::Error;
};

class DegenerateCut : public Error {
public:
    using Error::Error;
};

class SingularLocalSystem : public Error {
public:
    using Error::Error;
};

class UnsupportedDegree : public Error {
public:
    using Error::Error;
};

class DegeneratePolygon : public Error {
public:
    using Error::Error;
};

class AsymmetricInput : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

}  // namespace ppife
