#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

namespace fractopt {

// Points live in R^1..R^3; unused trailing components stay zero so the
// arithmetic below never needs to branch on the dimension.
using Vec = std::array<double, 3>;

struct Mat {
    // Row-major 3x3, identity-padded outside the active d x d block.
    std::array<std::array<double, 3>, 3> a{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    static Mat identity() { return Mat{}; }
};

inline Vec operator+(const Vec& p, const Vec& q) { return {p[0] + q[0], p[1] + q[1], p[2] + q[2]}; }
inline Vec operator-(const Vec& p, const Vec& q) { return {p[0] - q[0], p[1] - q[1], p[2] - q[2]}; }
inline Vec operator*(double s, const Vec& p) { return {s * p[0], s * p[1], s * p[2]}; }

inline double dot(const Vec& p, const Vec& q) { return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]; }
inline double norm(const Vec& p) { return std::sqrt(dot(p, p)); }
inline double distance(const Vec& p, const Vec& q) { return norm(p - q); }

inline Vec mat_apply(const Mat& m, const Vec& p) {
    Vec out{};
    for (int i = 0; i < 3; ++i)
        out[i] = m.a[i][0] * p[0] + m.a[i][1] * p[1] + m.a[i][2] * p[2];
    return out;
}

// Composition (m1 o m2) as plain matrix product.
inline Mat multiply(const Mat& m1, const Mat& m2) {
    Mat out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += m1.a[i][k] * m2.a[k][j];
            out.a[i][j] = s;
        }
    return out;
}

// Total order on points: component-wise lexicographic.
inline bool lex_less(const Vec& p, const Vec& q) {
    for (int i = 0; i < 3; ++i) {
        if (p[i] < q[i]) return true;
        if (p[i] > q[i]) return false;
    }
    return false;
}

// Full-precision printing used by file artifacts (CSV and JSON payloads):
// 17 significant digits round-trip every double exactly.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Human-facing summaries drop the last two noise digits so values like 0.6
// print cleanly; files keep the full 17 digits.
inline std::string format_pretty(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

inline std::string format_point(const Vec& p, int dimension) {
    std::string s = "(";
    for (int i = 0; i < dimension; ++i) {
        if (i) s += ", ";
        s += format_pretty(p[i]);
    }
    return s + ")";
}

}  // namespace fractopt
