#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace qevolve {

/// Dense state vector: one coefficient per degree of freedom.
using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a)
{
    return std::sqrt(dot(a, a));
}

inline double norm_inf(const Vec& a)
{
    double m = 0.0;
    for (double x : a)
        m = std::max(m, std::abs(x));
    return m;
}

/// y += alpha * x
inline void axpy(double alpha, const Vec& x, Vec& y)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += alpha * x[i];
}

inline Vec subtract(const Vec& a, const Vec& b)
{
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

inline double dist2(const Vec& a, const Vec& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline bool all_finite(const Vec& a)
{
    for (double x : a)
        if (!std::isfinite(x))
            return false;
    return true;
}

} // namespace qevolve
