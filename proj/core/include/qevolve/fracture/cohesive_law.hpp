#pragma once

#include "qevolve/errors.hpp"

namespace qevolve::fracture {

struct GEval {
    double value = 0.0;
    double derivative = 0.0;
};

/// Cohesive surface density g(s) = s - s^2/(2R) for s < R, R/2 beyond:
/// C^1, nondecreasing, concave, g(0)=0, g'(0+)=1.
inline GEval g_eval(double s, double R)
{
    QEVOLVE_REQUIRE(s >= 0.0, "g_eval: opening must be nonnegative");
    QEVOLVE_REQUIRE(R > 0.0, "g_eval: cohesive range must be positive");
    if (s < R)
        return {s - s * s / (2.0 * R), 1.0 - s / R};
    return {R / 2.0, 0.0};
}

/// C^{1,1} remainder of the split g(|s|) = |s| + h(s); the kink of g(|.|) is
/// carried entirely by the |s| part, so the prox stays closed-form.
inline double h_value(double s, double R)
{
    const double a = std::abs(s);
    if (a < R)
        return -s * s / (2.0 * R);
    return R / 2.0 - a;
}

inline double h_derivative(double s, double R)
{
    if (std::abs(s) < R)
        return -s / R;
    return s > 0.0 ? -1.0 : 1.0;
}

} // namespace qevolve::fracture
