#pragma once

#include "qevolve/errors.hpp"
#include "qevolve/vec.hpp"

namespace qevolve {

/// Weighted-l1 dissipation psi(v) = sum_k w_k |v_k|, positively 1-homogeneous,
/// subadditive, and zero only at zero (weights strictly positive when enabled).
/// `enabled` is the alpha switch: disabled means psi == 0 identically.
struct Dissipation {
    Vec weights;
    bool enabled = false;

    static Dissipation off(int dim)
    {
        Dissipation d;
        d.weights.assign(static_cast<std::size_t>(dim), 0.0);
        d.enabled = false;
        return d;
    }

    static Dissipation weighted_l1(Vec w)
    {
        for (double x : w)
            QEVOLVE_REQUIRE(x > 0.0, "dissipation weights must be positive");
        Dissipation d;
        d.weights = std::move(w);
        d.enabled = true;
        return d;
    }

    int alpha() const { return enabled ? 1 : 0; }

    double value(const Vec& v) const
    {
        if (!enabled)
            return 0.0;
        QEVOLVE_REQUIRE(v.size() == weights.size(), "dissipation: dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += weights[i] * std::abs(v[i]);
        return s;
    }

    /// Constant c with (1/c)|v| <= psi(v) <= c|v| for the weighted l1.
    double norm_equivalence_constant() const
    {
        QEVOLVE_REQUIRE(enabled, "norm equivalence only defined for enabled psi");
        double wmin = weights[0], wmax = weights[0];
        for (double w : weights) {
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
        }
        const double n = static_cast<double>(weights.size());
        const double upper = wmax * std::sqrt(n); // psi(v) <= wmax*sum|v_k| <= wmax*sqrt(n)|v|
        const double lower = std::sqrt(n) / wmin; // psi(v) >= wmin*max|v_k| >= wmin|v|/sqrt(n)
        return std::max(1.0, std::max(upper, lower));
    }
};

} // namespace qevolve
