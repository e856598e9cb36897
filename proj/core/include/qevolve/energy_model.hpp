#pragma once

#include <functional>
#include <vector>

#include "qevolve/vec.hpp"

namespace qevolve {

/// One separable nonsmooth contribution weight * |sum_k coeff_k * v_{idx_k}|.
/// Terms of a model act on pairwise disjoint DOF sets, which keeps the prox
/// closed-form per term.
struct L1Term {
    std::vector<int> idx;
    Vec coeff;
    double weight = 0.0;

    double apply(const Vec& v) const
    {
        double s = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k)
            s += coeff[k] * v[static_cast<std::size_t>(idx[k])];
        return s;
    }
};

/// Energy J(v) = smooth(v) + sum_k w_k |a_k . v| with a Lipschitz-gradient
/// smooth part, plus the convexification parameter eta for the proximal
/// inner loop: J + eta|.|^2 must be strongly convex.
struct EnergyModel {
    int dim = 0;
    double eta = 0.0;

    /// Value of the smooth part; fills *grad when non-null.
    std::function<double(const Vec&, Vec*)> smooth;

    std::vector<L1Term> l1_terms;

    double smooth_value(const Vec& v) const { return smooth(v, nullptr); }

    double energy(const Vec& v) const
    {
        double e = smooth(v, nullptr);
        for (const auto& t : l1_terms)
            e += t.weight * std::abs(t.apply(v));
        return e;
    }

    /// One element of the subdifferential of J at v. At kinks (a_k.v == 0) the
    /// term's subgradient s in [-1,1] is chosen to cancel as much of the smooth
    /// gradient along a_k as possible, which is the certificate the prox
    /// solver converges to.
    Vec subgradient_select(const Vec& v) const;
};

} // namespace qevolve
