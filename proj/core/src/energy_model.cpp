#include "qevolve/energy_model.hpp"

#include <cmath>

namespace qevolve {

Vec EnergyModel::subgradient_select(const Vec& v) const
{
    Vec g;
    smooth(v, &g);
    for (const auto& term : l1_terms) {
        const double s = term.apply(v);
        double sub;
        if (s != 0.0) {
            sub = s > 0.0 ? 1.0 : -1.0;
        } else {
            // At the kink, pick the element that best cancels the smooth
            // gradient along the term's direction (the prox certificate).
            double num = 0.0, den = 0.0;
            for (std::size_t k = 0; k < term.idx.size(); ++k) {
                num += g[static_cast<std::size_t>(term.idx[k])] * term.coeff[k];
                den += term.coeff[k] * term.coeff[k];
            }
            sub = den > 0.0 ? -num / (term.weight * den) : 0.0;
            sub = std::clamp(sub, -1.0, 1.0);
        }
        for (std::size_t k = 0; k < term.idx.size(); ++k)
            g[static_cast<std::size_t>(term.idx[k])] += term.weight * sub * term.coeff[k];
    }
    return g;
}

} // namespace qevolve
