#include "qevolve/fracture/oracle1d.hpp"

#include <cmath>

#include "qevolve/fracture/cohesive_law.hpp"

namespace qevolve::fracture {

std::string to_string(Phase1D p)
{
    switch (p) {
    case Phase1D::elastic:
        return "elastic";
    case Phase1D::cohesive:
        return "cohesive";
    default:
        return "broken";
    }
}

Oracle1D analytic_1d_oracle(double t, double ell, double R, double kappa)
{
    QEVOLVE_REQUIRE(t >= 0.0, "oracle1d: time must be nonnegative");
    QEVOLVE_REQUIRE(ell > 0.0 && R > 0.0 && kappa > 0.0,
                    "oracle1d: parameters must be positive");

    Oracle1D out;
    if (t <= kappa / 2.0) {
        // elastic lift of the boundary datum: slope 2t, no opening
        out.phase = Phase1D::elastic;
        out.slope = 2.0 * t;
        out.jump = 0.0;
        out.total_energy = ell * out.slope * out.slope;
        return out;
    }
    if (t < R / 2.0) {
        const double denom = R - 2.0 * kappa * ell;
        if (std::abs(denom) < 1e-14)
            throw ArgumentError("oracle1d: cohesive branch degenerate at R = 2*kappa*ell");
        if (denom < 0.0) {
            // no cohesive equilibrium: the bar is already fully broken
            out.phase = Phase1D::broken;
            out.slope = 0.0;
            out.jump = 4.0 * ell * t;
            out.total_energy = kappa * R / 2.0;
            return out;
        }
        out.phase = Phase1D::cohesive;
        out.slope = kappa * (R - 4.0 * ell * t) / denom;
        out.jump = 4.0 * ell * t - 2.0 * ell * out.slope;
        out.total_energy =
            ell * out.slope * out.slope + kappa * g_eval(out.jump, R).value;
        return out;
    }
    out.phase = Phase1D::broken;
    out.slope = 0.0;
    out.jump = 4.0 * ell * t;
    out.total_energy = kappa * R / 2.0;
    return out;
}

} // namespace qevolve::fracture
