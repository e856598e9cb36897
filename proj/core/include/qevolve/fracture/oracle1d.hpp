#pragma once

#include <string>

#include "qevolve/errors.hpp"

namespace qevolve::fracture {

enum class Phase1D { elastic, cohesive, broken };

std::string to_string(Phase1D p);

struct Oracle1D {
    Phase1D phase = Phase1D::elastic;
    double slope = 0.0;        // common gradient m on both sides
    double jump = 0.0;         // interface opening
    double total_energy = 0.0;
};

/// Closed-form critical-point branch for the 1D bar (0, 2*ell) with interface
/// at ell and endpoint displacement 2(x-ell)t, obtained by solving the
/// two-equation stationarity system (flux law m = kappa*g'(jump)*sign and the
/// affine geometry jump = 4*ell*t - 2*ell*m) by hand:
///   elastic  (t <= kappa/2):       m = 2t,                          jump = 0
///   cohesive (kappa/2 < t < R/2):  m = kappa(R - 4 ell t)/(R - 2 kappa ell),
///                                  jump = 4 ell t - 2 ell m
///   broken   (t >= R/2):           m = 0,                           jump = 4 ell t
/// The cohesive branch exists only for R > 2*kappa*ell and is degenerate at
/// R = 2*kappa*ell (division by zero), which is reported as an error.
Oracle1D analytic_1d_oracle(double t, double ell, double R, double kappa);

} // namespace qevolve::fracture
