// Test-only oracles, independent of the solver implementation paths they
// check: brute-force grid searches, a dense Jacobi eigensolver, and the
// reduced 1D interface energy scan.
#pragma once

#include <functional>
#include <vector>

#include "qevolve/solver.hpp"
#include "qevolve/vec.hpp"

namespace oracles {

using qevolve::Vec;

/// argmin of lambda|y| + (y-x)^2/2 by scanning y in [-4,4] (step 1e-4,
/// refined to 1e-8 around the best cell).
double prox_scan(double x, double lambda);

/// Exhaustive grid search for the composite objective over the free DOFs of
/// obj within [lo,hi]^d, coarse scan then zooms down to step 1e-6.
/// Only practical for <= 3 free DOFs.
Vec composite_grid_search(const qevolve::CompositeObjective& obj, double lo,
                          double hi);

/// Largest-magnitude eigenvalue of a dense symmetric matrix (cyclic Jacobi).
double dense_spectral_radius(std::vector<Vec> a);

/// Reduced interface energy of the 1D bar at time t for slope m (same slope
/// on both sides, openings from the affine geometry):
/// E(m) = ell m^2 + kappa g(|4 ell t - 2 ell m|).
double reduced_energy_1d(double m, double t, double ell, double R, double kappa);

/// argmin of reduced_energy_1d over m in [-2, 4] (step 1e-5, refined 1e-9).
double reduced_energy_argmin(double t, double ell, double R, double kappa);

struct RandomInstance {
    qevolve::CompositeObjective obj;
    Vec start;
};

/// Random strongly convex 1-3 DOF composite instance with l1 rows on
/// disjoint DOFs and optionally one pinned DOF.
RandomInstance make_random_instance(std::uint64_t seed, int dim);

} // namespace oracles
