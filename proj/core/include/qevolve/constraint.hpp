#pragma once

#include <functional>
#include <vector>

#include "qevolve/errors.hpp"
#include "qevolve/vec.hpp"

namespace qevolve {

/// Linear constraint A v = f(t) where A selects a fixed set of DOFs
/// (Dirichlet elimination). A* injects back into the full space, and
/// |A* q| = |q| so the surjectivity constant gamma is exactly 1.
struct DofSelection {
    int dim = 0;
    std::vector<int> dofs; // strictly increasing, within [0, dim)
    double gamma = 1.0;

    DofSelection() = default;
    DofSelection(int n, std::vector<int> constrained);

    int count() const { return static_cast<int>(dofs.size()); }

    /// A v: values of the constrained DOFs.
    Vec apply(const Vec& v) const;

    /// out += A* q
    void add_adjoint(const Vec& q, Vec& out) const;

    /// Overwrite the constrained components of v with the given values.
    void pin(Vec& v, const Vec& values) const;

    bool is_constrained(int dof) const { return mask_[static_cast<std::size_t>(dof)]; }
    const std::vector<char>& mask() const { return mask_; }

private:
    std::vector<char> mask_;
};

/// Time-dependent constraint datum f: [0,T] -> values on constrained DOFs,
/// together with its time derivative.
struct LoadPath {
    std::function<Vec(double)> eval;
    std::function<Vec(double)> rate;
    double horizon = 0.0;

    Vec operator()(double t) const { return eval(t); }
};

} // namespace qevolve
