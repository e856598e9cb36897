#include "qevolve/constraint.hpp"

#include <algorithm>

namespace qevolve {

DofSelection::DofSelection(int n, std::vector<int> constrained)
    : dim(n), dofs(std::move(constrained))
{
    QEVOLVE_REQUIRE(!dofs.empty(), "constraint needs at least one DOF");
    std::sort(dofs.begin(), dofs.end());
    QEVOLVE_REQUIRE(std::adjacent_find(dofs.begin(), dofs.end()) == dofs.end(),
                    "duplicate constrained DOF");
    QEVOLVE_REQUIRE(dofs.front() >= 0 && dofs.back() < n,
                    "constrained DOF out of range");
    mask_.assign(static_cast<std::size_t>(n), 0);
    for (int d : dofs)
        mask_[static_cast<std::size_t>(d)] = 1;
}

Vec DofSelection::apply(const Vec& v) const
{
    QEVOLVE_REQUIRE(static_cast<int>(v.size()) == dim, "constraint: dimension mismatch");
    Vec out(dofs.size());
    for (std::size_t k = 0; k < dofs.size(); ++k)
        out[k] = v[static_cast<std::size_t>(dofs[k])];
    return out;
}

void DofSelection::add_adjoint(const Vec& q, Vec& out) const
{
    QEVOLVE_REQUIRE(q.size() == dofs.size(), "adjoint: dimension mismatch");
    for (std::size_t k = 0; k < dofs.size(); ++k)
        out[static_cast<std::size_t>(dofs[k])] += q[k];
}

void DofSelection::pin(Vec& v, const Vec& values) const
{
    QEVOLVE_REQUIRE(values.size() == dofs.size(), "pin: dimension mismatch");
    for (std::size_t k = 0; k < dofs.size(); ++k)
        v[static_cast<std::size_t>(dofs[k])] = values[k];
}

} // namespace qevolve
