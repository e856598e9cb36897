#pragma once

#include <array>
#include <string>
#include <vector>

#include "qevolve/sparse.hpp"
#include "qevolve/vec.hpp"

namespace qevolve::fracture {

/// Duplicate-node pair across the interface; jump = v[right] - v[left].
/// The weight is the interface measure carried by the pair (trapezoid lumping
/// along the interface in 2D, a single unit-weight pair in 1D).
struct JumpPair {
    int left = 0;
    int right = 0;
    double weight = 0.0;
};

/// Triangulation of the slit domain with the interface column duplicated.
/// 1D elements are stored as {a, b, -1}.
struct FractureMesh {
    int dim = 0;     // 1 or 2
    double ell = 0;  // half-width; domain (0, 2*ell)^dim, interface at x1 = ell
    int n = 0;       // N: mesh step h = ell / N
    double h = 0.0;

    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 3>> elements;
    std::vector<JumpPair> jump_pairs;
    std::vector<int> boundary_dofs; // Dirichlet nodes on x1 in {0, 2*ell}

    int node_count() const { return static_cast<int>(nodes.size()); }
    double interface_measure() const
    {
        double s = 0.0;
        for (const auto& p : jump_pairs)
            s += p.weight;
        return s;
    }
};

/// Uniform mesh: 1D splits [0, 2*ell] into 2N intervals with the node at ell
/// duplicated; 2D splits (0,2*ell)^2 into 2N x 2N squares, two triangles each,
/// no edge crossing the interface, the column x1 = ell duplicated. Triangle
/// diagonals point away from the interface, mirror-symmetric across it.
FractureMesh build_mesh(int dim, double ell, int N);

/// P1 stiffness of the slit domain: (1/2) v^T K v equals the Dirichlet energy
/// of the piecewise-affine interpolant. Throws MeshError on degenerate cells.
SymmetricCsr assemble_stiffness(const FractureMesh& mesh);

/// JSON dump with nodes/elements/jump_pairs/boundary_dofs arrays.
std::string mesh_to_json(const FractureMesh& mesh);

} // namespace qevolve::fracture
