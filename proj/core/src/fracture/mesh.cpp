#include "qevolve/fracture/mesh.hpp"

#include <cmath>

#include <json.hpp>

#include "qevolve/errors.hpp"

namespace qevolve::fracture {

FractureMesh build_mesh(int dim, double ell, int N)
{
    QEVOLVE_REQUIRE(dim == 1 || dim == 2, "build_mesh: dim must be 1 or 2");
    QEVOLVE_REQUIRE(ell > 0.0, "build_mesh: ell must be positive");
    QEVOLVE_REQUIRE(N >= 1, "build_mesh: N must be >= 1");

    FractureMesh mesh;
    mesh.dim = dim;
    mesh.ell = ell;
    mesh.n = N;
    mesh.h = ell / static_cast<double>(N);
    const double h = mesh.h;

    if (dim == 1) {
        // left side nodes 0..N (x = i h, node N at ell), right side N+1..2N+1
        // (node N+1 duplicates x = ell)
        for (int i = 0; i <= N; ++i)
            mesh.nodes.push_back({static_cast<double>(i) * h, 0.0});
        for (int i = N; i <= 2 * N; ++i)
            mesh.nodes.push_back({static_cast<double>(i) * h, 0.0});
        for (int i = 0; i < N; ++i)
            mesh.elements.push_back({i, i + 1, -1});
        for (int i = 0; i < N; ++i)
            mesh.elements.push_back({N + 1 + i, N + 2 + i, -1});
        mesh.jump_pairs.push_back({N, N + 1, 1.0}); // counting measure on {ell}
        mesh.boundary_dofs = {0, 2 * N + 1};
        return mesh;
    }

    // 2D: (N+1) x (2N+1) nodes per block, the column x1 = ell duplicated.
    const int M = 2 * N + 1;
    const int off = (N + 1) * M;
    const auto left_id = [&](int c, int r) { return c * M + r; };
    const auto right_id = [&](int c, int r) { return off + c * M + r; };

    for (int c = 0; c <= N; ++c)
        for (int r = 0; r < M; ++r)
            mesh.nodes.push_back(
                {static_cast<double>(c) * h, static_cast<double>(r) * h});
    for (int c = 0; c <= N; ++c)
        for (int r = 0; r < M; ++r)
            mesh.nodes.push_back(
                {static_cast<double>(N + c) * h, static_cast<double>(r) * h});

    // Diagonals point away from the interface (mirror-symmetric mesh):
    // left block cells use the b-d diagonal, right block cells the a-c one.
    for (int c = 0; c < N; ++c) {
        for (int r = 0; r < M - 1; ++r) {
            const int a = left_id(c, r), b = left_id(c + 1, r);
            const int cc = left_id(c + 1, r + 1), d = left_id(c, r + 1);
            mesh.elements.push_back({a, b, d});
            mesh.elements.push_back({b, cc, d});
        }
    }
    for (int c = 0; c < N; ++c) {
        for (int r = 0; r < M - 1; ++r) {
            const int a = right_id(c, r), b = right_id(c + 1, r);
            const int cc = right_id(c + 1, r + 1), d = right_id(c, r + 1);
            mesh.elements.push_back({a, b, cc});
            mesh.elements.push_back({a, cc, d});
        }
    }

    // trapezoid lumping of the interface measure: h/2 at the ends, h inside
    for (int r = 0; r < M; ++r) {
        const double w = (r == 0 || r == M - 1) ? h / 2.0 : h;
        mesh.jump_pairs.push_back({left_id(N, r), right_id(0, r), w});
    }

    for (int r = 0; r < M; ++r)
        mesh.boundary_dofs.push_back(left_id(0, r));
    for (int r = 0; r < M; ++r)
        mesh.boundary_dofs.push_back(right_id(N, r));
    return mesh;
}

SymmetricCsr assemble_stiffness(const FractureMesh& mesh)
{
    std::vector<int> rows, cols;
    Vec vals;
    const auto add = [&](int i, int j, double v) {
        rows.push_back(i);
        cols.push_back(j);
        vals.push_back(v);
    };

    if (mesh.dim == 1) {
        for (const auto& e : mesh.elements) {
            const double len = mesh.nodes[static_cast<std::size_t>(e[1])][0] -
                               mesh.nodes[static_cast<std::size_t>(e[0])][0];
            if (!(len > 0.0))
                throw MeshError("assemble_stiffness: degenerate 1D element");
            const double k = 1.0 / len;
            add(e[0], e[0], k);
            add(e[1], e[1], k);
            add(e[0], e[1], -k);
            add(e[1], e[0], -k);
        }
        return SymmetricCsr::from_triplets(mesh.node_count(), rows, cols, vals);
    }

    for (const auto& e : mesh.elements) {
        const auto& p0 = mesh.nodes[static_cast<std::size_t>(e[0])];
        const auto& p1 = mesh.nodes[static_cast<std::size_t>(e[1])];
        const auto& p2 = mesh.nodes[static_cast<std::size_t>(e[2])];
        const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                           (p2[0] - p0[0]) * (p1[1] - p0[1]);
        const double area = 0.5 * std::abs(det);
        if (!(area > 1e-300))
            throw MeshError("assemble_stiffness: degenerate triangle");
        // gradients of P1 hats: grad phi_i = (b_i, c_i) / (2A), cyclic
        const double b[3] = {p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
        const double c[3] = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                add(e[i], e[j], (b[i] * b[j] + c[i] * c[j]) / (4.0 * area));
    }
    return SymmetricCsr::from_triplets(mesh.node_count(), rows, cols, vals);
}

std::string mesh_to_json(const FractureMesh& mesh)
{
    nlohmann::json j;
    j["dim"] = mesh.dim;
    j["ell"] = mesh.ell;
    j["N"] = mesh.n;
    j["h"] = mesh.h;
    auto nodes = nlohmann::json::array();
    for (const auto& p : mesh.nodes) {
        if (mesh.dim == 1)
            nodes.push_back({p[0]});
        else
            nodes.push_back({p[0], p[1]});
    }
    j["nodes"] = std::move(nodes);
    auto elems = nlohmann::json::array();
    for (const auto& e : mesh.elements) {
        if (mesh.dim == 1)
            elems.push_back({e[0], e[1]});
        else
            elems.push_back({e[0], e[1], e[2]});
    }
    j["elements"] = std::move(elems);
    auto pairs = nlohmann::json::array();
    for (const auto& p : mesh.jump_pairs)
        pairs.push_back({p.left, p.right, p.weight});
    j["jump_pairs"] = std::move(pairs);
    j["boundary_dofs"] = mesh.boundary_dofs;
    return j.dump(1);
}

} // namespace qevolve::fracture
