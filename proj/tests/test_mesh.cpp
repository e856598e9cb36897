#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qevolve/errors.hpp"
#include "qevolve/fracture/mesh.hpp"

using namespace qevolve;
using namespace qevolve::fracture;

TEST_CASE("build_mesh 1D: hand construction for N = 2")
{
    const auto mesh = build_mesh(1, 0.5, 2);
    CHECK(mesh.node_count() == 6);
    CHECK(mesh.elements.size() == 4);
    REQUIRE(mesh.jump_pairs.size() == 1);
    CHECK(mesh.jump_pairs[0].left == 2);
    CHECK(mesh.jump_pairs[0].right == 3);
    CHECK(mesh.jump_pairs[0].weight == 1.0);
    CHECK(mesh.boundary_dofs == std::vector<int>{0, 5});
    CHECK(mesh.nodes[0][0] == 0.0);
    CHECK(mesh.nodes[5][0] == 1.0);
    CHECK(mesh.nodes[2][0] == 0.5);
    CHECK(mesh.nodes[3][0] == 0.5); // duplicate across the interface
    CHECK(mesh.interface_measure() == 1.0);
}

TEST_CASE("build_mesh 2D: hand construction for N = 1")
{
    const auto mesh = build_mesh(2, 0.5, 1);
    CHECK(mesh.node_count() == 12);
    CHECK(mesh.elements.size() == 8);
    REQUIRE(mesh.jump_pairs.size() == 3);
    CHECK(mesh.jump_pairs[0].weight == doctest::Approx(0.25));
    CHECK(mesh.jump_pairs[1].weight == doctest::Approx(0.5));
    CHECK(mesh.jump_pairs[2].weight == doctest::Approx(0.25));
    CHECK(mesh.interface_measure() == doctest::Approx(1.0)); // = 2*ell
    for (const auto& p : mesh.jump_pairs) {
        CHECK(mesh.nodes[p.left][0] == mesh.nodes[p.right][0]);
        CHECK(mesh.nodes[p.left][1] == mesh.nodes[p.right][1]);
    }
    // Dirichlet columns on both sides of the interface
    CHECK(mesh.boundary_dofs.size() == 6);
    for (int b : mesh.boundary_dofs) {
        const double x = mesh.nodes[b][0];
        CHECK((x == 0.0 || x == 1.0));
    }
}

TEST_CASE("continuous fields have zero jump on every pair")
{
    const auto mesh = build_mesh(2, 0.5, 2);
    Vec v(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i)
        v[i] = 3.0 * mesh.nodes[i][0] - mesh.nodes[i][1];
    for (const auto& p : mesh.jump_pairs)
        CHECK(v[p.right] - v[p.left] == 0.0);
}

TEST_CASE("assemble_stiffness: kernel, hand entries, exact Dirichlet energy")
{
    SUBCASE("per-side constants span the kernel")
    {
        for (int dim : {1, 2}) {
            const auto mesh = build_mesh(dim, 0.5, 2);
            const auto K = assemble_stiffness(mesh);
            // left side 1, right side -2: constant per connected component
            Vec v(mesh.node_count());
            const int left_count =
                dim == 1 ? mesh.n + 1 : (mesh.n + 1) * (2 * mesh.n + 1);
            for (int i = 0; i < mesh.node_count(); ++i)
                v[i] = i < left_count ? 1.0 : -2.0;
            const Vec Kv = K.multiply(v);
            CHECK(norm_inf(Kv) <= 1e-12);
        }
    }
    SUBCASE("1D N=1: per-side element matrix (1/h)[[1,-1],[-1,1]], h=0.5")
    {
        const auto mesh = build_mesh(1, 0.5, 1);
        const auto K = assemble_stiffness(mesh);
        Vec e0(4, 0.0);
        e0[0] = 1.0;
        const Vec k0 = K.multiply(e0);
        CHECK(k0[0] == doctest::Approx(2.0));
        CHECK(k0[1] == doctest::Approx(-2.0));
        CHECK(k0[2] == 0.0);
        CHECK(k0[3] == 0.0);
    }
    SUBCASE("2D: field x1 on the right half has energy area/2 = 0.25")
    {
        const auto mesh = build_mesh(2, 0.5, 2);
        const auto K = assemble_stiffness(mesh);
        const int off = (mesh.n + 1) * (2 * mesh.n + 1);
        Vec v(mesh.node_count(), 0.0);
        for (int i = off; i < mesh.node_count(); ++i)
            v[i] = mesh.nodes[i][0];
        // gradient (1,0) on the right block only; left block stays 0
        CHECK(0.5 * K.quadratic(v) == doctest::Approx(0.25).epsilon(1e-13));
    }
    SUBCASE("degenerate element raises a mesh error")
    {
        auto mesh = build_mesh(2, 0.5, 1);
        mesh.nodes[mesh.elements[0][1]] = mesh.nodes[mesh.elements[0][0]];
        CHECK_THROWS_AS(assemble_stiffness(mesh), MeshError);
    }
}

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("mesh JSON dumps match the golden files")
{
    CHECK(mesh_to_json(build_mesh(1, 0.5, 2)) ==
          read_file(std::string(QEVOLVE_TEST_DATA) + "/golden/mesh_1d_N2.json"));
    CHECK(mesh_to_json(build_mesh(2, 0.5, 1)) ==
          read_file(std::string(QEVOLVE_TEST_DATA) + "/golden/mesh_2d_N1.json"));
}
