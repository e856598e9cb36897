#include "qevolve/fracture/model.hpp"

#include <cmath>
#include <random>

#include "qevolve/fracture/cohesive_law.hpp"

namespace qevolve::fracture {

LoadKind load_kind_from_string(const std::string& s)
{
    if (s == "w1")
        return LoadKind::w1;
    if (s == "w2")
        return LoadKind::w2;
    if (s == "w1d")
        return LoadKind::w1d;
    throw ArgumentError("unknown load kind '" + s + "' (expected w1, w2, or w1d)");
}

std::string to_string(LoadKind k)
{
    switch (k) {
    case LoadKind::w1:
        return "w1";
    case LoadKind::w2:
        return "w2";
    default:
        return "w1d";
    }
}

namespace {

double load_value(LoadKind kind, double t, double ell, double x1, double x2)
{
    switch (kind) {
    case LoadKind::w1:
    case LoadKind::w1d:
        return 2.0 * (x1 - ell) * t;
    case LoadKind::w2:
        return 2.0 * t * std::cos(2.0 * (x2 - ell) / ell) * (x1 - ell);
    }
    return 0.0;
}

} // namespace

Vec boundary_load(LoadKind kind, double t, const FractureMesh& mesh)
{
    Vec out;
    out.reserve(mesh.boundary_dofs.size());
    for (int b : mesh.boundary_dofs) {
        const auto& p = mesh.nodes[static_cast<std::size_t>(b)];
        out.push_back(load_value(kind, t, mesh.ell, p[0], p[1]));
    }
    return out;
}

Vec boundary_load_rate(LoadKind kind, double /*t*/, const FractureMesh& mesh)
{
    // loads are linear in t: the rate is the t = 1 field
    return boundary_load(kind, 1.0, mesh);
}

Vec load_field(LoadKind kind, double t, const FractureMesh& mesh)
{
    Vec out;
    out.reserve(mesh.nodes.size());
    for (const auto& p : mesh.nodes)
        out.push_back(load_value(kind, t, mesh.ell, p[0], p[1]));
    return out;
}

FractureModel::FractureModel(FractureMesh mesh, FractureParams params)
    : mesh_(std::move(mesh)), params_(params)
{
    QEVOLVE_REQUIRE(params_.R > 0.0, "fracture: R must be positive");
    QEVOLVE_REQUIRE(params_.kappa > 0.0, "fracture: kappa must be positive");
    QEVOLVE_REQUIRE(params_.eta >= 1.0 / (2.0 * params_.R),
                    "fracture: eta must be at least 1/(2R)");
    for (std::size_t k = 1; k < mesh_.boundary_dofs.size(); ++k)
        QEVOLVE_REQUIRE(mesh_.boundary_dofs[k - 1] < mesh_.boundary_dofs[k],
                        "fracture: boundary DOFs must be ascending");
    K_ = assemble_stiffness(mesh_);
}

double FractureModel::smooth_part(const Vec& v, Vec* grad) const
{
    QEVOLVE_REQUIRE(static_cast<int>(v.size()) == dim(),
                    "fracture energy: dimension mismatch");
    double e = 0.5 * K_.quadratic(v);
    if (grad)
        K_.multiply(v, *grad);
    const double R = params_.R;
    const double kappa = params_.kappa;
    for (const auto& p : mesh_.jump_pairs) {
        const double j = jump(v, p);
        e += kappa * p.weight * h_value(j, R);
        if (grad) {
            const double hd = kappa * p.weight * h_derivative(j, R);
            (*grad)[static_cast<std::size_t>(p.right)] += hd;
            (*grad)[static_cast<std::size_t>(p.left)] -= hd;
        }
    }
    return e;
}

EnergyBreakdown FractureModel::fracture_energy(const Vec& v) const
{
    QEVOLVE_REQUIRE(static_cast<int>(v.size()) == dim(),
                    "fracture energy: dimension mismatch");
    EnergyBreakdown out;
    out.elastic = 0.5 * K_.quadratic(v);
    for (const auto& p : mesh_.jump_pairs)
        out.crack += params_.kappa * p.weight *
                     g_eval(std::abs(jump(v, p)), params_.R).value;
    out.total = out.elastic + out.crack;
    return out;
}

EnergyModel FractureModel::energy_model() const
{
    EnergyModel m;
    m.dim = dim();
    m.eta = params_.eta;
    // self-contained copies: the model stays valid if this object moves
    m.smooth = [K = K_, pairs = mesh_.jump_pairs, kappa = params_.kappa,
                R = params_.R](const Vec& v, Vec* grad) {
        double e = 0.5 * K.quadratic(v);
        if (grad)
            K.multiply(v, *grad);
        for (const auto& p : pairs) {
            const double j = v[static_cast<std::size_t>(p.right)] -
                             v[static_cast<std::size_t>(p.left)];
            e += kappa * p.weight * h_value(j, R);
            if (grad) {
                const double hd = kappa * p.weight * h_derivative(j, R);
                (*grad)[static_cast<std::size_t>(p.right)] += hd;
                (*grad)[static_cast<std::size_t>(p.left)] -= hd;
            }
        }
        return e;
    };
    for (const auto& p : mesh_.jump_pairs) {
        // sigma = g'(0+) = 1: the kink carries weight kappa * w_e
        L1Term term;
        term.idx = {p.left, p.right};
        term.coeff = {-1.0, 1.0};
        term.weight = params_.kappa * p.weight;
        m.l1_terms.push_back(std::move(term));
    }
    return m;
}

DofSelection FractureModel::constraint() const
{
    return DofSelection(dim(), mesh_.boundary_dofs);
}

LoadPath FractureModel::load_path(LoadKind kind, double T) const
{
    QEVOLVE_REQUIRE(T >= 0.0, "load_path: horizon must be nonnegative");
    if (mesh_.dim == 1)
        QEVOLVE_REQUIRE(kind == LoadKind::w1d, "load_path: 1D mesh needs w1d");
    else
        QEVOLVE_REQUIRE(kind != LoadKind::w1d, "load_path: 2D mesh needs w1 or w2");
    LoadPath lp;
    lp.horizon = T;
    lp.eval = [mesh = mesh_, kind](double t) { return boundary_load(kind, t, mesh); };
    lp.rate = [mesh = mesh_, kind](double t) {
        return boundary_load_rate(kind, t, mesh);
    };
    return lp;
}

double FractureModel::max_abs_jump(const Vec& v) const
{
    double m = 0.0;
    for (const auto& p : mesh_.jump_pairs)
        m = std::max(m, std::abs(jump(v, p)));
    return m;
}

std::function<bool(int)> FractureModel::kink_proximity(const Vec& v,
                                                       double margin) const
{
    std::vector<char> flagged(v.size(), 0);
    for (const auto& p : mesh_.jump_pairs) {
        if (std::abs(std::abs(jump(v, p)) - params_.R) <= margin) {
            flagged[static_cast<std::size_t>(p.left)] = 1;
            flagged[static_cast<std::size_t>(p.right)] = 1;
        }
    }
    return [flagged = std::move(flagged)](int i) {
        return flagged[static_cast<std::size_t>(i)] != 0;
    };
}

double FractureModel::interface_trace_constant(int iters) const
{
    const auto n = static_cast<std::size_t>(dim());
    std::mt19937_64 rng(0xFEEDull);
    std::normal_distribution<double> nd;
    Vec u(n);
    for (double& x : u)
        x = nd(rng);
    double lam = 0.0;
    Vec y(n);
    for (int it = 0; it < iters; ++it) {
        const double un = norm2(u);
        if (un == 0.0)
            return 0.0;
        for (double& x : u)
            x /= un;
        // y = J^T W J u with J the jump operator, W the interface weights
        y.assign(n, 0.0);
        for (const auto& p : mesh_.jump_pairs) {
            const double j = jump(u, p);
            y[static_cast<std::size_t>(p.right)] += p.weight * j;
            y[static_cast<std::size_t>(p.left)] -= p.weight * j;
        }
        lam = dot(u, y);
        u = y;
    }
    return lam;
}

} // namespace qevolve::fracture
