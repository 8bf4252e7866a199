#include "ppife/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace ppife {

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::Classic: return "classic";
    case Scheme::SPP: return "spp";
    case Scheme::IPP: return "ipp";
    case Scheme::NPP: return "npp";
    case Scheme::Custom: return "custom";
    }
    return "custom";
}

Scheme parse_scheme(const std::string& name)
{
    if (name == "classic") return Scheme::Classic;
    if (name == "spp") return Scheme::SPP;
    if (name == "ipp") return Scheme::IPP;
    if (name == "npp") return Scheme::NPP;
    if (name == "custom") return Scheme::Custom;
    throw ConfigError("unknown scheme '" + name + "' (expected classic, spp, ipp or npp)");
}

MethodParams MethodParams::preset(Scheme scheme, double beta_minus, double beta_plus)
{
    MethodParams p;
    p.scheme = scheme;
    const double bmax = std::max(beta_minus, beta_plus);
    switch (scheme) {
    case Scheme::Classic:
    case Scheme::Custom:
        break;
    case Scheme::SPP:
        p.delta = -1.0;
        p.epsilon = -1.0;
        p.sigma0 = 10.0 * bmax;
        break;
    case Scheme::IPP:
        p.delta = -1.0;
        p.epsilon = 0.0;
        p.sigma0 = 10.0 * bmax;
        break;
    case Scheme::NPP:
        p.delta = -1.0;
        p.epsilon = 1.0;
        p.sigma0 = 1.0;
        break;
    }
    return p;
}

namespace {

// Coefficient side at p: chord side on interface elements, the element's
// side otherwise.
Side material_side(const Discretization& disc, int e, const Point& p)
{
    const auto& cut = disc.cuts[static_cast<std::size_t>(e)];
    return cut.interface ? disc.bases[static_cast<std::size_t>(e)].piece_at(p) : cut.side;
}

}  // namespace

Eigen::MatrixXd element_stiffness(const Discretization& disc, int e, int degree)
{
    const auto& basis = disc.bases[static_cast<std::size_t>(e)];
    const int n = basis.n_dofs;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (const auto& pr : element_rules(disc, e, degree, 0)) {
        const double beta = disc.beta(pr.side);
        for (std::size_t q = 0; q < pr.rule.size(); ++q) {
            const Point& p = pr.rule.points[q];
            std::array<Vec2, 4> g;
            for (int j = 0; j < n; ++j) {
                g[static_cast<std::size_t>(j)] = basis.gradient(j, p, pr.side);
            }
            const double w = pr.rule.weights[q] * beta;
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    K(i, j) += w * dot(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]);
                }
            }
        }
    }
    return K;
}

EdgeMatrix edge_matrix(const Discretization& disc, const MethodParams& params, int edge, int degree,
                       EdgeTerms terms)
{
    const auto& mesh = disc.mesh;
    const auto& E = mesh.edges[static_cast<std::size_t>(edge)];
    if (E.is_boundary()) {
        throw Error("edge_matrix: edge " + std::to_string(edge) + " is on the boundary");
    }
    const std::array<int, 2> elems{E.left, E.right};

    EdgeMatrix out;
    std::array<std::array<int, 4>, 2> local_to_union{};
    for (std::size_t t = 0; t < 2; ++t) {
        const auto ids = mesh.element_nodes(elems[t]);
        for (std::size_t j = 0; j < ids.size(); ++j) {
            auto it = std::find(out.dofs.begin(), out.dofs.end(), ids[j]);
            if (it == out.dofs.end()) {
                out.dofs.push_back(ids[j]);
                it = out.dofs.end() - 1;
            }
            local_to_union[t][j] = static_cast<int>(it - out.dofs.begin());
        }
    }
    const int n = static_cast<int>(out.dofs.size());
    out.M = Eigen::MatrixXd::Zero(n, n);

    const Point a = mesh.nodes[static_cast<std::size_t>(E.node_a)];
    const Point b = mesh.nodes[static_cast<std::size_t>(E.node_b)];
    const Vec2 normal = disc.edges.normals[static_cast<std::size_t>(edge)];
    const double length = distance(a, b);
    const double pen = params.sigma0_at(edge) / std::pow(length, params.alpha);
    const double delta = terms.consistency ? params.delta : 0.0;
    const double eps = terms.symmetrization ? params.epsilon : 0.0;
    const double sig = terms.penalty ? pen : 0.0;

    const QuadratureRule rule = split_edge_rule(a, b, disc.edges.crossing[static_cast<std::size_t>(edge)], degree);
    Eigen::VectorXd jump(n), flux(n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Point& p = rule.points[q];
        jump.setZero();
        flux.setZero();
        for (std::size_t t = 0; t < 2; ++t) {
            const int e = elems[t];
            const auto& basis = disc.bases[static_cast<std::size_t>(e)];
            const Side piece = basis.piece_at(p);
            const double beta = disc.beta(material_side(disc, e, p));
            const double sign = t == 0 ? 1.0 : -1.0;
            for (int j = 0; j < basis.n_dofs; ++j) {
                const int u = local_to_union[t][static_cast<std::size_t>(j)];
                jump(u) += sign * basis.value(j, p, piece);
                flux(u) += 0.5 * beta * dot(basis.gradient(j, p, piece), normal);
            }
        }
        const double w = rule.weights[q];
        // Row i: test function, column j: trial function.
        out.M += w * (delta * jump * flux.transpose() + eps * flux * jump.transpose() +
                      sig * jump * jump.transpose());
    }
    return out;
}

std::vector<Triplet> assemble_volume(const Discretization& disc, int degree)
{
    std::vector<Triplet> t;
    const auto& mesh = disc.mesh;
    const int nv = mesh.vertices_per_element();
    t.reserve(static_cast<std::size_t>(mesh.num_elements() * nv * nv));
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const Eigen::MatrixXd K = element_stiffness(disc, e, degree);
        const auto ids = mesh.element_nodes(e);
        for (int i = 0; i < nv; ++i) {
            for (int j = 0; j < nv; ++j) {
                t.push_back({ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)], K(i, j)});
            }
        }
    }
    return t;
}

std::vector<Triplet> assemble_edges(const Discretization& disc, const MethodParams& params, int degree,
                                    EdgeTerms terms)
{
    std::vector<Triplet> t;
    if (params.delta == 0.0 && params.epsilon == 0.0 && params.sigma0 == 0.0 && !params.sigma0_rule) {
        return t;
    }
    for (int edge : disc.edges.interface_edges()) {
        const EdgeMatrix em = edge_matrix(disc, params, edge, degree, terms);
        const int n = static_cast<int>(em.dofs.size());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                t.push_back({em.dofs[static_cast<std::size_t>(i)], em.dofs[static_cast<std::size_t>(j)], em.M(i, j)});
            }
        }
    }
    return t;
}

std::vector<double> assemble_load(const Discretization& disc, const std::function<double(const Point&, Side)>& f)
{
    const auto& mesh = disc.mesh;
    std::vector<double> b(static_cast<std::size_t>(mesh.num_nodes()), 0.0);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& basis = disc.bases[static_cast<std::size_t>(e)];
        const auto ids = mesh.element_nodes(e);
        const bool cut = disc.cuts[static_cast<std::size_t>(e)].interface;
        for (const auto& pr : element_rules(disc, e, 6, cut ? 1 : 0)) {
            for (std::size_t q = 0; q < pr.rule.size(); ++q) {
                const Point& p = pr.rule.points[q];
                const double fw = pr.rule.weights[q] * f(p, disc.iface.side_of(p));
                for (int j = 0; j < basis.n_dofs; ++j) {
                    b[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])] += fw * basis.value(j, p, pr.side);
                }
            }
        }
    }
    return b;
}

CsrMatrix assemble_matrix(const Discretization& disc, const MethodParams& params)
{
    auto t = assemble_volume(disc);
    auto te = assemble_edges(disc, params);
    t.insert(t.end(), te.begin(), te.end());
    const int n = disc.mesh.num_nodes();
    return CsrMatrix::from_triplets(n, n, std::move(t));
}

void set_dirichlet(SparseSystem& system, const Discretization& disc, const ManufacturedSolution& problem)
{
    system.dirichlet_nodes.clear();
    system.dirichlet_values.clear();
    system.free_dofs.clear();
    for (int i = 0; i < disc.mesh.num_nodes(); ++i) {
        const Point& p = disc.mesh.nodes[static_cast<std::size_t>(i)];
        if (disc.mesh.boundary_node[static_cast<std::size_t>(i)]) {
            system.dirichlet_nodes.push_back(i);
            system.dirichlet_values.push_back(problem.value(p, disc.iface.side_of(p)));
        } else {
            system.free_dofs.push_back(i);
        }
    }
}

SparseSystem assemble_system(const Discretization& disc, const MethodParams& params,
                             const ManufacturedSolution& problem)
{
    SparseSystem s;
    s.A = assemble_matrix(disc, params);
    s.b = assemble_load(disc, [&](const Point& p, Side side) { return problem.source(p, side); });
    set_dirichlet(s, disc, problem);
    return s;
}

std::vector<double> ReducedSystem::expand(std::span<const double> x_free) const
{
    std::vector<double> full = full_template;
    for (std::size_t k = 0; k < free_dofs.size(); ++k) {
        full[static_cast<std::size_t>(free_dofs[k])] = x_free[k];
    }
    return full;
}

ReducedSystem apply_dirichlet(const SparseSystem& system)
{
    const int n = system.A.n_rows;
    ReducedSystem r;
    r.free_dofs = system.free_dofs;
    r.full_template.assign(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = 0; k < system.dirichlet_nodes.size(); ++k) {
        r.full_template[static_cast<std::size_t>(system.dirichlet_nodes[k])] = system.dirichlet_values[k];
    }
    std::vector<int> reduced_index(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < r.free_dofs.size(); ++k) {
        reduced_index[static_cast<std::size_t>(r.free_dofs[k])] = static_cast<int>(k);
    }

    const auto& A = system.A;
    std::vector<Triplet> t;
    t.reserve(A.nnz());
    r.rhs.assign(r.free_dofs.size(), 0.0);
    for (std::size_t k = 0; k < r.free_dofs.size(); ++k) {
        const int i = r.free_dofs[k];
        double rhs = system.b[static_cast<std::size_t>(i)];
        for (int m = A.row_ptr[static_cast<std::size_t>(i)]; m < A.row_ptr[static_cast<std::size_t>(i) + 1]; ++m) {
            const int j = A.col_idx[static_cast<std::size_t>(m)];
            const double v = A.values[static_cast<std::size_t>(m)];
            const int rj = reduced_index[static_cast<std::size_t>(j)];
            if (rj >= 0) {
                t.push_back({static_cast<int>(k), rj, v});
            } else {
                rhs -= v * r.full_template[static_cast<std::size_t>(j)];
            }
        }
        r.rhs[k] = rhs;
    }
    const int nf = static_cast<int>(r.free_dofs.size());
    r.A = CsrMatrix::from_triplets(nf, nf, std::move(t));
    return r;
}

Solution solve_problem(const Discretization& disc, const MethodParams& params, const ManufacturedSolution& problem,
                       const SolverOptions& options)
{
    const SparseSystem system = assemble_system(disc, params, problem);
    const ReducedSystem reduced = apply_dirichlet(system);
    SolveResult res;
    Solution sol;
    if (params.symmetric()) {
        res = cg(reduced.A, reduced.rhs, options);
        sol.stats.solver = "cg";
    } else {
        res = bicgstab(reduced.A, reduced.rhs, options);
        sol.stats.solver = "bicgstab";
    }
    if (!res.converged) {
        const int iterations = res.iterations;
        res = sparse_lu_solve(reduced.A, reduced.rhs);
        res.iterations = iterations;
        sol.stats.solver += "+sparselu";
    }
    sol.coeffs = reduced.expand(res.x);
    sol.stats.iterations = res.iterations;
    sol.stats.residual = res.residual;
    sol.stats.converged = res.converged;
    return sol;
}

double energy_norm_matrix(const Discretization& disc, const MethodParams& params, std::span<const double> v)
{
    auto t = assemble_volume(disc);
    auto te = assemble_edges(disc, params, 4, EdgeTerms{false, false, true});
    t.insert(t.end(), te.begin(), te.end());
    const int n = disc.mesh.num_nodes();
    const CsrMatrix A = CsrMatrix::from_triplets(n, n, std::move(t));
    const auto Av = A.multiply(v);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += v[i] * Av[i];
    }
    return std::sqrt(std::max(s, 0.0));
}

}  // namespace ppife
