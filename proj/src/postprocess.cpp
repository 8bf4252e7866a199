#include "ppife/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <tuple>

namespace ppife {

namespace {

Side exact_side(const Discretization& disc, const Point& p, Side chord_side, ExactPiece piece)
{
    return piece == ExactPiece::Chord ? chord_side : disc.iface.side_of(p);
}

int rule_refine(const Discretization& disc, int e, int refine)
{
    return disc.cuts[static_cast<std::size_t>(e)].interface ? refine : 0;
}

std::vector<Point> element_samples(const CartesianMesh& mesh, int e)
{
    std::vector<Point> pts;
    if (mesh.kind == CellKind::Rectangular) {
        const Point o = mesh.vertex(e, 0);
        for (int j = 0; j <= 4; ++j) {
            for (int i = 0; i <= 4; ++i) {
                pts.push_back({o.x + 0.25 * i * mesh.h, o.y + 0.25 * j * mesh.hy});
            }
        }
    } else {
        const Point a = mesh.vertex(e, 0);
        const Point b = mesh.vertex(e, 1);
        const Point c = mesh.vertex(e, 2);
        for (int j = 0; j <= 4; ++j) {
            for (int i = 0; i + j <= 4; ++i) {
                pts.push_back(a + (0.25 * i) * (b - a) + (0.25 * j) * (c - a));
            }
        }
    }
    return pts;
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

double l2_error(const Discretization& disc, std::span<const double> coeffs, const ManufacturedSolution& exact,
                int refine, ExactPiece piece)
{
    double s = 0.0;
    for (int e = 0; e < disc.mesh.num_elements(); ++e) {
        for (const auto& pr : element_rules(disc, e, 6, rule_refine(disc, e, refine))) {
            for (std::size_t q = 0; q < pr.rule.size(); ++q) {
                const Point& p = pr.rule.points[q];
                const double d = exact.value(p, exact_side(disc, p, pr.side, piece)) - disc.eval(coeffs, e, p, pr.side);
                s += pr.rule.weights[q] * d * d;
            }
        }
    }
    return std::sqrt(s);
}

double h1_semi_error(const Discretization& disc, std::span<const double> coeffs, const ManufacturedSolution& exact,
                     int refine, ExactPiece piece)
{
    double s = 0.0;
    for (int e = 0; e < disc.mesh.num_elements(); ++e) {
        for (const auto& pr : element_rules(disc, e, 6, rule_refine(disc, e, refine))) {
            for (std::size_t q = 0; q < pr.rule.size(); ++q) {
                const Point& p = pr.rule.points[q];
                const Vec2 d = exact.gradient(p, exact_side(disc, p, pr.side, piece)) -
                               disc.eval_gradient(coeffs, e, p, pr.side);
                s += pr.rule.weights[q] * dot(d, d);
            }
        }
    }
    return std::sqrt(s);
}

double linf_error(const Discretization& disc, std::span<const double> coeffs, const ManufacturedSolution& exact)
{
    double m = 0.0;
    for (int e = 0; e < disc.mesh.num_elements(); ++e) {
        const auto& basis = disc.bases[static_cast<std::size_t>(e)];
        for (const Point& p : element_samples(disc.mesh, e)) {
            const double d = exact.value(p, disc.iface.side_of(p)) - disc.eval(coeffs, e, p, basis.piece_at(p));
            m = std::max(m, std::abs(d));
        }
    }
    return m;
}

double energy_error(const Discretization& disc, const MethodParams& params, std::span<const double> coeffs,
                    const ManufacturedSolution& exact, int refine, ExactPiece piece)
{
    double s = 0.0;
    for (int e = 0; e < disc.mesh.num_elements(); ++e) {
        for (const auto& pr : element_rules(disc, e, 6, rule_refine(disc, e, refine))) {
            for (std::size_t q = 0; q < pr.rule.size(); ++q) {
                const Point& p = pr.rule.points[q];
                const Side side = exact_side(disc, p, pr.side, piece);
                const Vec2 d = exact.gradient(p, side) - disc.eval_gradient(coeffs, e, p, pr.side);
                s += pr.rule.weights[q] * exact.beta(side) * dot(d, d);
            }
        }
    }
    const auto& mesh = disc.mesh;
    for (int edge : disc.edges.interface_edges()) {
        const auto& E = mesh.edges[static_cast<std::size_t>(edge)];
        const Point a = mesh.nodes[static_cast<std::size_t>(E.node_a)];
        const Point b = mesh.nodes[static_cast<std::size_t>(E.node_b)];
        const double pen = params.sigma0_at(edge) / std::pow(distance(a, b), params.alpha);
        if (pen == 0.0) {
            continue;
        }
        const QuadratureRule rule = split_edge_rule(a, b, disc.edges.crossing[static_cast<std::size_t>(edge)], 6);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Point& p = rule.points[q];
            const auto& b1 = disc.bases[static_cast<std::size_t>(E.left)];
            const auto& b2 = disc.bases[static_cast<std::size_t>(E.right)];
            const double jump =
                disc.eval(coeffs, E.left, p, b1.piece_at(p)) - disc.eval(coeffs, E.right, p, b2.piece_at(p));
            s += rule.weights[q] * pen * jump * jump;
        }
    }
    return std::sqrt(s);
}

ErrorNorms compute_errors(const Discretization& disc, const MethodParams& params, std::span<const double> coeffs,
                          const ManufacturedSolution& exact, int refine, ExactPiece piece)
{
    ErrorNorms n;
    n.l2 = l2_error(disc, coeffs, exact, refine, piece);
    n.h1 = h1_semi_error(disc, coeffs, exact, refine, piece);
    n.linf = linf_error(disc, coeffs, exact);
    n.energy = energy_error(disc, params, coeffs, exact, refine, piece);
    return n;
}

std::vector<double> nodal_interpolant(const Discretization& disc, const ManufacturedSolution& exact)
{
    std::vector<double> v;
    v.reserve(disc.mesh.nodes.size());
    for (const Point& p : disc.mesh.nodes) {
        v.push_back(exact.value(p, disc.iface.side_of(p)));
    }
    return v;
}

std::vector<double> convergence_rates(std::span<const std::pair<int, double>> errors)
{
    std::vector<double> r;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        const double ratio = static_cast<double>(errors[k + 1].first) / errors[k].first;
        r.push_back(std::log(errors[k].second / errors[k + 1].second) / std::log(ratio));
    }
    return r;
}

int locate_element(const CartesianMesh& mesh, const Point& p)
{
    const Point o = mesh.nodes.front();
    const int n = mesh.cells_per_side;
    const int i = std::clamp(static_cast<int>(std::floor((p.x - o.x) / mesh.h)), 0, n - 1);
    const int j = std::clamp(static_cast<int>(std::floor((p.y - o.y) / mesh.hy)), 0, n - 1);
    const int cell = i + j * n;
    if (mesh.kind == CellKind::Rectangular) {
        return cell;
    }
    const double dx = (p.x - o.x) / mesh.h - i;
    const double dy = (p.y - o.y) / mesh.hy - j;
    return dx >= dy ? 2 * cell : 2 * cell + 1;
}

std::vector<FieldSample> pointwise_error_field(const Discretization& disc, std::span<const double> coeffs,
                                               const ManufacturedSolution& exact, int samples_per_side)
{
    const auto& d = disc.domain;
    std::vector<FieldSample> out;
    out.reserve(static_cast<std::size_t>((samples_per_side + 1) * (samples_per_side + 1)));
    for (int j = 0; j <= samples_per_side; ++j) {
        for (int i = 0; i <= samples_per_side; ++i) {
            const Point p{d.xmin + (d.xmax - d.xmin) * i / samples_per_side,
                          d.ymin + (d.ymax - d.ymin) * j / samples_per_side};
            const int e = locate_element(disc.mesh, p);
            const double uh = disc.eval(coeffs, e, p, disc.bases[static_cast<std::size_t>(e)].piece_at(p));
            out.push_back({p.x, p.y, std::abs(exact.value(p, disc.iface.side_of(p)) - uh)});
        }
    }
    return out;
}

void write_field_csv(std::ostream& out, std::span<const FieldSample> field)
{
    out << "x,y,abs_error\n";
    for (const auto& s : field) {
        out << fmt("%.10e", s.x) << ',' << fmt("%.10e", s.y) << ',' << fmt("%.10e", s.error) << '\n';
    }
}

void fill_rates(std::vector<RunRecord>& records)
{
    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& a = records[k - 1];
        auto& b = records[k];
        if (a.mesh != b.mesh || a.scheme != b.scheme || a.beta_minus != b.beta_minus || a.beta_plus != b.beta_plus ||
            b.N <= a.N) {
            continue;
        }
        const double lr = std::log(static_cast<double>(b.N) / a.N);
        b.rate_l2 = std::log(a.errors.l2 / b.errors.l2) / lr;
        b.rate_h1 = std::log(a.errors.h1 / b.errors.h1) / lr;
        b.rate_energy = std::log(a.errors.energy / b.errors.energy) / lr;
    }
}

void write_runs_csv(std::ostream& out, std::span<const RunRecord> records)
{
    out << "N,h,mesh,scheme,beta_minus,beta_plus,sigma0,alpha,e_l2,e_h1,e_linf,e_energy,rate_l2,rate_h1,"
           "rate_energy,iterations,residual,converged,solver\n";
    auto opt = [](const std::optional<double>& v) { return v ? fmt("%.6f", *v) : std::string(); };
    for (const auto& r : records) {
        out << r.N << ',' << fmt("%.10e", r.h) << ',' << r.mesh << ',' << r.scheme << ',' << fmt("%g", r.beta_minus)
            << ',' << fmt("%g", r.beta_plus) << ',' << fmt("%g", r.sigma0) << ',' << fmt("%g", r.alpha) << ','
            << fmt("%.10e", r.errors.l2) << ',' << fmt("%.10e", r.errors.h1) << ',' << fmt("%.10e", r.errors.linf)
            << ',' << fmt("%.10e", r.errors.energy) << ',' << opt(r.rate_l2) << ',' << opt(r.rate_h1) << ','
            << opt(r.rate_energy) << ',' << r.iterations << ',' << fmt("%.3e", r.residual) << ','
            << (r.converged ? 1 : 0) << ',' << r.solver << '\n';
    }
}

void write_timing_csv(std::ostream& out, std::span<const RunRecord> records)
{
    out << "N,mesh,scheme,beta_minus,beta_plus,wall_time_s\n";
    for (const auto& r : records) {
        out << r.N << ',' << r.mesh << ',' << r.scheme << ',' << fmt("%g", r.beta_minus) << ','
            << fmt("%g", r.beta_plus) << ',' << fmt("%.3f", r.wall_time) << '\n';
    }
}

std::string to_string(NormKind k)
{
    switch (k) {
    case NormKind::L2: return "L2";
    case NormKind::H1: return "H1";
    case NormKind::Linf: return "Linf";
    case NormKind::Energy: return "energy";
    }
    return "";
}

void write_markdown_table(std::ostream& out, std::span<const RunRecord> records, NormKind norm,
                          const std::string& title)
{
    std::vector<std::string> schemes;
    std::map<std::pair<int, std::string>, const RunRecord*> cell;
    std::vector<int> Ns;
    for (const auto& r : records) {
        if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end()) {
            schemes.push_back(r.scheme);
        }
        if (std::find(Ns.begin(), Ns.end(), r.N) == Ns.end()) {
            Ns.push_back(r.N);
        }
        cell[{r.N, r.scheme}] = &r;
    }
    std::sort(Ns.begin(), Ns.end());

    auto error_of = [norm](const RunRecord& r) {
        switch (norm) {
        case NormKind::L2: return r.errors.l2;
        case NormKind::H1: return r.errors.h1;
        case NormKind::Linf: return r.errors.linf;
        case NormKind::Energy: return r.errors.energy;
        }
        return 0.0;
    };

    out << "### " << title << "\n\n| N |";
    for (const auto& s : schemes) {
        out << ' ' << s << " | rate |";
    }
    out << "\n|---:|";
    for (std::size_t k = 0; k < schemes.size(); ++k) {
        out << "---:|---:|";
    }
    out << '\n';
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        out << "| " << Ns[i] << " |";
        for (const auto& s : schemes) {
            auto it = cell.find({Ns[i], s});
            if (it == cell.end()) {
                out << " | |";
                continue;
            }
            const double e = error_of(*it->second);
            out << ' ' << fmt("%.4E", e) << " |";
            auto prev = i > 0 ? cell.find({Ns[i - 1], s}) : cell.end();
            if (prev != cell.end()) {
                const double lr = std::log(static_cast<double>(Ns[i]) / Ns[i - 1]);
                out << ' ' << fmt("%.4f", std::log(error_of(*prev->second) / e) / lr) << " |";
            } else {
                out << " |";
            }
        }
        out << '\n';
    }
    out << '\n';
}

}  // namespace ppife
