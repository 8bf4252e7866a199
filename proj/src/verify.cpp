#include "ppife/verify.hpp"

#include "ppife/discretization.hpp"
#include "ppife/postprocess.hpp"
#include "ppife/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace ppife {

namespace {

std::vector<Point> reference_vertices(CellKind kind, double h)
{
    if (kind == CellKind::Triangular) {
        return {{0.0, 0.0}, {h, 0.0}, {0.0, h}};
    }
    return {{0.0, 0.0}, {h, 0.0}, {h, h}, {0.0, h}};
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string beta_label(double bm, double bp)
{
    return fmt("%g", bm) + "/" + fmt("%g", bp);
}

double rel_change(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(a), std::numeric_limits<double>::min());
}

// Convex polygon clipped to one side of the chord line.
std::vector<Point> clip(const std::vector<Point>& poly, const Chord& chord, Side side)
{
    const double sgn = side == Side::Minus ? -1.0 : 1.0;
    auto dist = [&](const Point& p) { return sgn * dot(chord.normal, p - chord.D); };
    std::vector<Point> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        const double da = dist(a);
        const double db = dist(b);
        if (da <= 0.0) {
            out.push_back(a);
        }
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            out.push_back(lerp(a, b, da / (da - db)));
        }
    }
    return out;
}

// Enumerates the deterministic (d, e) grid over every isolated vertex, both
// orientations and both cut types, followed by `n_random` random cuts.
template <typename Fn>
void for_each_cut(CellKind kind, int grid, int n_random, std::uint64_t seed, double h, Fn&& fn)
{
    std::vector<CutType> types{CutType::TypeI};
    if (kind == CellKind::Rectangular) {
        types.push_back(CutType::TypeII);
    }
    const int nv = kind == CellKind::Triangular ? 3 : 4;
    for (CutType t : types) {
        for (int k = 0; k < nv; ++k) {
            for (bool flip : {false, true}) {
                for (int i = 0; i < grid; ++i) {
                    for (int j = 0; j < grid; ++j) {
                        const double d = 0.01 + 0.98 * i / (grid - 1);
                        const double e = 0.01 + 0.98 * j / (grid - 1);
                        fn(reference_cut(kind, t, d, e, h, k, flip));
                    }
                }
            }
        }
    }
    std::mt19937_64 rng(seed);
    for (int s = 0; s < n_random; ++s) {
        fn(random_cut(kind, rng, h));
    }
}

std::string cut_label(const ReferenceCut& c)
{
    std::ostringstream os;
    os << (c.type == CutType::TypeII ? "II" : "I") << " d=" << fmt("%.4f", c.d) << " e=" << fmt("%.4f", c.e)
       << " k=" << c.vertex << (c.flip ? " flip" : "");
    return os.str();
}

double coefficient_ratio(const LocalIFEBasis& basis)
{
    const double h = basis.h;
    const std::array<double, 4> scale{1.0, h, h, h * h};
    double r = 0.0;
    for (int j = 0; j < basis.n_dofs; ++j) {
        double a = 0.0;
        double b = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            a += std::pow(basis.coeffs(j, Side::Minus)[k] * scale[k], 2);
            b += std::pow(basis.coeffs(j, Side::Plus)[k] * scale[k], 2);
        }
        if (a == 0.0 || b == 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        r = std::max(r, std::sqrt(std::max(a / b, b / a)));
    }
    return r;
}

double trace_ratio(const ReferenceCut& cut, double bm, double bp)
{
    const LocalIFEBasis basis = build_reference_basis(cut, bm, bp);
    const int n = basis.n_dofs;
    const double h = basis.h;
    const auto beta = [&](Side s) { return s == Side::Minus ? bm : bp; };

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (Side s : {Side::Minus, Side::Plus}) {
        const auto poly = clip(cut.vertices, cut.chord, s);
        QuadratureRule rule;
        try {
            rule = split_polygon_rule(poly, 2, h);
        } catch (const DegeneratePolygon&) {
            continue;
        }
        for (std::size_t q = 0; q < rule.size(); ++q) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    M(i, j) += rule.weights[q] * beta(s) *
                               dot(basis.gradient(i, rule.points[q], s), basis.gradient(j, rule.points[q], s));
                }
            }
        }
    }

    // Orthonormal complement of the constants.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(n, 1));
    const Eigen::MatrixXd Q = Eigen::MatrixXd(qr.householderQ()).rightCols(n - 1);
    const Eigen::MatrixXd Mq = Q.transpose() * M * Q;

    const double area = polygon_area(cut.vertices);
    double best = 0.0;
    const std::size_t nv = cut.vertices.size();
    for (std::size_t m = 0; m < nv; ++m) {
        const Point a = cut.vertices[m];
        const Point b = cut.vertices[(m + 1) % nv];
        const Vec2 t = (1.0 / distance(a, b)) * (b - a);
        const Vec2 nrm{t.y, -t.x};  // outward for counterclockwise vertices
        std::optional<Point> x;
        const double da = dot(cut.chord.normal, a - cut.chord.D);
        const double db = dot(cut.chord.normal, b - cut.chord.D);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            x = lerp(a, b, da / (da - db));
        }
        const QuadratureRule rule = split_edge_rule(a, b, x, 4);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd g(n);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Point& p = rule.points[q];
            const Side s = basis.piece_at(p);
            for (int i = 0; i < n; ++i) {
                g(i) = beta(s) * dot(basis.gradient(i, p, s), nrm);
            }
            A += rule.weights[q] * g * g.transpose();
        }
        const Eigen::MatrixXd Aq = Q.transpose() * A * Q;
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Aq, Mq);
        if (es.info() != Eigen::Success) {
            throw NumericalFailure("trace scan: generalized eigenproblem failed for " + cut_label(cut));
        }
        best = std::max(best, es.eigenvalues().maxCoeff());
    }
    return std::sqrt(best * area / h);
}

struct FreeBlocks {
    Eigen::SparseMatrix<double> volume;
    Eigen::SparseMatrix<double> consistency;  // delta = -1 flux term only
    Eigen::SparseMatrix<double> symmetrization;  // epsilon = 1 flux term only
    Eigen::SparseMatrix<double> penalty;      // sigma0 = 1
};

Eigen::SparseMatrix<double> free_block(const Discretization& disc, std::vector<Triplet> t)
{
    const auto& mesh = disc.mesh;
    std::vector<int> index(static_cast<std::size_t>(mesh.num_nodes()), -1);
    int nf = 0;
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (!mesh.boundary_node[static_cast<std::size_t>(i)]) {
            index[static_cast<std::size_t>(i)] = nf++;
        }
    }
    std::vector<Eigen::Triplet<double>> et;
    et.reserve(t.size());
    for (const auto& x : t) {
        const int i = index[static_cast<std::size_t>(x.row)];
        const int j = index[static_cast<std::size_t>(x.col)];
        if (i >= 0 && j >= 0) {
            et.emplace_back(i, j, x.value);
        }
    }
    Eigen::SparseMatrix<double> A(nf, nf);
    A.setFromTriplets(et.begin(), et.end());
    return A;
}

FreeBlocks free_blocks(const Discretization& disc)
{
    FreeBlocks b;
    b.volume = free_block(disc, assemble_volume(disc));
    MethodParams unit;
    unit.delta = -1.0;
    unit.epsilon = 1.0;
    unit.sigma0 = 1.0;
    b.consistency = free_block(disc, assemble_edges(disc, unit, 4, EdgeTerms{true, false, false}));
    b.symmetrization = free_block(disc, assemble_edges(disc, unit, 4, EdgeTerms{false, true, false}));
    b.penalty = free_block(disc, assemble_edges(disc, unit, 4, EdgeTerms{false, false, true}));
    return b;
}

bool symmetric_part_pd(const FreeBlocks& b, double delta, double epsilon, double sigma0)
{
    // delta scales the (-1)-weighted consistency block, epsilon the (+1)-weighted one.
    const Eigen::SparseMatrix<double> A =
        b.volume + (-delta) * b.consistency + epsilon * b.symmetrization + sigma0 * b.penalty;
    const Eigen::SparseMatrix<double> At = A.transpose();
    const Eigen::SparseMatrix<double> S = 0.5 * (A + At);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(S);
    return llt.info() == Eigen::Success;
}

}  // namespace

ReferenceCut reference_cut(CellKind kind, CutType type, double d, double e, double h, int vertex, bool flip)
{
    ReferenceCut c;
    c.kind = kind;
    c.type = kind == CellKind::Triangular ? CutType::TypeI : type;
    c.vertices = reference_vertices(kind, h);
    c.d = d;
    c.e = e;
    c.vertex = vertex;
    c.flip = flip;
    const auto& v = c.vertices;
    const std::size_t n = v.size();
    const auto at = [&](int k) { return v[static_cast<std::size_t>(((k % static_cast<int>(n)) + static_cast<int>(n)) %
                                                                   static_cast<int>(n))]; };
    const Point Ak = at(vertex);
    Point D;
    Point E;
    if (c.type == CutType::TypeII) {
        D = lerp(Ak, at(vertex + 1), d);
        E = lerp(at(vertex + 3), at(vertex + 2), e);
    } else {
        D = lerp(Ak, at(vertex - 1), d);
        E = lerp(Ak, at(vertex + 1), e);
    }
    const Vec2 t = E - D;
    Vec2 nrm = (1.0 / norm(t)) * Vec2{-t.y, t.x};
    if (dot(nrm, Ak - D) > 0.0) {
        nrm = -1.0 * nrm;
    }
    if (flip) {
        nrm = -1.0 * nrm;
    }
    c.chord = Chord{D, E, nrm};
    return c;
}

ReferenceCut random_cut(CellKind kind, std::mt19937_64& rng, double h)
{
    std::uniform_real_distribution<double> u(0.01, 0.99);
    const double d = u(rng);
    const double e = u(rng);
    const int nv = kind == CellKind::Triangular ? 3 : 4;
    const int vertex = std::uniform_int_distribution<int>(0, nv - 1)(rng);
    const bool flip = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    CutType type = CutType::TypeI;
    if (kind == CellKind::Rectangular && std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
        type = CutType::TypeII;
    }
    return reference_cut(kind, type, d, e, h, vertex, flip);
}

LocalIFEBasis build_reference_basis(const ReferenceCut& cut, double beta_minus, double beta_plus)
{
    if (cut.kind == CellKind::Triangular) {
        return build_linear_ife_basis(cut.vertices, cut.chord, beta_minus, beta_plus);
    }
    return build_bilinear_ife_basis(cut.vertices, cut.chord, beta_minus, beta_plus);
}

void ScanReport::finalize_extrema()
{
    if (samples.empty()) {
        max = min = 0.0;
        argmax = 0;
        return;
    }
    max = -std::numeric_limits<double>::infinity();
    min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = samples[i].value;
        if (v > max || std::isnan(v)) {
            max = v;
            argmax = i;
        }
        min = std::min(min, v);
    }
}

std::string ScanReport::summary_line() const
{
    std::ostringstream os;
    os << (pass ? "PASS " : "FAIL ") << scan_id << ": " << criterion;
    for (const auto& [name, value] : metrics) {
        os << ' ' << name << '=' << fmt("%.6g", value);
    }
    if (!samples.empty()) {
        os << " (max " << fmt("%.6g", max) << " at " << samples[argmax].label << ", seed " << seed << ')';
    }
    return os.str();
}

void write_scan_csv(std::ostream& out, const ScanReport& report)
{
    out << "scan_id,seed,kind,index,label,value\n";
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        out << report.scan_id << ',' << report.seed << ",sample," << i << ",\"" << report.samples[i].label << "\","
            << fmt("%.12e", report.samples[i].value) << '\n';
    }
    for (std::size_t i = 0; i < report.metrics.size(); ++i) {
        out << report.scan_id << ',' << report.seed << ",metric," << i << ",\"" << report.metrics[i].first << "\","
            << fmt("%.12e", report.metrics[i].second) << '\n';
    }
    out << report.scan_id << ',' << report.seed << ",pass,0,\"" << report.criterion << "\"," << (report.pass ? 1 : 0)
        << '\n';
}

ScanReport scan_coefficient_bounds(const VerifyConfig& config)
{
    ScanReport rep;
    rep.scan_id = "coefficient_bounds";
    rep.seed = config.seed;
    const int grid = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(config.samples)))));
    rep.grid = "d,e in [0.01,0.99]: " + std::to_string(grid) + "^2 grid + " + std::to_string(config.samples) +
               " random cuts, refined to " + std::to_string(2 * grid) + "^2 + " + std::to_string(4 * config.samples);
    rep.criterion = "max finite and <10% change under 4x refinement";
    rep.pass = true;
    double worst_change = 0.0;
    for (CellKind kind : config.kinds) {
        for (const auto& [bm, bp] : config.beta_pairs) {
            double base = 0.0;
            std::string base_label;
            for_each_cut(kind, grid, config.samples, config.seed, 1.0, [&](const ReferenceCut& c) {
                const double r = coefficient_ratio(build_reference_basis(c, bm, bp));
                if (!(r <= base)) {
                    base = r;
                    base_label = cut_label(c);
                }
            });
            double refined = 0.0;
            for_each_cut(kind, 2 * grid, 4 * config.samples, config.seed + 1, 1.0, [&](const ReferenceCut& c) {
                refined = std::max(refined, coefficient_ratio(build_reference_basis(c, bm, bp)));
            });
            const std::string tag = to_string(kind) + " beta=" + beta_label(bm, bp);
            rep.add(tag + " " + base_label, base);
            const double change = rel_change(base, refined);
            worst_change = std::max(worst_change, change);
            if (!std::isfinite(base) || !std::isfinite(refined) || !(change < 0.1)) {
                rep.pass = false;
            }
        }
    }
    rep.metric("worst_change", worst_change);
    rep.finalize_extrema();
    return rep;
}

double quadrant_bound_constant()
{
    // 12 - 9/s is increasing and 2(7 - 9s) decreasing in s; they meet at the
    // positive root of 18 s^2 - 2 s - 9 = 0.
    const double s = (2.0 + std::sqrt(4.0 + 4.0 * 18.0 * 9.0)) / 36.0;
    return std::min(12.0 - 9.0 / s, 2.0 * (7.0 - 9.0 * s));
}

double quadrant_gradient_norm2(double c2, double c3, double c4, double h)
{
    const QuadratureRule rule = map_rect(rect_rule(4), {0.5 * h, 0.5 * h}, 0.5 * h, 0.5 * h);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Point& p = rule.points[q];
        const double vx = c2 + c4 * p.y;
        const double vy = c3 + c4 * p.x;
        s += rule.weights[q] * (vx * vx + vy * vy);
    }
    return s;
}

ScanReport scan_trace_ratio(const VerifyConfig& config)
{
    ScanReport rep;
    rep.scan_id = "trace_ratio";
    rep.seed = config.seed;
    const int grid = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(config.samples)))));
    rep.grid = std::to_string(grid) + "^2 grid + " + std::to_string(config.samples) +
               " random cuts per kind and beta pair, refined 4x; h in {1, 1/2, 1/4}";
    rep.criterion = "max R stable (<10%) under 4x refinement and over h";
    rep.pass = true;
    double worst_refine = 0.0;
    double worst_h = 0.0;
    for (CellKind kind : config.kinds) {
        for (const auto& [bm, bp] : config.beta_pairs) {
            double base = 0.0;
            std::string base_label;
            for_each_cut(kind, grid, config.samples, config.seed, 1.0, [&](const ReferenceCut& c) {
                const double r = trace_ratio(c, bm, bp);
                if (!(r <= base)) {
                    base = r;
                    base_label = cut_label(c);
                }
            });
            double refined = 0.0;
            for_each_cut(kind, 2 * grid, 4 * config.samples, config.seed + 1, 1.0, [&](const ReferenceCut& c) {
                refined = std::max(refined, trace_ratio(c, bm, bp));
            });
            double h_dev = 0.0;
            for (double h : {0.5, 0.25}) {
                double m = 0.0;
                for_each_cut(kind, grid, config.samples, config.seed, h, [&](const ReferenceCut& c) {
                    m = std::max(m, trace_ratio(c, bm, bp));
                });
                h_dev = std::max(h_dev, rel_change(base, m));
            }
            const std::string tag = to_string(kind) + " beta=" + beta_label(bm, bp);
            rep.add(tag + " " + base_label, base);
            const double change = rel_change(base, refined);
            worst_refine = std::max(worst_refine, change);
            worst_h = std::max(worst_h, h_dev);
            if (!std::isfinite(base) || !(change < 0.1) || !(h_dev < 0.1)) {
                rep.pass = false;
            }
        }
    }
    rep.metric("worst_refine_change", worst_refine);
    rep.metric("worst_h_change", worst_h);

    if (std::find(config.kinds.begin(), config.kinds.end(), CellKind::Rectangular) != config.kinds.end()) {
        const double bound = quadrant_bound_constant() / 48.0;
        std::mt19937_64 rng(config.seed);
        std::normal_distribution<double> g;
        double worst = std::numeric_limits<double>::infinity();
        for (int s = 0; s < config.samples; ++s) {
            const double h = std::ldexp(1.0, -(s % 3));
            double c2 = g(rng);
            double c3 = g(rng);
            double c4h = g(rng);
            const double len = std::sqrt(c2 * c2 + c3 * c3 + c4h * c4h);
            c2 /= len;
            c3 /= len;
            c4h /= len;
            const double lhs = quadrant_gradient_norm2(c2, c3, c4h / h, h);
            worst = std::min(worst, lhs / (h * h));
        }
        rep.metric("quadrant_min_ratio", worst);
        rep.metric("quadrant_bound", bound);
        if (!(worst >= bound * (1.0 - 1e-12))) {
            rep.pass = false;
        }
    }
    rep.finalize_extrema();
    return rep;
}

ScanReport scan_coercivity(const VerifyConfig& config)
{
    ScanReport rep;
    rep.scan_id = "coercivity";
    rep.seed = config.seed;
    rep.grid = "N in {";
    for (std::size_t i = 0; i < config.coercivity_N.size(); ++i) {
        rep.grid += (i ? "," : "") + std::to_string(config.coercivity_N[i]);
    }
    rep.grid += "}";
    rep.criterion = "Cholesky of symmetric part succeeds for spp, ipp, npp";
    rep.pass = true;
    const auto iface = InterfaceGeometry::circle(0.0, 0.0, benchmark_radius());
    double max_threshold = 0.0;
    for (CellKind kind : config.kinds) {
        for (int N : config.coercivity_N) {
            for (const auto& [bm, bp] : config.coercivity_betas) {
                DomainSpec dom;
                dom.N = N;
                dom.cell_kind = kind;
                const Discretization disc = discretize(dom, iface, bm, bp);
                const FreeBlocks blocks = free_blocks(disc);
                const std::string tag =
                    to_string(kind) + " N=" + std::to_string(N) + " beta=" + beta_label(bm, bp);
                for (Scheme s : {Scheme::SPP, Scheme::IPP, Scheme::NPP}) {
                    MethodParams p = MethodParams::preset(s, bm, bp);
                    if (config.sigma0 && s != Scheme::NPP) {
                        p.sigma0 = *config.sigma0;
                    }
                    const bool pd = symmetric_part_pd(blocks, p.delta, p.epsilon, p.sigma0);
                    rep.add(tag + " " + to_string(s) + " sigma0=" + fmt("%g", p.sigma0), pd ? 1.0 : 0.0);
                    rep.pass = rep.pass && pd;
                }
                // Halve the SPP penalty until the symmetric part stops being positive definite.
                double sigma = MethodParams::preset(Scheme::SPP, bm, bp).sigma0;
                double last_pd = std::numeric_limits<double>::quiet_NaN();
                if (symmetric_part_pd(blocks, -1.0, -1.0, sigma)) {
                    for (int k = 0; k < 60; ++k) {
                        last_pd = sigma;
                        sigma *= 0.5;
                        if (!symmetric_part_pd(blocks, -1.0, -1.0, sigma)) {
                            break;
                        }
                    }
                    if (symmetric_part_pd(blocks, -1.0, -1.0, sigma)) {
                        last_pd = 0.0;
                    }
                }
                std::string range;
                if (std::isnan(last_pd)) {
                    range = "not positive definite at the preset";
                } else if (last_pd == 0.0) {
                    range = "positive definite down to sigma0=0";
                } else {
                    range = "in [" + fmt("%g", sigma) + ", " + fmt("%g", last_pd) + "]";
                }
                rep.add(tag + " spp threshold " + range, std::isnan(last_pd) ? 0.0 : last_pd);
                if (std::isfinite(last_pd)) {
                    max_threshold = std::max(max_threshold, last_pd / std::max(bm, bp));
                }
            }
        }
    }
    rep.metric("max_spp_threshold_over_beta_max", max_threshold);
    rep.finalize_extrema();
    return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScanReport interp_edge_error_study(const VerifyConfig& config)
{
    ScanReport rep;
    rep.scan_id = "interp_edge_error";
    rep.seed = config.seed;
    rep.grid = "N in {";
    for (std::size_t i = 0; i < config.interp_N.size(); ++i) {
        rep.grid += (i ? "," : "") + std::to_string(config.interp_N[i]);
    }
    rep.grid += "}, beta=" + beta_label(config.interp_beta_minus, config.interp_beta_plus);
    rep.criterion = "log-log slope of edge sum vs h >= 1.8";
    rep.pass = true;
    const double bm = config.interp_beta_minus;
    const double bp = config.interp_beta_plus;
    const auto iface = InterfaceGeometry::circle(0.0, 0.0, benchmark_radius());
    const auto exact = ManufacturedSolution::circle_power(5.0, benchmark_radius(), bm, bp);
    for (CellKind kind : config.kinds) {
        std::vector<double> hs, sums, maxes;
        for (int N : config.interp_N) {
            DomainSpec dom;
            dom.N = N;
            dom.cell_kind = kind;
            const Discretization disc = discretize(dom, iface, bm, bp);
            const auto I = nodal_interpolant(disc, exact);
            const auto& mesh = disc.mesh;
            double total = 0.0;
            double worst = 0.0;
            for (int edge : disc.edges.interface_edges()) {
                const auto& E = mesh.edges[static_cast<std::size_t>(edge)];
                const Point a = mesh.nodes[static_cast<std::size_t>(E.node_a)];
                const Point b = mesh.nodes[static_cast<std::size_t>(E.node_b)];
                const Vec2 n = disc.edges.normals[static_cast<std::size_t>(edge)];
                const QuadratureRule rule =
                    split_edge_rule(a, b, disc.edges.crossing[static_cast<std::size_t>(edge)], 8);
                double s = 0.0;
                for (int e : {E.left, E.right}) {
                    const auto& basis = disc.bases[static_cast<std::size_t>(e)];
                    for (std::size_t q = 0; q < rule.size(); ++q) {
                        const Point& p = rule.points[q];
                        const Side side = disc.iface.side_of(p);
                        const Vec2 d = exact.gradient(p, side) - disc.eval_gradient(I, e, p, basis.piece_at(p));
                        const double f = exact.beta(side) * dot(d, n);
                        s += rule.weights[q] * f * f;
                    }
                }
                total += s;
                worst = std::max(worst, s);
            }
            hs.push_back(mesh.h);
            sums.push_back(total);
            maxes.push_back(worst);
            rep.add(to_string(kind) + " N=" + std::to_string(N) + " edge sum", total);
        }
        const double slope = loglog_slope(hs, sums);
        rep.metric(to_string(kind) + "_slope", slope);
        rep.metric(to_string(kind) + "_per_edge_max_slope", loglog_slope(hs, maxes));
        if (!(slope >= 1.8)) {
            rep.pass = false;
        }
    }
    rep.finalize_extrema();
    return rep;
}

}  // namespace ppife
