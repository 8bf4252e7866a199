#include "ppife/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace ppife {

std::string to_string(CellKind kind)
{
    return kind == CellKind::Triangular ? "tri" : "rect";
}

CellKind parse_cell_kind(const std::string& name)
{
    if (name == "tri" || name == "triangular") {
        return CellKind::Triangular;
    }
    if (name == "rect" || name == "rectangular") {
        return CellKind::Rectangular;
    }
    throw ConfigError("unknown mesh kind '" + name + "' (expected tri or rect)");
}

void DomainSpec::validate() const
{
    if (!(xmax > xmin) || !(ymax > ymin)) {
        throw ConfigError("domain box must satisfy xmax > xmin and ymax > ymin");
    }
    if (N < 2) {
        throw ConfigError("N must be at least 2");
    }
}

std::vector<Point> CartesianMesh::element_polygon(int e) const
{
    std::vector<Point> poly;
    poly.reserve(4);
    for (int v : element_nodes(e)) {
        poly.push_back(nodes[static_cast<std::size_t>(v)]);
    }
    return poly;
}

Point CartesianMesh::centroid(int e) const
{
    Point c;
    const auto ids = element_nodes(e);
    for (int v : ids) {
        c += nodes[static_cast<std::size_t>(v)];
    }
    return c * (1.0 / static_cast<double>(ids.size()));
}

double CartesianMesh::element_area(int e) const
{
    const auto poly = element_polygon(e);
    return polygon_area(poly);
}

double CartesianMesh::edge_length(int edge) const
{
    const auto& E = edges[static_cast<std::size_t>(edge)];
    return distance(nodes[static_cast<std::size_t>(E.node_a)], nodes[static_cast<std::size_t>(E.node_b)]);
}

double polygon_area(std::span<const Point> poly)
{
    double twice = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross(poly[i], poly[(i + 1) % n]);
    }
    return 0.5 * twice;
}

CartesianMesh build_mesh(const DomainSpec& spec)
{
    spec.validate();
    CartesianMesh mesh;
    mesh.kind = spec.cell_kind;
    const int N = spec.N;
    mesh.cells_per_side = N;
    mesh.h = (spec.xmax - spec.xmin) / N;
    mesh.hy = (spec.ymax - spec.ymin) / N;

    const int nx = N + 1;
    mesh.nodes.resize(static_cast<std::size_t>(nx * nx));
    mesh.boundary_node.assign(mesh.nodes.size(), 0);
    for (int j = 0; j <= N; ++j) {
        for (int i = 0; i <= N; ++i) {
            const std::size_t id = static_cast<std::size_t>(i + nx * j);
            // Endpoints are set exactly so boundary nodes sit on the box.
            const double x = i == N ? spec.xmax : spec.xmin + i * mesh.h;
            const double y = j == N ? spec.ymax : spec.ymin + j * mesh.hy;
            mesh.nodes[id] = {x, y};
            mesh.boundary_node[id] = (i == 0 || j == 0 || i == N || j == N) ? 1 : 0;
        }
    }

    auto node = [nx](int i, int j) { return i + nx * j; };
    if (mesh.kind == CellKind::Rectangular) {
        mesh.elements.reserve(static_cast<std::size_t>(N * N));
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i < N; ++i) {
                mesh.elements.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
            }
        }
    } else {
        mesh.elements.reserve(static_cast<std::size_t>(2 * N * N));
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i < N; ++i) {
                mesh.elements.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1), -1});
                mesh.elements.push_back({node(i, j), node(i + 1, j + 1), node(i, j + 1), -1});
            }
        }
    }

    const int nv = mesh.vertices_per_element();
    const auto n_nodes = static_cast<std::int64_t>(mesh.nodes.size());
    std::unordered_map<std::int64_t, int> edge_index;
    edge_index.reserve(mesh.elements.size() * 2);
    mesh.element_edges.assign(mesh.elements.size(), {-1, -1, -1, -1});
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[static_cast<std::size_t>(e)];
        for (int k = 0; k < nv; ++k) {
            const int a = el[static_cast<std::size_t>(k)];
            const int b = el[static_cast<std::size_t>((k + 1) % nv)];
            const std::int64_t key = std::min(a, b) * n_nodes + std::max(a, b);
            auto [it, inserted] = edge_index.try_emplace(key, mesh.num_edges());
            if (inserted) {
                mesh.edges.push_back({std::min(a, b), std::max(a, b), e, -1});
            } else {
                mesh.edges[static_cast<std::size_t>(it->second)].right = e;
            }
            mesh.element_edges[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)] = it->second;
        }
    }
    return mesh;
}

void write_mesh(std::ostream& out, const CartesianMesh& mesh)
{
    out.precision(17);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        const auto& p = mesh.nodes[static_cast<std::size_t>(i)];
        out << "node " << i << ' ' << p.x << ' ' << p.y << '\n';
    }
    for (int e = 0; e < mesh.num_elements(); ++e) {
        out << "element " << e;
        for (int v : mesh.element_nodes(e)) {
            out << ' ' << v;
        }
        out << '\n';
    }
    for (int k = 0; k < mesh.num_edges(); ++k) {
        const auto& E = mesh.edges[static_cast<std::size_t>(k)];
        out << "edge " << k << ' ' << E.node_a << ' ' << E.node_b << ' ' << E.left << ' ' << E.right << '\n';
    }
}

InterfaceGeometry InterfaceGeometry::circle(double cx, double cy, double r)
{
    InterfaceGeometry g;
    g.levelset = [=](const Point& p) { return (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy) - r * r; };
    g.gradient = [=](const Point& p) { return Vec2{2.0 * (p.x - cx), 2.0 * (p.y - cy)}; };
    std::ostringstream os;
    os.precision(17);
    os << "circle(" << cx << ',' << cy << ',' << r << ')';
    g.description = os.str();
    return g;
}

InterfaceGeometry InterfaceGeometry::line(double a, double b, double c)
{
    if (a == 0.0 && b == 0.0) {
        throw ConfigError("line(a,b,c) needs (a,b) != (0,0)");
    }
    InterfaceGeometry g;
    g.levelset = [=](const Point& p) { return a * p.x + b * p.y + c; };
    g.gradient = [=](const Point&) { return Vec2{a, b}; };
    std::ostringstream os;
    os.precision(17);
    os << "line(" << a << ',' << b << ',' << c << ')';
    g.description = os.str();
    return g;
}

InterfaceGeometry InterfaceGeometry::parse(const std::string& text)
{
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            s.push_back(ch);
        }
    }
    const auto open = s.find('(');
    const auto close = s.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        throw ConfigError("malformed interface spec '" + text + "'");
    }
    const std::string name = s.substr(0, open);
    std::vector<double> args;
    std::stringstream ss(s.substr(open + 1, close - open - 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            args.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw ConfigError("bad number");
            }
        } catch (const std::exception&) {
            throw ConfigError("bad numeric argument '" + item + "' in interface spec");
        }
    }
    if (args.size() != 3) {
        throw ConfigError("interface spec '" + text + "' needs exactly 3 arguments");
    }
    if (name == "circle") {
        if (!(args[2] > 0.0)) {
            throw ConfigError("circle radius must be positive");
        }
        return circle(args[0], args[1], args[2]);
    }
    if (name == "line") {
        return line(args[0], args[1], args[2]);
    }
    throw ConfigError("unknown interface '" + name + "' (expected circle or line)");
}

namespace {

int snapped_sign(double value, double tol)
{
    if (std::abs(value) < tol) {
        return 0;
    }
    return value < 0.0 ? -1 : 1;
}

constexpr int kCrossingSamples = 16;

}  // namespace

std::optional<Point> edge_intersection(const Point& p0, const Point& p1,
                                       const InterfaceGeometry& iface, double h)
{
    const double tol = iface.snap_tol * h;
    const double f0 = iface(p0);
    const double f1 = iface(p1);
    const int s0 = snapped_sign(f0, tol);
    const int s1 = snapped_sign(f1, tol);

    // Sample the segment to catch curves that re-enter it.
    int changes = 0;
    int last = s0;
    double t_last = 0.0;
    double t_lo = 0.0;
    double t_hi = 1.0;
    for (int k = 1; k <= kCrossingSamples; ++k) {
        const double t = static_cast<double>(k) / kCrossingSamples;
        const int s = k == kCrossingSamples ? s1 : snapped_sign(iface(lerp(p0, p1, t)), tol);
        if (s != 0 && last != 0 && s != last) {
            ++changes;
            t_lo = t_last;
            t_hi = t;
        }
        if (s != 0) {
            last = s;
            t_last = t;
        }
    }
    if (changes > 1) {
        throw MultipleCrossings("interface crosses segment more than once; mesh too coarse");
    }
    if (s0 == 0 || s1 == 0 || s0 == s1) {
        return std::nullopt;
    }

    double f_lo = iface(lerp(p0, p1, t_lo));
    for (int it = 0; it < 200 && t_hi - t_lo > 1e-15; ++it) {
        const double tm = 0.5 * (t_lo + t_hi);
        const double fm = iface(lerp(p0, p1, tm));
        if (fm == 0.0) {
            t_lo = t_hi = tm;
            break;
        }
        if ((fm < 0.0) == (f_lo < 0.0)) {
            t_lo = tm;
            f_lo = fm;
        } else {
            t_hi = tm;
        }
    }
    return lerp(p0, p1, 0.5 * (t_lo + t_hi));
}

CutType rect_cut_type(const Point& origin, double h, const Point& D, const Point& E)
{
    const double tol = 1e-12 * h;
    auto edges_containing = [&](const Point& p) {
        std::vector<int> ids;
        const Point q = p - origin;
        if (std::abs(q.y) <= tol) ids.push_back(0);
        if (std::abs(q.x - h) <= tol) ids.push_back(1);
        if (std::abs(q.y - h) <= tol) ids.push_back(2);
        if (std::abs(q.x) <= tol) ids.push_back(3);
        return ids;
    };
    const auto ed = edges_containing(D);
    const auto ee = edges_containing(E);
    if (ed.empty() || ee.empty()) {
        return CutType::None;
    }
    for (int a : ed) {
        for (int b : ee) {
            if (a != b && (a - b) % 2 != 0) {
                return CutType::TypeI;
            }
        }
    }
    return CutType::TypeII;
}

std::vector<ElementCut> classify_elements(const CartesianMesh& mesh, const InterfaceGeometry& iface)
{
    const double h = std::min(mesh.h, mesh.hy > 0.0 ? mesh.hy : mesh.h);
    const double tol = iface.snap_tol * h;

    std::vector<int> node_sign(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        node_sign[i] = snapped_sign(iface(mesh.nodes[i]), tol);
    }
    std::vector<std::optional<Point>> crossing(mesh.edges.size());
    for (std::size_t k = 0; k < mesh.edges.size(); ++k) {
        const auto& E = mesh.edges[k];
        crossing[k] = edge_intersection(mesh.nodes[static_cast<std::size_t>(E.node_a)],
                                        mesh.nodes[static_cast<std::size_t>(E.node_b)], iface, h);
    }

    const int nv = mesh.vertices_per_element();
    std::vector<ElementCut> cuts(static_cast<std::size_t>(mesh.num_elements()));
    for (int e = 0; e < mesh.num_elements(); ++e) {
        ElementCut& cut = cuts[static_cast<std::size_t>(e)];
        cut.element = e;
        const auto ids = mesh.element_nodes(e);
        const auto eds = mesh.edges_of(e);

        bool has_minus = false;
        bool has_plus = false;
        for (int v : ids) {
            has_minus |= node_sign[static_cast<std::size_t>(v)] < 0;
            has_plus |= node_sign[static_cast<std::size_t>(v)] > 0;
        }
        auto mark_non_interface = [&] {
            cut.interface = false;
            cut.side = iface.side_of(mesh.centroid(e));
        };
        if (!(has_minus && has_plus)) {
            for (int k = 0; k < nv; ++k) {
                if (crossing[static_cast<std::size_t>(eds[static_cast<std::size_t>(k)])]) {
                    throw MultipleCrossings("element " + std::to_string(e) +
                                            ": edge crossing without vertex sign change");
                }
            }
            mark_non_interface();
            continue;
        }

        std::vector<Point> points;
        std::vector<int> point_edges;
        for (int k = 0; k < nv; ++k) {
            const int v = ids[static_cast<std::size_t>(k)];
            const int s = node_sign[static_cast<std::size_t>(v)];
            const Point& p = mesh.nodes[static_cast<std::size_t>(v)];
            if (s < 0) {
                cut.sub_minus.push_back(p);
            } else if (s > 0) {
                cut.sub_plus.push_back(p);
            } else {
                cut.sub_minus.push_back(p);
                cut.sub_plus.push_back(p);
                points.push_back(p);
                point_edges.push_back(eds[static_cast<std::size_t>(k)]);
            }
            const int edge = eds[static_cast<std::size_t>(k)];
            if (const auto& X = crossing[static_cast<std::size_t>(edge)]) {
                cut.sub_minus.push_back(*X);
                cut.sub_plus.push_back(*X);
                points.push_back(*X);
                point_edges.push_back(edge);
            }
        }
        if (points.size() != 2) {
            throw MultipleCrossings("element " + std::to_string(e) + ": interface meets the boundary at " +
                                    std::to_string(points.size()) + " points");
        }
        if (distance(points[0], points[1]) < tol) {
            // Degenerate chord: fall back to the majority vertex sign.
            int balance = 0;
            for (int v : ids) {
                balance += node_sign[static_cast<std::size_t>(v)];
            }
            cut = ElementCut{};
            cut.element = e;
            cut.interface = false;
            cut.degenerate_cut = true;
            cut.side = balance < 0 ? Side::Minus : (balance > 0 ? Side::Plus : iface.side_of(mesh.centroid(e)));
            continue;
        }

        cut.interface = true;
        cut.D = points[0];
        cut.E = points[1];
        cut.cut_edge_ids = {point_edges[0], point_edges[1]};
        const Vec2 t = cut.E - cut.D;
        Vec2 n{-t.y, t.x};
        n *= 1.0 / norm(n);
        for (int v : ids) {
            if (node_sign[static_cast<std::size_t>(v)] < 0) {
                if (dot(n, mesh.nodes[static_cast<std::size_t>(v)] - cut.D) > 0.0) {
                    n *= -1.0;
                }
                break;
            }
        }
        cut.chord_normal = n;
        if (mesh.kind == CellKind::Rectangular) {
            cut.type_tag = rect_cut_type(mesh.vertex(e, 0), mesh.h, cut.D, cut.E);
        }
    }
    return cuts;
}

std::vector<int> EdgeClassification::interface_edges() const
{
    std::vector<int> out;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == EdgeLabel::InteriorInterface) {
            out.push_back(static_cast<int>(k));
        }
    }
    return out;
}

EdgeClassification classify_edges(const CartesianMesh& mesh, std::span<const ElementCut> cuts)
{
    EdgeClassification out;
    const auto n_edges = static_cast<std::size_t>(mesh.num_edges());
    out.labels.assign(n_edges, EdgeLabel::Boundary);
    out.normals.assign(n_edges, Vec2{});
    out.crossing.assign(n_edges, std::nullopt);

    for (const auto& cut : cuts) {
        if (!cut.interface) {
            continue;
        }
        out.crossing[static_cast<std::size_t>(cut.cut_edge_ids[0])] = cut.D;
        out.crossing[static_cast<std::size_t>(cut.cut_edge_ids[1])] = cut.E;
    }

    for (std::size_t k = 0; k < n_edges; ++k) {
        const auto& E = mesh.edges[k];
        const Point a = mesh.nodes[static_cast<std::size_t>(E.node_a)];
        const Point b = mesh.nodes[static_cast<std::size_t>(E.node_b)];
        const Vec2 t = b - a;
        Vec2 n{t.y, -t.x};
        n *= 1.0 / norm(n);
        if (dot(n, mesh.centroid(E.left) - a) > 0.0) {
            n *= -1.0;
        }
        out.normals[k] = n;
        if (E.is_boundary()) {
            out.labels[k] = EdgeLabel::Boundary;
            continue;
        }
        const bool touches = cuts[static_cast<std::size_t>(E.left)].interface ||
                             cuts[static_cast<std::size_t>(E.right)].interface;
        out.labels[k] = touches ? EdgeLabel::InteriorInterface : EdgeLabel::InteriorNonInterface;
    }
    return out;
}

}  // namespace ppife
