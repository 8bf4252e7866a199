#pragma once

#include "ppife/types.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ppife {

enum class CellKind { Triangular, Rectangular };

std::string to_string(CellKind kind);
CellKind parse_cell_kind(const std::string& name);

struct DomainSpec {
    double xmin = -1.0;
    double xmax = 1.0;
    double ymin = -1.0;
    double ymax = 1.0;
    int N = 20;
    CellKind cell_kind = CellKind::Rectangular;

    /// Throws ConfigError if the box is empty or N < 2.
    void validate() const;
};

struct MeshEdge {
    int node_a = -1;
    int node_b = -1;
    int left = -1;   // lower element index
    int right = -1;  // higher element index, -1 on the boundary

    bool is_boundary() const { return right < 0; }
};

/// Structured Cartesian mesh of triangles or rectangles.
///
/// Rectangles are numbered e = i + j*N with counterclockwise vertices
/// starting at the lower-left corner. Each square of a triangular mesh is
/// split along its lower-left to upper-right diagonal into the triangles
/// (ll, lr, ur) and (ll, ur, ul), numbered 2e and 2e+1. Local edge k of an
/// element joins its local vertices k and k+1.
class CartesianMesh {
public:
    CellKind kind = CellKind::Rectangular;
    int cells_per_side = 0;
    double h = 0.0;
    double hy = 0.0;
    std::vector<Point> nodes;
    std::vector<std::array<int, 4>> elements;  // last entry -1 for triangles
    std::vector<MeshEdge> edges;
    std::vector<std::array<int, 4>> element_edges;
    std::vector<char> boundary_node;

    int vertices_per_element() const { return kind == CellKind::Triangular ? 3 : 4; }
    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_elements() const { return static_cast<int>(elements.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    std::span<const int> element_nodes(int e) const
    {
        return {elements[static_cast<std::size_t>(e)].data(),
                static_cast<std::size_t>(vertices_per_element())};
    }

    std::span<const int> edges_of(int e) const
    {
        return {element_edges[static_cast<std::size_t>(e)].data(),
                static_cast<std::size_t>(vertices_per_element())};
    }

    Point vertex(int e, int local) const
    {
        return nodes[static_cast<std::size_t>(elements[static_cast<std::size_t>(e)][static_cast<std::size_t>(local)])];
    }

    std::vector<Point> element_polygon(int e) const;
    Point centroid(int e) const;
    double element_area(int e) const;
    double edge_length(int edge) const;
};

CartesianMesh build_mesh(const DomainSpec& spec);

/// One record per line: "node i x y", "element e v...", "edge k a b left right".
void write_mesh(std::ostream& out, const CartesianMesh& mesh);

/// Implicit interface curve. phi < 0 marks the minus subdomain.
struct InterfaceGeometry {
    std::function<double(const Point&)> levelset;
    std::function<Vec2(const Point&)> gradient;
    double snap_tol = 1e-10;
    std::string description;

    double operator()(const Point& p) const { return levelset(p); }
    Side side_of(const Point& p) const { return levelset(p) < 0.0 ? Side::Minus : Side::Plus; }

    static InterfaceGeometry circle(double cx, double cy, double r);
    static InterfaceGeometry line(double a, double b, double c);

    /// Parses "circle(cx,cy,r)" or "line(a,b,c)".
    static InterfaceGeometry parse(const std::string& text);
};

std::optional<Point> edge_intersection(const Point& p0, const Point& p1,
                                       const InterfaceGeometry& iface, double h);

enum class CutType { None, TypeI, TypeII };

struct ElementCut {
    int element = -1;
    bool interface = false;
    Side side = Side::Minus;  // meaningful for non-interface elements
    Point D;
    Point E;
    std::array<int, 2> cut_edge_ids{-1, -1};
    Vec2 chord_normal;        // unit, points from K- into K+
    std::vector<Point> sub_minus;
    std::vector<Point> sub_plus;
    CutType type_tag = CutType::None;
    bool degenerate_cut = false;  // interface cut collapsed below tolerance

    const std::vector<Point>& sub(Side s) const { return s == Side::Minus ? sub_minus : sub_plus; }

    /// Signed distance of p from the chord line, positive on the plus side.
    double chord_distance(const Point& p) const { return dot(chord_normal, p - D); }
};

/// Classifies a chord of an axis-aligned square cell (lower-left corner
/// `origin`, side `h`) as Type I (adjacent edges) or Type II (opposite edges).
CutType rect_cut_type(const Point& origin, double h, const Point& D, const Point& E);

std::vector<ElementCut> classify_elements(const CartesianMesh& mesh, const InterfaceGeometry& iface);

enum class EdgeLabel { InteriorInterface, InteriorNonInterface, Boundary };

struct EdgeClassification {
    std::vector<EdgeLabel> labels;
    std::vector<Vec2> normals;                   // unit, from T_{B,1} (left) to T_{B,2} (right)
    std::vector<std::optional<Point>> crossing;  // interface point on the edge, if any

    std::vector<int> interface_edges() const;
};

EdgeClassification classify_edges(const CartesianMesh& mesh, std::span<const ElementCut> cuts);

double polygon_area(std::span<const Point> poly);

}  // namespace ppife
