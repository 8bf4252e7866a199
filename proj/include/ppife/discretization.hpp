#pragma once

#include "ppife/geometry.hpp"
#include "ppife/ife_local.hpp"
#include "ppife/quadrature.hpp"

#include <span>
#include <vector>

namespace ppife {

/// Mesh, interface classification and local bases for one (mesh, beta) pair.
struct Discretization {
    DomainSpec domain;
    CartesianMesh mesh;
    InterfaceGeometry iface;
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    std::vector<ElementCut> cuts;
    EdgeClassification edges;
    std::vector<LocalIFEBasis> bases;

    double beta(Side s) const { return s == Side::Minus ? beta_minus : beta_plus; }
    int num_interface_elements() const;

    /// Value of the finite element function with nodal values `coeffs` at p in element e.
    double eval(std::span<const double> coeffs, int e, const Point& p, Side piece) const;
    Vec2 eval_gradient(std::span<const double> coeffs, int e, const Point& p, Side piece) const;
};

Discretization discretize(const DomainSpec& domain, const InterfaceGeometry& iface, double beta_minus,
                          double beta_plus);

/// Quadrature over one piece of an element. `side` selects the basis piece
/// and the discrete coefficient for that piece.
struct PieceRule {
    QuadratureRule rule;
    Side side = Side::Minus;
};

/// Rules covering element e: the whole element for non-interface elements,
/// one rule per chord sub-polygon (each fan triangle refined `refine`
/// times) for interface elements. Slivers below 1e-14 h^2 are dropped.
std::vector<PieceRule> element_rules(const Discretization& disc, int e, int degree, int refine);

}  // namespace ppife
