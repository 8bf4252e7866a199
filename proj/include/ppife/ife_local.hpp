#pragma once

#include "ppife/geometry.hpp"
#include "ppife/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace ppife {

enum class BasisKind { StandardLinear, StandardBilinear, IFELinear, IFEBilinear };

/// Coefficients (c1, c2, c3, c4) of c1 + c2*x + c3*y + c4*x*y in coordinates
/// relative to the element origin. c4 is zero for linear pieces.
using PieceCoeffs = std::array<double, 4>;

/// Straight chord DE with its unit normal pointing into the plus piece.
struct Chord {
    Point D;
    Point E;
    Vec2 normal;

    static Chord from_cut(const ElementCut& cut) { return {cut.D, cut.E, cut.chord_normal}; }
};

/// Nodal basis on one element: one polynomial per chord side.
///
/// Basis function j takes the value 1 at local vertex j and 0 at the other
/// vertices. On non-interface elements the two pieces coincide.
struct LocalIFEBasis {
    int element = -1;
    BasisKind kind = BasisKind::StandardLinear;
    int n_dofs = 3;
    Point origin;
    double h = 1.0;  // characteristic size (longest bounding-box side)
    bool cut = false;
    Chord chord;
    std::array<PieceCoeffs, 4> minus{};
    std::array<PieceCoeffs, 4> plus{};

    const PieceCoeffs& coeffs(int j, Side s) const
    {
        return s == Side::Minus ? minus[static_cast<std::size_t>(j)] : plus[static_cast<std::size_t>(j)];
    }

    /// Piece that owns p. Points within 1e-13*h of the chord use the minus piece.
    Side piece_at(const Point& p) const;

    double value(int j, const Point& p, Side s) const;
    Vec2 gradient(int j, const Point& p, Side s) const;
};

double eval_basis(const LocalIFEBasis& basis, int j, const Point& p);
Vec2 grad_basis(const LocalIFEBasis& basis, int j, const Point& p);

/// P1 (3 vertices) or Q1 (4 axis-aligned vertices) nodal basis.
LocalIFEBasis build_standard_basis(std::span<const Point> vertices);

/// Linear IFE basis on a cut triangle: Kronecker at vertices, continuity at
/// D and E and beta-weighted normal flux continuity across DE.
LocalIFEBasis build_linear_ife_basis(std::span<const Point> vertices, const Chord& chord,
                                     double beta_minus, double beta_plus);

/// Bilinear IFE basis on a cut rectangle. Both pieces share the xy
/// coefficient; the flux condition is imposed as an integral over DE.
LocalIFEBasis build_bilinear_ife_basis(std::span<const Point> vertices, const Chord& chord,
                                       double beta_minus, double beta_plus);

/// Dispatches on the element kind and its cut status.
LocalIFEBasis build_element_basis(const CartesianMesh& mesh, const ElementCut& cut,
                                  double beta_minus, double beta_plus);

std::vector<LocalIFEBasis> build_all_bases(const CartesianMesh& mesh, std::span<const ElementCut> cuts,
                                           double beta_minus, double beta_plus);

struct BasisResiduals {
    double kronecker = 0.0;
    double continuity = 0.0;
    double flux = 0.0;
    double partition_of_unity = 0.0;

    double max() const;
};

/// Largest violation of each construction constraint over all basis functions.
/// The flux entry is the pointwise normal-flux jump for linear pieces and
/// the integral over DE for bilinear pieces.
BasisResiduals basis_residuals(const LocalIFEBasis& basis, std::span<const Point> vertices,
                               double beta_minus, double beta_plus);

}  // namespace ppife
