#pragma once

#include "ppife/assembly.hpp"
#include "ppife/geometry.hpp"
#include "ppife/ife_local.hpp"
#include "ppife/problem.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace ppife {

/// A single cut element in local coordinates.
///
/// For Type I cuts (and all triangle cuts) the chord isolates vertex k:
/// D = A_k + d (A_{k-1} - A_k) and E = A_k + e (A_{k+1} - A_k). For Type II
/// rectangle cuts D = A_k + d (A_{k+1} - A_k) lies on edge k and E on the
/// opposite edge, E = A_{k+3} + e (A_{k+2} - A_{k+3}). A_k is on the minus
/// side unless `flip` is set.
struct ReferenceCut {
    CellKind kind = CellKind::Triangular;
    CutType type = CutType::TypeI;
    std::vector<Point> vertices;
    Chord chord;
    double d = 0.5;
    double e = 0.5;
    int vertex = 0;
    bool flip = false;
};

/// Triangles use A = (0,0), (h,0), (0,h); rectangles the square [0,h]^2.
ReferenceCut reference_cut(CellKind kind, CutType type, double d, double e, double h = 1.0, int vertex = 0,
                           bool flip = false);

/// Draws d, e uniformly in [0.01, 0.99], the isolated vertex, the side
/// orientation and (for rectangles) the cut type.
ReferenceCut random_cut(CellKind kind, std::mt19937_64& rng, double h = 1.0);

LocalIFEBasis build_reference_basis(const ReferenceCut& cut, double beta_minus, double beta_plus);

struct ScanSample {
    std::string label;
    double value = 0.0;
};

struct ScanReport {
    std::string scan_id;
    std::string grid;
    std::uint64_t seed = 0;
    std::vector<ScanSample> samples;
    double max = 0.0;
    double min = 0.0;
    std::size_t argmax = 0;
    std::vector<std::pair<std::string, double>> metrics;
    std::string criterion;
    bool pass = false;

    void add(std::string label, double value) { samples.push_back({std::move(label), value}); }
    void metric(std::string name, double value) { metrics.emplace_back(std::move(name), value); }
    void finalize_extrema();

    /// "PASS <scan_id>: ..." or "FAIL <scan_id>: ...".
    std::string summary_line() const;
};

void write_scan_csv(std::ostream& out, const ScanReport& report);

struct VerifyConfig {
    std::vector<std::pair<double, double>> beta_pairs{{1.0, 10.0}, {1.0, 10000.0}, {10.0, 1.0}};
    int samples = 1000;
    std::uint64_t seed = 12345;
    std::vector<int> coercivity_N{10, 20, 40};
    std::vector<std::pair<double, double>> coercivity_betas{{1.0, 10.0}, {1.0, 10000.0}};
    std::optional<double> sigma0;  // replaces the SPP/IPP preset penalty when set
    std::vector<int> interp_N{20, 40, 80, 160};
    double interp_beta_minus = 1.0;
    double interp_beta_plus = 10.0;
    std::vector<CellKind> kinds{CellKind::Triangular, CellKind::Rectangular};
};

/// Max of ||c-||/||c+|| and its inverse over cuts and basis functions
/// (coefficients scaled to a unit element). Passes if the maximum is finite and
/// changes by less than 10% when the (d, e) sample set is refined four times.
ScanReport scan_coefficient_bounds(const VerifyConfig& config);

/// R = ||beta grad v . n_B||_B / (h^(1/2) |K|^(-1/2) ||sqrt(beta) grad v||_K),
/// maximised over the element edges B and over the whole local space (a
/// generalized eigenvalue problem). Passes if max R is stable under 4x sample
/// refinement and over h in {1, 1/2, 1/4}. For rectangles the quadrant
/// gradient lower bound is also checked.
ScanReport scan_trace_ratio(const VerifyConfig& config);

/// Cholesky of the symmetric part of the free-dof matrix for the SPP, IPP and
/// NPP presets; also locates the SPP penalty threshold by repeated halving.
ScanReport scan_coercivity(const VerifyConfig& config);

/// sum over interface edges B and both neighbours T of
/// ||beta grad(u - I_h u)|_T . n_B||^2_B for the benchmark solution.
/// Passes if the log-log slope against h is at least 1.8.
ScanReport interp_edge_error_study(const VerifyConfig& config);

/// Constant of the quadrant lower bound
///   ||grad v||^2_{[h/2,h]^2} >= (C/48) h^2 (c2^2 + c3^2 + c4^2 h^2)
/// for v = c1 + c2 x + c3 y + c4 x y, with C = min(12 - 9/s, 2(7 - 9 s))
/// maximised over s in (3/4, 7/9).
double quadrant_bound_constant();

/// ||grad v||^2 over [h/2,h]^2 by tensor Gauss quadrature.
double quadrant_gradient_norm2(double c2, double c3, double c4, double h);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ppife
