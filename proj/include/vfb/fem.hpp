#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "vfb/boundary.hpp"
#include "vfb/mandel.hpp"
#include "vfb/measurements.hpp"

// Structured-grid displacement finite elements on the unit square: bilinear
// quadrilaterals, 2x2 Gauss quadrature, cell-constant isotropic phase,
// Dirichlet displacement data on the whole boundary. Deterministic
// Jacobi-preconditioned conjugate gradients with a fixed summation order, so
// identical inputs produce identical outputs.
//
// Serves as the validity oracle for non-laminate geometries: the pixel grid
// makes the phase-1 fraction exactly known.

namespace vfb::fem {

// n x n cells on the unit square; phase id (1 or 2) per cell, row-major with
// cell (ix, iy) at index iy*n + ix, iy increasing upward.
struct PixelGeometry {
    int n = 0;
    std::vector<unsigned char> phase;

    double f1() const;
    int cell(int ix, int iy) const { return iy * n + ix; }
};

// Disk of phase 1 centered in the square; cell phase by cell-center membership.
PixelGeometry geometry_disk(int n, double radius);

// Vertical stripes of spatial period `period` cells; within each period the
// first round(f1*period) columns are phase 1.
PixelGeometry geometry_stripes(int n, double f1, int period);

// Text grid of '1'/'2' characters, n lines of n characters, top row first.
PixelGeometry read_geometry(std::istream& in);
void write_geometry(std::ostream& out, const PixelGeometry& geom);

struct Convergence {
    double rel_residual = 0.0;
    int iterations = 0;
};

struct Solution {
    PixelGeometry geometry;
    PhasePair phases;
    std::vector<double> displacement; // 2 dofs per node, node-major
    Convergence convergence;
    // Per-cell, per-Gauss-point fields, cell-major then gp 0..3.
    std::vector<MandelVec> gp_stress;
    std::vector<GradVec4> gp_grad;
};

using BoundaryDisplacement = std::function<std::array<double, 2>(double x, double y)>;

// Affine Dirichlet loading u = G^T x built from the average-gradient target.
Solution solve(const PixelGeometry& geom, const PhasePair& phases, const GradVec4& avg_strain);

// General Dirichlet data (used e.g. to impose an exact laminate trace).
Solution solve(const PixelGeometry& geom, const PhasePair& phases,
               const BoundaryDisplacement& boundary_u);

// Null-Lagrangians of the discrete field by Gauss quadrature.
Measurements measurements_of(const Solution& sol);

// Counterclockwise node-collocated trace: tractions from boundary-cell
// stresses (averaged where a sample sits on a shared cell edge),
// displacements interpolated from the nodes. Square corners are split into
// two nearby nodes so each edge carries its own one-sided traction.
boundary::BoundaryTrace boundary_trace_of(const Solution& sol, int samples_per_edge);

// Work of the boundary reactions against the imposed displacements; equals
// the quadrature energy integral up to the solver residual.
double boundary_work(const Solution& sol);

} // namespace vfb::fem
