#pragma once

#include <iosfwd>
#include <vector>

#include "vfb/mandel.hpp"
#include "vfb/measurements.hpp"

// Boundary ingestion: the five null-Lagrangians and the domain area from
// sampled traction/displacement data on a closed polygonal boundary.
//
// Quadrature is segment-wise trapezoid on the given nodes; data is
// node-collocated and no resampling is performed. The sign of
// a = <det sigma> is calibrated against the uniform-stress case (a must equal
// det of the average stress), which fixes the orientation conventions once.

namespace vfb::boundary {

struct TraceNode {
    double x = 0.0, y = 0.0;   // position
    double t1 = 0.0, t2 = 0.0; // traction sigma.n
    double u1 = 0.0, u2 = 0.0; // displacement
};

// Closed polygon: the last node connects back to the first.
struct BoundaryTrace {
    std::vector<TraceNode> nodes;
};

struct Diagnostics {
    double area = 0.0;       // after orientation normalization
    double perimeter = 0.0;
    bool reoriented = false; // input was clockwise and has been reversed
    double net_force_x = 0.0;
    double net_force_y = 0.0;
    double net_force = 0.0;  // |closed traction integral|
    double net_moment = 0.0;
    double sigma_asymmetry = 0.0;  // |S12 - S21| of the raw average-stress integral
    double x0_shift_residual = 0.0; // change in a when x0 moves one node
};

// Orientation-normalizes, checks the polygon (>= 3 nodes, finite data, no
// zero-length segments, positive area) and reports the equilibrium residuals.
Diagnostics validate(const BoundaryTrace& trace);

struct IngestResult {
    Measurements measurements;
    Diagnostics diagnostics;
};

// The five null-Lagrangians by trapezoidal quadrature: average stress from
// the x (sigma.n)^T moment (symmetrized), average gradient from n u^T, energy
// from (sigma.n).u, a from the cumulative flux potential, b from u1 du2.
IngestResult ingest_full(const BoundaryTrace& trace);

inline Measurements ingest(const BoundaryTrace& trace) {
    return ingest_full(trace).measurements;
}

// Trace file: one node per row "x, y, t1, t2, u1, u2"; '#' lines and blank
// lines are skipped.
BoundaryTrace read_trace_csv(std::istream& in);
BoundaryTrace read_trace_file(const std::string& path);
void write_trace_csv(std::ostream& out, const BoundaryTrace& trace);

} // namespace vfb::boundary
