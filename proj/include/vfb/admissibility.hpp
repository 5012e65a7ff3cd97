#pragma once

#include <string>
#include <vector>

#include "vfb/mandel.hpp"
#include "vfb/measurements.hpp"
#include "vfb/splitting.hpp"
#include "vfb/translation.hpp"

// Admissibility of (average stress, average strain) pairs in two-phase
// composites. For a periodic or statistically homogeneous composite the energy
// and both determinants collapse onto the averages, so the body bounds become
// constraints on the pair alone.

namespace vfb::pairs {

inline constexpr double kDefaultTolerance = 1e-9;

struct CompositePair {
    MandelVec sigma0;
    MandelVec eps0; // <grad u> taken symmetric
};

// energy = sigma0.eps0, a = det sigma0, b = det eps0, <F0> = 0, area = 1.
Measurements composite_measurements(const CompositePair& p);

struct ConstraintReport {
    std::string name;
    double slack = 0.0;
    bool violated = false;
};

struct Verdict {
    bool admissible = false;
    double min_slack = 0.0;
    // Both translation endpoint slacks, the splitting feasibility margin, and
    // the five half-plane slacks at the splitting witness.
    std::vector<ConstraintReport> constraints;
};

Verdict admissible(const CompositePair& p, double f1, const PhasePair& phases,
                   double tolerance = kDefaultTolerance);

// 2-D slice of eps0 space: components vary_i and vary_j sweep their ranges,
// the remaining component is held at fixed_value.
struct GridSpec {
    int vary_i = 1, vary_j = 2;
    double lo_i = 0.0, hi_i = 0.0;
    int count_i = 1;
    double lo_j = 0.0, hi_j = 0.0;
    int count_j = 1;
    double fixed_value = 0.0;
};

struct ScanRow {
    MandelVec eps0;
    bool admissible = false;
    double min_slack = 0.0;
};

// One row per grid point, outer loop over vary_i, inner over vary_j.
std::vector<ScanRow> region_scan(const MandelVec& sigma0, const GridSpec& grid, double f1,
                                 const PhasePair& phases,
                                 double tolerance = kDefaultTolerance);

} // namespace vfb::pairs
