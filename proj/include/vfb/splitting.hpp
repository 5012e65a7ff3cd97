#pragma once

#include <array>
#include <vector>

#include "vfb/interval.hpp"
#include "vfb/mandel.hpp"
#include "vfb/measurements.hpp"

// Method of splitting: correlate per-phase averages of the field components
// with the measured null-Lagrangians, reduce to five half-plane constraints
// on the per-phase shear energies (E1s, E2s), and project onto the volume
// fraction.
//
// The five constraints, for phases labeled kappa1 > kappa2:
//   1  E1s >= A1s/f1                          normal v1 = (-1, 0)
//   2  E2s >= A2s/f2                          normal v2 = (0, -1)
//   3  phase-1 bulk energy lower bound        normal v3 = (-k2-m1, -k2-m2)
//   4  phase-2 bulk energy lower bound        normal v4 = (k1+m1, k1+m2)
//   5  det-grad (c) inequality                normal v5 = (-(k1+m1)(k2+m1)/m1,
//                                                          -(k1+m2)(k2+m2)/m2)
// with E1b, E2b eliminated through the energy and det-stress identities.

namespace vfb::splitting {

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kDefaultResolution = 1e-3;

using Vec2 = std::array<double, 2>;

// Per-phase averages of the three strain components: m1[j] = <chi1 eps_j+1>.
struct PhaseAverages {
    std::array<double, 3> m1{};
    std::array<double, 3> m2{};
};

// The f-independent known quantities entering the five constraints.
struct SplitKnowns {
    double a1b = 0.0, a2b = 0.0; // 2*kappa_i <chi_i eps1>^2
    double a1s = 0.0, a2s = 0.0; // 2*mu_i (<chi_i eps2>^2 + <chi_i eps3>^2)
    double energy = 0.0;
    double a = 0.0;
    double c = 0.0;
};

double knowns_scale(const SplitKnowns& k);

// Half-plane in the (E1s, E2s) plane; points p with n.p <= offset are feasible.
struct HalfPlane {
    double nx = 0.0, ny = 0.0;
    double offset = 0.0;

    double slack(double x, double y) const { return offset - (nx * x + ny * y); }
    double norm() const;
};

struct FeasibilityResult {
    bool feasible = false;
    Vec2 witness{};                 // a feasible point when feasible
    std::vector<int> active;        // 0-based indices of tight constraints
    double violation = 0.0;         // min over candidates of max scaled violation
    bool relabeled = false;         // true when phases were swapped internally
};

// Per-phase component averages from the measured average stress and strain.
PhaseAverages phase_averages(const Measurements& m, const PhasePair& phases);

SplitKnowns split_knowns(const Measurements& m, const PhasePair& phases);

// The five constraints at volume fraction f1, in the canonical frame with the
// larger-kappa phase first (inputs are relabeled internally if needed).
std::array<HalfPlane, 5> half_planes(double f1, const SplitKnowns& k, const PhasePair& phases);

// The five f-independent outward normals, canonical frame (kappa1 > kappa2
// required).
std::array<Vec2, 5> normals(const PhasePair& phases);

// Exact 2-D feasibility by vertex enumeration over the pairwise constraint
// intersections. Witness and active set are reported in the caller's phase
// labeling.
FeasibilityResult feasible(double f1, const SplitKnowns& k, const PhasePair& phases,
                           double tolerance = kDefaultTolerance);

// Nonnegative coefficients (a1, a2, a3) with a1*na + a2*nb + a3*nc = 0,
// normalized to a3 = 1, or rejection when no such combination exists. This is
// the admissibility condition for three constraints to pin a corner of the
// feasible region.
struct Combination {
    bool admissible = false;
    std::array<double, 3> coeff{};
};

Combination combination_coefficients(const Vec2& na, const Vec2& nb, const Vec2& nc);

// Triplet (v_i, v_j, v5) by 1-based constraint index; kappa1 > kappa2 required.
Combination combination_coefficients(int i, int j, const PhasePair& phases);

// Slacks of the two closed-form bounds: the (v3,v4,v5) combination, and the
// (v1,v4,v5) or (v2,v4,v5) combination, whichever the mu ordering admits.
// Each is generated from the combination coefficients and cross-checked
// against the expanded formula.
std::array<double, 2> closed_form_slacks(double f1, const SplitKnowns& k,
                                         const PhasePair& phases);

// {f1 : feasible} by grid scan plus bisection of the boundaries, intersected
// with the closed-form quadratic intervals. Results are in the caller's
// labeling.
FractionInterval invert(const SplitKnowns& k, const PhasePair& phases,
                        double resolution = kDefaultResolution,
                        double tolerance = kDefaultTolerance);

} // namespace vfb::splitting
