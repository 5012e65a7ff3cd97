#pragma once

#include <array>

#include "vfb/mandel.hpp"
#include "vfb/measurements.hpp"

// Analytic rank-1 laminate solver. Fields are exactly constant per phase, so
// every null-Lagrangian and both bound families are evaluated without
// discretization error; laminates realize the attainability conditions of the
// bounds and serve as the tightness oracle.

namespace vfb::laminate {

// Two-phase rank-1 laminate: layer normal at angle `theta`, phase-1 fraction
// f1 in (0,1).
struct Laminate {
    double theta = 0.0;
    double f1 = 0.5;
    PhasePair phases;
};

// Piecewise-constant solution fields under a prescribed average gradient.
struct Fields {
    MandelVec strain1, strain2;   // per-phase strain
    MandelVec stress1, stress2;   // per-phase stress
    GradVec4 grad1, grad2;        // per-phase displacement gradient (with F0)
    std::array<double, 2> jump{}; // displacement-gradient jump vector lambda
    std::array<double, 2> normal{};
};

// Solves the 2x2 interface system (traction continuity with strain
// compatibility eps2 - eps1 = sym(lambda x n)) for the jump vector and builds
// the per-phase fields. avg_strain may carry an antisymmetric part; the
// per-phase F0 then differs between phases unless lambda is parallel to n.
Fields solve(const Laminate& lam, const GradVec4& avg_strain);

// Exact null-Lagrangians of the laminate by f-weighted per-phase averages.
Measurements measurements_of(const Fields& fields, double f1);

// Symmetric 3x3 matrix on MandelVec; the effective compliance map.
struct SymMat3 {
    double m[3][3] = {};

    MandelVec operator*(const MandelVec& v) const {
        return {m[0][0] * v.v1 + m[0][1] * v.v2 + m[0][2] * v.v3,
                m[1][0] * v.v1 + m[1][1] * v.v2 + m[1][2] * v.v3,
                m[2][0] * v.v1 + m[2][1] * v.v2 + m[2][2] * v.v3};
    }
};

// Effective compliance sigma0 -> eps0, assembled from three unit average
// strains and inverted.
SymMat3 effective_compliance(const Laminate& lam);

} // namespace vfb::laminate
