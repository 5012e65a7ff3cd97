#pragma once

#include <algorithm>
#include <cmath>

#include "vfb/mandel.hpp"

namespace vfb {

// The five boundary-measurable quantities of a loaded two-phase body plus the
// domain area: average stress, average displacement gradient, energy
// <sigma.eps>, a = <det sigma>, b = <det grad u>.
struct Measurements {
    MandelVec sigma0;   // <sigma>
    GradVec4 grad0;     // <grad u>, F0 component first
    double energy = 0.0;
    double a = 0.0;
    double b = 0.0;
    double area = 1.0;

    // c = b - <F0>^2 / 2, the quantity the det-grad inequality bounds.
    double c() const { return b - 0.5 * grad0.f0 * grad0.f0; }
};

// Characteristic magnitude used to make slack tolerances relative.
inline double measurement_scale(const Measurements& m) {
    return std::max({std::abs(m.energy), std::abs(m.a), 1.0});
}

} // namespace vfb
