#pragma once

#include <utility>
#include <vector>

namespace vfb {

// Coefficients of q(f1) = q2*f1^2 + q1*f1 + q0, understood as q(f1) >= 0.
// Produced by multiplying a bound's slack by f1*f2.
struct QuadraticInequality {
    double q2 = 0.0;
    double q1 = 0.0;
    double q0 = 0.0;

    double eval(double f) const { return (q2 * f + q1) * f + q0; }
};

// Union of finitely many disjoint closed subintervals of [0, 1], sorted.
class FractionInterval {
public:
    FractionInterval() = default;

    static FractionInterval whole();
    static FractionInterval empty_set();
    static FractionInterval single(double lo, double hi);

    // The set {f in [0,1] : q(f) >= -slack_tolerance}, solved in closed form.
    static FractionInterval from_quadratic(const QuadraticInequality& q,
                                           double slack_tolerance = 0.0);

    FractionInterval intersect(const FractionInterval& other) const;

    // Drops zero-width parts sitting exactly at 0 or 1. Multiplying a slack
    // by f1*f2 manufactures roots at the fraction endpoints, which are not
    // admissible fractions of a two-phase body; genuine interior tangencies
    // are kept.
    FractionInterval without_boundary_points() const;

    bool empty() const { return parts_.empty(); }
    bool contains(double f, double tol = 0.0) const;
    double total_length() const;

    const std::vector<std::pair<double, double>>& parts() const { return parts_; }

    // Builds from possibly unsorted/overlapping pieces; clips to [0,1],
    // merges overlaps and drops empty pieces.
    static FractionInterval from_parts(std::vector<std::pair<double, double>> parts);

private:
    std::vector<std::pair<double, double>> parts_;
};

} // namespace vfb
