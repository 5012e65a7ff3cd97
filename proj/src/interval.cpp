#include "vfb/interval.hpp"

#include <algorithm>
#include <cmath>

namespace vfb {

FractionInterval FractionInterval::whole() { return single(0.0, 1.0); }

FractionInterval FractionInterval::empty_set() { return {}; }

FractionInterval FractionInterval::single(double lo, double hi) {
    return from_parts({{lo, hi}});
}

FractionInterval FractionInterval::from_parts(std::vector<std::pair<double, double>> parts) {
    FractionInterval out;
    for (auto& p : parts) {
        // + 0.0 flushes negative zero from the root solver.
        p.first = std::max(p.first, 0.0) + 0.0;
        p.second = std::min(p.second, 1.0) + 0.0;
    }
    std::erase_if(parts, [](const auto& p) { return !(p.first <= p.second); });
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts) {
        if (!out.parts_.empty() && p.first <= out.parts_.back().second) {
            out.parts_.back().second = std::max(out.parts_.back().second, p.second);
        } else {
            out.parts_.push_back(p);
        }
    }
    return out;
}

bool FractionInterval::contains(double f, double tol) const {
    for (const auto& p : parts_)
        if (f >= p.first - tol && f <= p.second + tol) return true;
    return false;
}

double FractionInterval::total_length() const {
    double len = 0.0;
    for (const auto& p : parts_) len += p.second - p.first;
    return len;
}

FractionInterval FractionInterval::without_boundary_points() const {
    FractionInterval out = *this;
    std::erase_if(out.parts_, [](const auto& p) {
        return p.first == p.second && (p.first == 0.0 || p.first == 1.0);
    });
    return out;
}

FractionInterval FractionInterval::intersect(const FractionInterval& other) const {
    std::vector<std::pair<double, double>> out;
    std::size_t i = 0, j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
        const auto& a = parts_[i];
        const auto& b = other.parts_[j];
        const double lo = std::max(a.first, b.first);
        const double hi = std::min(a.second, b.second);
        if (lo <= hi) out.push_back({lo, hi});
        if (a.second < b.second)
            ++i;
        else
            ++j;
    }
    FractionInterval r;
    r.parts_ = std::move(out);
    return r;
}

FractionInterval FractionInterval::from_quadratic(const QuadraticInequality& q,
                                                  double slack_tolerance) {
    // Solve q(f) + tol >= 0 on [0,1]. Degeneracy thresholds are relative to
    // the coefficient magnitude so that scaled data behaves identically.
    const double a = q.q2;
    const double b = q.q1;
    const double c = q.q0 + slack_tolerance;
    const double mag = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (mag == 0.0) return whole();

    const double eps = 1e-14 * mag;
    if (std::abs(a) <= eps) {
        if (std::abs(b) <= eps) return c >= -eps ? whole() : empty_set();
        const double r = -c / b;
        return b > 0.0 ? single(r, 1.0) : single(0.0, r);
    }

    const double disc = b * b - 4.0 * a * c;
    if (disc <= 0.0) {
        // No real sign change: constant sign (tangency counts as touching).
        if (a < 0.0) {
            if (disc == 0.0) {
                const double r = -b / (2.0 * a);
                return single(r, r);
            }
            return empty_set();
        }
        return whole();
    }

    const double sq = std::sqrt(disc);
    // Numerically stable root pair.
    const double t = -0.5 * (b + std::copysign(sq, b));
    double r1 = t / a;
    double r2 = (t != 0.0) ? c / t : -b / a - r1;
    if (r1 > r2) std::swap(r1, r2);

    if (a > 0.0) return from_parts({{0.0, r1}, {r2, 1.0}});
    return single(r1, r2);
}

} // namespace vfb
