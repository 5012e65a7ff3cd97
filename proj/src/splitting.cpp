#include "vfb/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vfb/errors.hpp"

namespace vfb::splitting {

namespace {

void require_fraction(double f1, const char* where) {
    if (!(f1 > 0.0 && f1 < 1.0))
        throw DomainError(std::string(where) + ": f1 must lie in (0,1)");
}

struct Canonical {
    SplitKnowns k;
    PhasePair phases;
    double f1 = 0.0;
    bool relabeled = false;
};

// Relabel so that kappa1 > kappa2; the knowns and the fraction swap with the
// phases.
Canonical canonical(double f1, const SplitKnowns& k, const PhasePair& phases) {
    Canonical c{k, phases, f1, false};
    if (phases.phase1.kappa < phases.phase2.kappa) {
        c.phases = phases.swapped();
        std::swap(c.k.a1b, c.k.a2b);
        std::swap(c.k.a1s, c.k.a2s);
        c.f1 = 1.0 - f1;
        c.relabeled = true;
    }
    return c;
}

std::array<HalfPlane, 5> canonical_half_planes(double f1, const SplitKnowns& k,
                                               const PhasePair& phases) {
    const double f2 = 1.0 - f1;
    const double k1 = phases.phase1.kappa, k2 = phases.phase2.kappa;
    const double m1 = phases.phase1.mu, m2 = phases.phase2.mu;

    std::array<HalfPlane, 5> hp;
    hp[0] = {-1.0, 0.0, -k.a1s / f1};
    hp[1] = {0.0, -1.0, -k.a2s / f2};
    hp[2] = {-(k2 + m1), -(k2 + m2), k.a - k2 * k.energy - (k1 - k2) * k.a1b / f1};
    hp[3] = {k1 + m1, k1 + m2, k1 * k.energy - k.a - (k1 - k2) * k.a2b / f2};
    hp[4] = {-(k1 + m1) * (k2 + m1) / m1, -(k1 + m2) * (k2 + m2) / m2,
             k.a - (k1 + k2) * k.energy + 4.0 * k1 * k2 * k.c};
    return hp;
}

struct VertexSearch {
    bool found = false;
    Vec2 best{};
    double violation = 0.0;
};

// Minimum over pairwise intersection vertices of the largest scaled
// constraint violation. The region is line-free (v1 and v2 are never
// parallel), so it is nonempty exactly when some vertex is feasible.
VertexSearch search_vertices(const std::array<HalfPlane, 5>& hp) {
    VertexSearch vs;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            const double det = hp[i].nx * hp[j].ny - hp[i].ny * hp[j].nx;
            const double scale = hp[i].norm() * hp[j].norm();
            if (!(std::abs(det) > 1e-12 * scale)) continue;
            const double x = (hp[i].offset * hp[j].ny - hp[j].offset * hp[i].ny) / det;
            const double y = (hp[i].nx * hp[j].offset - hp[j].nx * hp[i].offset) / det;
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto& h : hp)
                worst = std::max(worst, -h.slack(x, y) / h.norm());
            if (!vs.found || worst < vs.violation) {
                vs.found = true;
                vs.best = {x, y};
                vs.violation = worst;
            }
        }
    }
    return vs;
}

// Quadratic interval for one closed-form slack via the same 3-point fit used
// by the translation bound.
FractionInterval closed_form_interval(int which, const SplitKnowns& k,
                                      const PhasePair& phases, double tol_abs) {
    const double fs[3] = {0.25, 0.5, 0.75};
    double ys[3];
    for (int i = 0; i < 3; ++i)
        ys[i] = fs[i] * (1.0 - fs[i]) * closed_form_slacks(fs[i], k, phases)[which];
    const double q2 = 8.0 * (ys[0] - 2.0 * ys[1] + ys[2]);
    const double q1 = -2.0 * (5.0 * ys[0] - 8.0 * ys[1] + 3.0 * ys[2]);
    const double q0 = 3.0 * ys[0] - 3.0 * ys[1] + ys[2];
    QuadraticInequality q{q2, q1, q0};

    const double f = 1.0 / 3.0;
    const double direct = f * (1.0 - f) * closed_form_slacks(f, k, phases)[which];
    const double mag = std::max({std::abs(ys[0]), std::abs(ys[1]), std::abs(ys[2]),
                                 std::abs(direct), knowns_scale(k)});
    if (std::abs(q.eval(f) - direct) > 1e-10 * mag)
        throw Error("splitting: closed-form quadratic failed the verification point");

    q.q2 -= tol_abs;
    q.q1 += tol_abs;
    return FractionInterval::from_quadratic(q).without_boundary_points();
}

} // namespace

double knowns_scale(const SplitKnowns& k) {
    return std::max({1.0, std::abs(k.energy), std::abs(k.a), std::abs(k.c),
                     k.a1b, k.a2b, k.a1s, k.a2s});
}

double HalfPlane::norm() const { return std::hypot(nx, ny); }

PhaseAverages phase_averages(const Measurements& m, const PhasePair& phases) {
    require_contrast(phases, "splitting::phase_averages");
    const double k1 = phases.phase1.kappa, k2 = phases.phase2.kappa;
    const double m1 = phases.phase1.mu, m2 = phases.phase2.mu;
    const MandelVec eps = m.grad0.strain();
    const MandelVec sig = m.sigma0;

    PhaseAverages pa;
    pa.m1[0] = (2.0 * k2 * eps.v1 - sig.v1) / (2.0 * (k2 - k1));
    pa.m2[0] = (2.0 * k1 * eps.v1 - sig.v1) / (2.0 * (k1 - k2));
    pa.m1[1] = (2.0 * m2 * eps.v2 - sig.v2) / (2.0 * (m2 - m1));
    pa.m2[1] = (2.0 * m1 * eps.v2 - sig.v2) / (2.0 * (m1 - m2));
    pa.m1[2] = (2.0 * m2 * eps.v3 - sig.v3) / (2.0 * (m2 - m1));
    pa.m2[2] = (2.0 * m1 * eps.v3 - sig.v3) / (2.0 * (m1 - m2));
    return pa;
}

SplitKnowns split_knowns(const Measurements& m, const PhasePair& phases) {
    const PhaseAverages pa = phase_averages(m, phases);
    SplitKnowns k;
    k.a1b = 2.0 * phases.phase1.kappa * pa.m1[0] * pa.m1[0];
    k.a2b = 2.0 * phases.phase2.kappa * pa.m2[0] * pa.m2[0];
    k.a1s = 2.0 * phases.phase1.mu * (pa.m1[1] * pa.m1[1] + pa.m1[2] * pa.m1[2]);
    k.a2s = 2.0 * phases.phase2.mu * (pa.m2[1] * pa.m2[1] + pa.m2[2] * pa.m2[2]);
    k.energy = m.energy;
    k.a = m.a;
    k.c = m.c();
    return k;
}

std::array<Vec2, 5> normals(const PhasePair& phases) {
    require_contrast(phases, "splitting::normals");
    const double k1 = phases.phase1.kappa, k2 = phases.phase2.kappa;
    const double m1 = phases.phase1.mu, m2 = phases.phase2.mu;
    if (!(k1 > k2))
        throw DomainError("splitting::normals: requires kappa1 > kappa2");
    return {Vec2{-1.0, 0.0}, Vec2{0.0, -1.0},
            Vec2{-(k2 + m1), -(k2 + m2)},
            Vec2{k1 + m1, k1 + m2},
            Vec2{-(k1 + m1) * (k2 + m1) / m1, -(k1 + m2) * (k2 + m2) / m2}};
}

std::array<HalfPlane, 5> half_planes(double f1, const SplitKnowns& k, const PhasePair& phases) {
    require_fraction(f1, "splitting::half_planes");
    require_contrast(phases, "splitting::half_planes");
    const Canonical c = canonical(f1, k, phases);
    return canonical_half_planes(c.f1, c.k, c.phases);
}

FeasibilityResult feasible(double f1, const SplitKnowns& k, const PhasePair& phases,
                           double tolerance) {
    require_fraction(f1, "splitting::feasible");
    require_contrast(phases, "splitting::feasible");
    const Canonical c = canonical(f1, k, phases);
    const auto hp = canonical_half_planes(c.f1, c.k, c.phases);
    const double tol = tolerance * knowns_scale(c.k);

    const VertexSearch vs = search_vertices(hp);
    if (!vs.found)
        throw Error("splitting::feasible: no candidate vertices (degenerate constraint set)");

    FeasibilityResult r;
    r.relabeled = c.relabeled;
    r.violation = vs.violation;
    r.feasible = vs.violation <= tol;
    r.witness = vs.best;
    if (r.feasible) {
        for (int i = 0; i < 5; ++i)
            if (std::abs(hp[i].slack(vs.best[0], vs.best[1])) / hp[i].norm() <= tol)
                r.active.push_back(i);
    }

    if (c.relabeled) {
        std::swap(r.witness[0], r.witness[1]);
        for (int& idx : r.active) {
            if (idx == 0) idx = 1;
            else if (idx == 1) idx = 0;
            else if (idx == 2) idx = 3;
            else if (idx == 3) idx = 2;
        }
        std::sort(r.active.begin(), r.active.end());
    }
    return r;
}

Combination combination_coefficients(const Vec2& na, const Vec2& nb, const Vec2& nc) {
    const double det = na[0] * nb[1] - na[1] * nb[0];
    const double scale = std::hypot(na[0], na[1]) * std::hypot(nb[0], nb[1]);
    if (!(std::abs(det) > 1e-12 * scale))
        throw SolverError("splitting::combination_coefficients: parallel normals");

    // nc = alpha*na + beta*nb; the triplet closes with nonnegative weights
    // exactly when alpha <= 0 and beta <= 0.
    const double alpha = (nc[0] * nb[1] - nc[1] * nb[0]) / det;
    const double beta = (na[0] * nc[1] - na[1] * nc[0]) / det;

    Combination comb;
    comb.admissible = alpha <= 0.0 && beta <= 0.0;
    if (comb.admissible) comb.coeff = {-alpha, -beta, 1.0};
    return comb;
}

Combination combination_coefficients(int i, int j, const PhasePair& phases) {
    const auto nu = normals(phases);
    if (i < 1 || i > 5 || j < 1 || j > 5 || i == j)
        throw DomainError("splitting::combination_coefficients: triplet indices out of range");
    return combination_coefficients(nu[i - 1], nu[j - 1], nu[4]);
}

std::array<double, 2> closed_form_slacks(double f1, const SplitKnowns& k,
                                         const PhasePair& phases) {
    require_fraction(f1, "splitting::closed_form_slacks");
    require_contrast(phases, "splitting::closed_form_slacks");
    const Canonical c = canonical(f1, k, phases);
    const auto hp = canonical_half_planes(c.f1, c.k, c.phases);
    const double k1 = c.phases.phase1.kappa, k2 = c.phases.phase2.kappa;
    const double m1 = c.phases.phase1.mu, m2 = c.phases.phase2.mu;
    const double f = c.f1, f2 = 1.0 - f;

    // The combination weights annihilate the (E1s, E2s) dependence, so each
    // slack is the weighted sum of the constraint offsets.
    const auto comb_value = [&hp](int ia, int ib, const Combination& comb) {
        return comb.coeff[0] * hp[ia].offset + comb.coeff[1] * hp[ib].offset +
               comb.coeff[2] * hp[4].offset;
    };

    const Combination c345 = combination_coefficients(3, 4, c.phases);
    if (!c345.admissible)
        throw Error("splitting::closed_form_slacks: (v3,v4,v5) combination rejected");
    const double slack_bulk = comb_value(2, 3, c345);

    // Cross-check against the expanded bulk-combination formula.
    const double printed = 4.0 * c.k.c * k1 * k2 +
                           k1 * k2 * (c.k.a + c.k.energy * (m1 + m2)) / (m1 * m2) -
                           c.k.a1b * k2 * (k1 + m1) * (k1 + m2) / (f * m1 * m2) -
                           c.k.a2b * k1 * (k2 + m1) * (k2 + m2) / (f2 * m1 * m2);
    const double mag = std::max(knowns_scale(c.k) * (1.0 + k1 * k2 / (m1 * m2)) / std::min(f, f2),
                                std::abs(slack_bulk));
    if (std::abs(slack_bulk - printed) > 1e-12 * mag)
        throw Error("splitting::closed_form_slacks: combination form disagrees with expansion");

    const bool mu1_larger = m1 > m2;
    const Combination cmu = combination_coefficients(mu1_larger ? 1 : 2, 4, c.phases);
    if (!cmu.admissible)
        throw Error("splitting::closed_form_slacks: shear combination rejected");
    const double slack_shear = comb_value(mu1_larger ? 0 : 1, 3, cmu);

    return {slack_bulk, slack_shear};
}

FractionInterval invert(const SplitKnowns& k, const PhasePair& phases, double resolution,
                        double tolerance) {
    require_contrast(phases, "splitting::invert");
    if (!(resolution > 0.0 && resolution < 0.5))
        throw DomainError("splitting::invert: resolution must lie in (0, 0.5)");
    const Canonical c = canonical(0.5, k, phases);
    const double tol_abs = tolerance * knowns_scale(c.k);

    const auto is_feasible = [&](double f) {
        const auto hp = canonical_half_planes(f, c.k, c.phases);
        return search_vertices(hp).violation <= tol_abs;
    };

    // Grid of fractions, endpoints pulled just inside (0,1).
    const double f_lo = 1e-9, f_hi = 1.0 - 1e-9;
    std::vector<double> grid;
    grid.push_back(f_lo);
    const int steps = static_cast<int>(std::floor(1.0 / resolution - 0.5));
    for (int s = 1; s <= steps; ++s) grid.push_back(s * resolution);
    grid.push_back(f_hi);

    std::vector<char> ok(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) ok[i] = is_feasible(grid[i]) ? 1 : 0;

    const auto bisect = [&](double a, double b, bool a_ok) {
        // Invariant: status changes between a and b; return the boundary.
        for (int it = 0; it < 80 && b - a > 1e-10; ++it) {
            const double mid = 0.5 * (a + b);
            if (is_feasible(mid) == a_ok)
                a = mid;
            else
                b = mid;
        }
        return 0.5 * (a + b);
    };

    std::vector<std::pair<double, double>> parts;
    std::size_t i = 0;
    while (i < grid.size()) {
        if (!ok[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < grid.size() && ok[j + 1]) ++j;
        double lo = grid[i];
        double hi = grid[j];
        if (i > 0) lo = bisect(grid[i - 1], grid[i], false);
        if (j + 1 < grid.size()) hi = bisect(grid[j], grid[j + 1], true);
        // Snap to the closed endpoints when feasibility persists to the edge.
        if (i == 0) lo = 0.0;
        if (j + 1 == grid.size()) hi = 1.0;
        parts.push_back({lo, hi});
        i = j + 1;
    }
    FractionInterval scan = FractionInterval::from_parts(std::move(parts));

    scan = scan.intersect(closed_form_interval(0, c.k, c.phases, tol_abs));
    scan = scan.intersect(closed_form_interval(1, c.k, c.phases, tol_abs));

    if (c.relabeled) {
        std::vector<std::pair<double, double>> mirrored;
        for (const auto& p : scan.parts()) mirrored.push_back({1.0 - p.second, 1.0 - p.first});
        scan = FractionInterval::from_parts(std::move(mirrored));
    }
    return scan;
}

} // namespace vfb::splitting
