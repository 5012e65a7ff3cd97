#include "vfb/admissibility.hpp"

#include <algorithm>
#include <cmath>

#include "vfb/errors.hpp"

namespace vfb::pairs {

namespace {

// Constraint names in the caller's phase labeling; index 0..4 follows the
// canonical half-plane order for kappa1 > kappa2.
const char* plane_name(int canonical_index, bool relabeled) {
    static const char* direct[5] = {"splitting:shear1", "splitting:shear2", "splitting:bulk1",
                                    "splitting:bulk2", "splitting:detgrad"};
    static const char* swapped[5] = {"splitting:shear2", "splitting:shear1", "splitting:bulk2",
                                     "splitting:bulk1", "splitting:detgrad"};
    return relabeled ? swapped[canonical_index] : direct[canonical_index];
}

} // namespace

Measurements composite_measurements(const CompositePair& p) {
    Measurements m;
    m.sigma0 = p.sigma0;
    m.grad0 = {0.0, p.eps0.v1, p.eps0.v2, p.eps0.v3};
    m.energy = p.sigma0.dot(p.eps0);
    m.a = det_mandel(p.sigma0);
    m.b = det_mandel(p.eps0);
    m.area = 1.0;
    return m;
}

Verdict admissible(const CompositePair& p, double f1, const PhasePair& phases,
                   double tolerance) {
    if (!(f1 > 0.0 && f1 < 1.0))
        throw DomainError("pairs::admissible: f1 must lie in (0,1)");
    require_contrast(phases, "pairs::admissible");

    const Measurements m = composite_measurements(p);
    const double scale = measurement_scale(m);
    const double tol = tolerance * scale;

    Verdict v;
    const auto [alo, ahi] = translation_bounds::alpha_endpoints(phases);
    const double s_lo = translation_bounds::slack(f1, m, phases, alo);
    const double s_hi = translation_bounds::slack(f1, m, phases, ahi);
    v.constraints.push_back({"translation:alpha_min", s_lo, s_lo < -tol});
    v.constraints.push_back({"translation:alpha_max", s_hi, s_hi < -tol});

    const splitting::SplitKnowns k = splitting::split_knowns(m, phases);
    const splitting::FeasibilityResult fr = splitting::feasible(f1, k, phases, tolerance);
    const auto planes = splitting::half_planes(f1, k, phases);

    // The witness comes back in caller labels; the planes are canonical.
    // Violation flags use the same distance normalization as the feasibility
    // test, so the admissible verdict and the flags cannot disagree.
    const double split_tol = tolerance * splitting::knowns_scale(k);
    splitting::Vec2 w = fr.witness;
    if (fr.relabeled) std::swap(w[0], w[1]);
    for (int i = 0; i < 5; ++i) {
        const double s = planes[i].slack(w[0], w[1]);
        v.constraints.push_back(
            {plane_name(i, fr.relabeled), s, s / planes[i].norm() < -split_tol});
    }

    v.min_slack = v.constraints.front().slack;
    v.admissible = true;
    for (const auto& c : v.constraints) {
        v.min_slack = std::min(v.min_slack, c.slack);
        if (c.violated) v.admissible = false;
    }
    if (!fr.feasible) v.admissible = false;
    return v;
}

std::vector<ScanRow> region_scan(const MandelVec& sigma0, const GridSpec& grid, double f1,
                                 const PhasePair& phases, double tolerance) {
    if (grid.count_i < 1 || grid.count_j < 1)
        throw DomainError("pairs::region_scan: empty grid");
    if (grid.vary_i < 0 || grid.vary_i > 2 || grid.vary_j < 0 || grid.vary_j > 2 ||
        grid.vary_i == grid.vary_j)
        throw DomainError("pairs::region_scan: varying components must be two distinct indices in 0..2");

    const auto value_at = [](double lo, double hi, int count, int k) {
        return count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
    };

    std::vector<ScanRow> rows;
    rows.reserve(static_cast<std::size_t>(grid.count_i) * grid.count_j);
    for (int i = 0; i < grid.count_i; ++i) {
        const double vi = value_at(grid.lo_i, grid.hi_i, grid.count_i, i);
        for (int j = 0; j < grid.count_j; ++j) {
            const double vj = value_at(grid.lo_j, grid.hi_j, grid.count_j, j);
            double comp[3] = {grid.fixed_value, grid.fixed_value, grid.fixed_value};
            comp[grid.vary_i] = vi;
            comp[grid.vary_j] = vj;
            const CompositePair pair{sigma0, {comp[0], comp[1], comp[2]}};
            const Verdict verdict = admissible(pair, f1, phases, tolerance);
            rows.push_back({pair.eps0, verdict.admissible, verdict.min_slack});
        }
    }
    return rows;
}

} // namespace vfb::pairs
