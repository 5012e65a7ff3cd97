#include "vfb/translation.hpp"

#include <algorithm>
#include <cmath>

#include "vfb/errors.hpp"

namespace vfb::translation_bounds {

namespace {

void require_fraction(double f1, const char* where) {
    if (!(f1 > 0.0 && f1 < 1.0))
        throw DomainError(std::string(where) + ": f1 must lie in (0,1)");
}

} // namespace

std::pair<double, double> alpha_endpoints(const PhasePair& phases) {
    require_valid(phases.phase1, "translation_bounds::alpha_endpoints");
    require_valid(phases.phase2, "translation_bounds::alpha_endpoints");
    const double mu_max = std::max(phases.phase1.mu, phases.phase2.mu);
    const double kappa_max = std::max(phases.phase1.kappa, phases.phase2.kappa);
    return {-0.5 / mu_max, 0.5 / kappa_max};
}

DiagMat3 translated_tensor(const IsotropicPhase& p, double alpha) {
    return {0.5 * (1.0 / p.kappa - 2.0 * alpha),
            0.5 * (1.0 / p.mu + 2.0 * alpha),
            0.5 * (1.0 / p.mu + 2.0 * alpha)};
}

TranslationContext translation_context(const PhasePair& phases, double alpha) {
    const auto [lo, hi] = alpha_endpoints(phases);
    const double margin = 1e-12 * (hi - lo);
    if (!(alpha >= lo - margin && alpha <= hi + margin))
        throw DomainError("translation_bounds: alpha outside the admissible interval");
    return {phases, alpha, translated_tensor(phases.phase1, alpha),
            translated_tensor(phases.phase2, alpha)};
}

double slack(double f1, const Measurements& m, const PhasePair& phases, double alpha) {
    require_fraction(f1, "translation_bounds::slack");
    require_contrast(phases, "translation_bounds::slack");
    const double f2 = 1.0 - f1;

    const TranslationContext ctx = translation_context(phases, alpha);
    const DiagMat3 s1 = compliance(phases.phase1);
    const DiagMat3 s2 = compliance(phases.phase2);
    const DiagMat3& l1 = ctx.l1;
    const DiagMat3& l2 = ctx.l2;
    const DiagMat3 s_avg = s1.scaled(f1) + s2.scaled(f2);
    const DiagMat3 contrast = s1 - s2; // equals L1 - L2 for every alpha

    const MandelVec sigma0 = m.sigma0;
    const MandelVec eps0 = m.grad0.strain();
    const MandelVec t_sigma0 = translation() * sigma0;
    const MandelVec e0 = eps0 - alpha * t_sigma0;

    // e0 - <L> sigma0 collapses to eps0 - <S> sigma0 (alpha-independent).
    const MandelVec first = eps0 - s_avg * sigma0;
    const MandelVec second =
        (l1.scaled(f2) + l2.scaled(f1)) * e0 - (l1 * l2) * sigma0;

    double rhs = 0.0;
    const double fc[3] = {contrast.d1, contrast.d2, contrast.d3};
    const double fv[3] = {first.v1, first.v2, first.v3};
    const double sv[3] = {second.v1, second.v2, second.v3};
    for (int k = 0; k < 3; ++k) rhs += fv[k] * sv[k] / (fc[k] * fc[k]);
    rhs /= f1 * f2;

    const double lhs = m.energy - sigma0.dot(eps0) - 2.0 * alpha * (m.a - det_mandel(sigma0));
    return lhs - rhs;
}

double alpha_linearity_defect(double f1, const Measurements& m, const PhasePair& phases) {
    const auto [lo, hi] = alpha_endpoints(phases);
    const double mid = 0.5 * (lo + hi);
    return slack(f1, m, phases, mid) -
           0.5 * (slack(f1, m, phases, lo) + slack(f1, m, phases, hi));
}

QuadraticInequality quadratic(const Measurements& m, const PhasePair& phases, double alpha) {
    // f1*f2*slack is an exact quadratic in f1; fit it through three points
    // instead of transcribing the expanded algebra.
    const double fs[3] = {0.25, 0.5, 0.75};
    double ys[3];
    for (int i = 0; i < 3; ++i)
        ys[i] = fs[i] * (1.0 - fs[i]) * slack(fs[i], m, phases, alpha);

    // Solve the 3x3 Vandermonde system directly.
    // y = q2 f^2 + q1 f + q0 at f = 1/4, 1/2, 3/4.
    const double q2 = 8.0 * (ys[0] - 2.0 * ys[1] + ys[2]);
    const double q1 = -2.0 * (5.0 * ys[0] - 8.0 * ys[1] + 3.0 * ys[2]);
    const double q0 = 3.0 * ys[0] - 3.0 * ys[1] + ys[2];
    QuadraticInequality q{q2, q1, q0};

    // Exactness check at a fourth point.
    const double f = 1.0 / 3.0;
    const double direct = f * (1.0 - f) * slack(f, m, phases, alpha);
    const double mag = std::max({std::abs(ys[0]), std::abs(ys[1]), std::abs(ys[2]), 1e-300});
    if (std::abs(q.eval(f) - direct) > 1e-10 * std::max(mag, std::abs(direct)) + 1e-13 * measurement_scale(m))
        throw Error("translation_bounds::quadratic: fitted quadratic failed the verification point");
    return q;
}

FractionInterval invert(const Measurements& m, const PhasePair& phases, double tolerance) {
    require_contrast(phases, "translation_bounds::invert");
    const auto [lo, hi] = alpha_endpoints(phases);
    const double tol = tolerance * measurement_scale(m);

    FractionInterval result = FractionInterval::whole();
    for (double alpha : {lo, hi}) {
        QuadraticInequality q = quadratic(m, phases, alpha);
        // Allowing slack >= -tol means q(f) >= -tol*f*(1-f).
        q.q2 -= tol;
        q.q1 += tol;
        result = result.intersect(FractionInterval::from_quadratic(q));
    }
    // The f1*f2 factor vanishes at the fraction endpoints no matter the
    // slack; isolated endpoint roots are not admissible fractions.
    return result.without_boundary_points();
}

SigmaHat sigma_hat(double f1, const Measurements& m, const PhasePair& phases, double alpha) {
    require_fraction(f1, "translation_bounds::sigma_hat");
    require_contrast(phases, "translation_bounds::sigma_hat");
    const double f2 = 1.0 - f1;

    const TranslationContext ctx = translation_context(phases, alpha);
    const DiagMat3& l1 = ctx.l1;
    const DiagMat3& l2 = ctx.l2;
    const DiagMat3 contrast = compliance(phases.phase1) - compliance(phases.phase2);
    const DiagMat3 inv_contrast{1.0 / contrast.d1, 1.0 / contrast.d2, 1.0 / contrast.d3};

    const MandelVec sigma0 = m.sigma0;
    const MandelVec e0 = m.grad0.strain() - alpha * (translation() * sigma0);

    SigmaHat out;
    out.d = inv_contrast * (l1 * (e0 - l2 * sigma0)) * (1.0 / f1);
    out.e = inv_contrast * (l2 * (e0 - l1 * sigma0)) * (-1.0 / f2);
    return out;
}

} // namespace vfb::translation_bounds
