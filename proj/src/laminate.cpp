#include "vfb/laminate.hpp"

#include <algorithm>
#include <cmath>

#include "vfb/errors.hpp"

namespace vfb::laminate {

namespace {

// Traction (sigma . n) of a Mandel stress across a unit normal.
std::array<double, 2> traction(const MandelVec& stress, const std::array<double, 2>& n) {
    const SymMat2 s = from_mandel(stress);
    return {s.a11 * n[0] + s.a12 * n[1], s.a12 * n[0] + s.a22 * n[1]};
}

struct PhaseGradients {
    Mat2 m1, m2;
};

// Per-phase gradients for a given jump vector: M_i = Mbar -/+ f-weighted n x lambda
// (column convention, so the jump enters as n_i * lambda_j).
PhaseGradients phase_gradients(const Mat2& mbar, const std::array<double, 2>& n,
                               const std::array<double, 2>& lambda, double f1) {
    const double f2 = 1.0 - f1;
    Mat2 jump{n[0] * lambda[0], n[0] * lambda[1], n[1] * lambda[0], n[1] * lambda[1]};
    Mat2 m1{mbar.m11 - f2 * jump.m11, mbar.m12 - f2 * jump.m12,
            mbar.m21 - f2 * jump.m21, mbar.m22 - f2 * jump.m22};
    Mat2 m2{mbar.m11 + f1 * jump.m11, mbar.m12 + f1 * jump.m12,
            mbar.m21 + f1 * jump.m21, mbar.m22 + f1 * jump.m22};
    return {m1, m2};
}

// Interface traction mismatch (sigma2 - sigma1).n as a function of lambda.
std::array<double, 2> mismatch(const Laminate& lam, const Mat2& mbar,
                               const std::array<double, 2>& n,
                               const std::array<double, 2>& lambda) {
    const auto g = phase_gradients(mbar, n, lambda, lam.f1);
    const MandelVec s1 = stiffness(lam.phases.phase1) * to_grad4(g.m1).strain();
    const MandelVec s2 = stiffness(lam.phases.phase2) * to_grad4(g.m2).strain();
    const auto t1 = traction(s1, n);
    const auto t2 = traction(s2, n);
    return {t2[0] - t1[0], t2[1] - t1[1]};
}

} // namespace

Fields solve(const Laminate& lam, const GradVec4& avg_strain) {
    require_valid(lam.phases.phase1, "laminate::solve");
    require_valid(lam.phases.phase2, "laminate::solve");
    if (!(lam.f1 > 0.0 && lam.f1 < 1.0))
        throw DomainError("laminate::solve: f1 must lie in (0,1)");

    const std::array<double, 2> n{std::cos(lam.theta), std::sin(lam.theta)};
    const Mat2 mbar = from_grad4(avg_strain);

    // mismatch(lambda) = r0 + A.lambda; solve A.lambda = -r0.
    const auto r0 = mismatch(lam, mbar, n, {0.0, 0.0});
    const auto c1 = mismatch(lam, mbar, n, {1.0, 0.0});
    const auto c2 = mismatch(lam, mbar, n, {0.0, 1.0});
    const double a11 = c1[0] - r0[0], a12 = c2[0] - r0[0];
    const double a21 = c1[1] - r0[1], a22 = c2[1] - r0[1];
    const double det = a11 * a22 - a12 * a21;
    const double scale = std::abs(a11) + std::abs(a12) + std::abs(a21) + std::abs(a22);
    if (!(std::abs(det) > 1e-14 * scale * scale))
        throw SolverError("laminate::solve: singular interface system");

    const std::array<double, 2> lambda{(-r0[0] * a22 + r0[1] * a12) / det,
                                       (-r0[1] * a11 + r0[0] * a21) / det};

    const auto g = phase_gradients(mbar, n, lambda, lam.f1);
    Fields f;
    f.grad1 = to_grad4(g.m1);
    f.grad2 = to_grad4(g.m2);
    f.strain1 = f.grad1.strain();
    f.strain2 = f.grad2.strain();
    f.stress1 = stiffness(lam.phases.phase1) * f.strain1;
    f.stress2 = stiffness(lam.phases.phase2) * f.strain2;
    f.jump = lambda;
    f.normal = n;
    return f;
}

Measurements measurements_of(const Fields& fields, double f1) {
    if (!(f1 > 0.0 && f1 < 1.0))
        throw DomainError("laminate::measurements_of: f1 must lie in (0,1)");
    const double f2 = 1.0 - f1;

    Measurements m;
    m.sigma0 = f1 * fields.stress1 + f2 * fields.stress2;
    m.grad0 = f1 * fields.grad1 + f2 * fields.grad2;
    m.energy = f1 * fields.stress1.dot(fields.strain1) + f2 * fields.stress2.dot(fields.strain2);
    m.a = f1 * det_mandel(fields.stress1) + f2 * det_mandel(fields.stress2);
    m.b = f1 * det_grad4(fields.grad1) + f2 * det_grad4(fields.grad2);
    m.area = 1.0;

    // A laminate is a periodic composite, so the energy and both determinants
    // must collapse onto the averages; failing this means the interface
    // solve went wrong.
    const double scale = std::max({1.0, std::abs(m.energy), std::abs(m.a), std::abs(m.b)});
    const double defect = std::abs(m.energy - m.sigma0.dot(m.grad0.strain())) +
                          std::abs(m.a - det_mandel(m.sigma0)) +
                          std::abs(m.b - det_grad4(m.grad0));
    if (defect > 1e-8 * scale)
        throw Error("laminate::measurements_of: composite identities violated");
    return m;
}

SymMat3 effective_compliance(const Laminate& lam) {
    // Columns of the effective stiffness: average stress under unit average
    // strains along the three basis directions.
    MandelVec cols[3];
    const GradVec4 unit[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (int k = 0; k < 3; ++k) {
        const Fields f = solve(lam, unit[k]);
        const Measurements m = measurements_of(f, lam.f1);
        cols[k] = m.sigma0;
    }
    const double c[3][3] = {{cols[0].v1, cols[1].v1, cols[2].v1},
                            {cols[0].v2, cols[1].v2, cols[2].v2},
                            {cols[0].v3, cols[1].v3, cols[2].v3}};

    const double det = c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) -
                       c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0]) +
                       c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0]);
    double mag = 0.0;
    for (const auto& row : c)
        for (double v : row) mag = std::max(mag, std::abs(v));
    if (!(std::abs(det) > 1e-14 * mag * mag * mag))
        throw SolverError("laminate::effective_compliance: singular assembly");

    SymMat3 s;
    s.m[0][0] = (c[1][1] * c[2][2] - c[1][2] * c[2][1]) / det;
    s.m[0][1] = (c[0][2] * c[2][1] - c[0][1] * c[2][2]) / det;
    s.m[0][2] = (c[0][1] * c[1][2] - c[0][2] * c[1][1]) / det;
    s.m[1][0] = (c[1][2] * c[2][0] - c[1][0] * c[2][2]) / det;
    s.m[1][1] = (c[0][0] * c[2][2] - c[0][2] * c[2][0]) / det;
    s.m[1][2] = (c[0][2] * c[1][0] - c[0][0] * c[1][2]) / det;
    s.m[2][0] = (c[1][0] * c[2][1] - c[1][1] * c[2][0]) / det;
    s.m[2][1] = (c[0][1] * c[2][0] - c[0][0] * c[2][1]) / det;
    s.m[2][2] = (c[0][0] * c[1][1] - c[0][1] * c[1][0]) / det;
    return s;
}

} // namespace vfb::laminate
