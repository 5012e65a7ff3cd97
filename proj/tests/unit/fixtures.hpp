#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "vfb/boundary.hpp"
#include "vfb/fem.hpp"
#include "vfb/laminate.hpp"
#include "vfb/mandel.hpp"
#include "vfb/measurements.hpp"

// Shared fixtures: the P0 phase pair and the L0 laminate (theta = 0,
// f1 = 1/2, identity average strain), whose exact fields follow from the 2x2
// interface system:
//   lambda = (8/9, 0)
//   eps1 = diag(5/9, 1),  eps2 = diag(13/9, 1)
//   sig1 = diag(8/3, 32/9), sig2 = diag(8/3, 20/9)
//   sigma0 = diag(8/3, 26/9), energy = 50/9, a = 208/27, b = c = 1.

namespace fixtures {

inline vfb::PhasePair p0() { return {{2.0, 1.0}, {1.0, 0.5}}; }

inline vfb::laminate::Laminate l0() { return {0.0, 0.5, p0()}; }

inline vfb::GradVec4 identity_strain() { return {0.0, vfb::kSqrt2, 0.0, 0.0}; }

inline vfb::Measurements l0_measurements() {
    vfb::Measurements m;
    m.sigma0 = vfb::to_mandel({8.0 / 3.0, 26.0 / 9.0, 0.0});
    m.grad0 = {0.0, vfb::kSqrt2, 0.0, 0.0};
    m.energy = 50.0 / 9.0;
    m.a = 208.0 / 27.0;
    m.b = 1.0;
    m.area = 1.0;
    return m;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
};

// Moduli log-uniform in [0.5, 5] with at least 5% relative contrast in both
// moduli.
inline vfb::PhasePair random_phases(Rng& rng) {
    while (true) {
        vfb::PhasePair p{{rng.log_uniform(0.5, 5.0), rng.log_uniform(0.5, 5.0)},
                         {rng.log_uniform(0.5, 5.0), rng.log_uniform(0.5, 5.0)}};
        const double dk = std::abs(p.phase1.kappa - p.phase2.kappa) /
                          (p.phase1.kappa + p.phase2.kappa);
        const double dm = std::abs(p.phase1.mu - p.phase2.mu) / (p.phase1.mu + p.phase2.mu);
        if (dk > 0.05 && dm > 0.05) return p;
    }
}

inline vfb::GradVec4 random_loading(Rng& rng, bool with_rotation = true) {
    return {with_rotation ? rng.uniform(-1.0, 1.0) : 0.0, rng.uniform(-1.0, 1.0),
            rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
}

struct RandomLaminate {
    vfb::laminate::Laminate lam;
    vfb::GradVec4 loading;
    vfb::laminate::Fields fields;
    vfb::Measurements meas;
};

inline RandomLaminate random_laminate(Rng& rng) {
    RandomLaminate r;
    r.lam = {rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.1, 0.9), random_phases(rng)};
    r.loading = random_loading(rng);
    r.fields = vfb::laminate::solve(r.lam, r.loading);
    r.meas = vfb::laminate::measurements_of(r.fields, r.lam.f1);
    return r;
}

// ---------------------------------------------------------------------------
// Synthetic boundary traces on the unit square.
//
// Corner nodes are split into two nodes offset by `corner_eps` along each
// edge, each carrying its own edge's one-sided data; with that, the trapezoid
// rule sees only per-edge-smooth integrands and the corner ambiguity costs
// O(corner_eps) instead of O(h^2).

struct FieldSample {
    // Traction components for an outward normal (nx, ny) at (x, y) and the
    // displacement there.
    double t1, t2, u1, u2;
};

template <typename Field>
inline vfb::boundary::BoundaryTrace square_trace(const Field& field, int interior_per_edge,
                                                 double corner_eps) {
    vfb::boundary::BoundaryTrace trace;
    const double e = corner_eps;
    const double normals[4][2] = {{0.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
    for (int edge = 0; edge < 4; ++edge) {
        const int m = interior_per_edge;
        for (int k = 0; k <= m + 1; ++k) {
            double along = static_cast<double>(k) / (m + 1);
            if (k == 0) along = e;
            if (k == m + 1) along = 1.0 - e;
            double x, y;
            switch (edge) {
                case 0: x = along; y = 0.0; break;
                case 1: x = 1.0; y = along; break;
                case 2: x = 1.0 - along; y = 1.0; break;
                default: x = 0.0; y = 1.0 - along; break;
            }
            const FieldSample s = field(x, y, normals[edge][0], normals[edge][1]);
            trace.nodes.push_back({x, y, s.t1, s.t2, s.u1, s.u2});
        }
    }
    return trace;
}

// Uniform stress and affine displacement: sigma constant, u = E x (E given as
// a symmetric strain plus optional rotation).
struct UniformField {
    vfb::SymMat2 sigma;
    vfb::Mat2 grad; // displacement gradient, column convention

    FieldSample operator()(double x, double y, double nx, double ny) const {
        return {sigma.a11 * nx + sigma.a12 * ny, sigma.a12 * nx + sigma.a22 * ny,
                grad.m11 * x + grad.m21 * y, grad.m12 * x + grad.m22 * y};
    }
};

// Smooth equilibrated polynomial field without symmetry accidents, so every
// null-Lagrangian carries a genuine quadrature error:
//   sigma = [[12y^2, -3x^2], [-3x^2, 12x^2 + 6xy]]   (divergence-free),
//   u = (x^2 y + y^3/3, x^3/3 + y^3).
// Exact volume averages on the unit square:
//   sigma0 = [[4, -1], [-1, 11/2]], <grad u> = [[1/2, 1/3], [2/3, 1]],
//   energy = 463/60, a = 116/5, b = 79/180.
struct PolyField {
    FieldSample operator()(double x, double y, double nx, double ny) const {
        const double s11 = 12.0 * y * y, s12 = -3.0 * x * x, s22 = 12.0 * x * x + 6.0 * x * y;
        return {s11 * nx + s12 * ny, s12 * nx + s22 * ny,
                x * x * y + y * y * y / 3.0, x * x * x / 3.0 + y * y * y};
    }
};

inline vfb::Measurements poly_exact() {
    vfb::Measurements m;
    m.sigma0 = vfb::to_mandel({4.0, 5.5, -1.0});
    m.grad0 = vfb::to_grad4({0.5, 1.0 / 3.0, 2.0 / 3.0, 1.0});
    m.energy = 463.0 / 60.0;
    m.a = 116.0 / 5.0;
    m.b = 79.0 / 180.0;
    m.area = 1.0;
    return m;
}

// The L0 laminate realized as a two-layer body on the unit square (phase 1 on
// x < 1/2): sigma = diag(8/3, 32/9) then diag(8/3, 20/9), u continuous and
// piecewise linear. Tractions are piecewise constant and u piecewise linear,
// so the trapezoid rule is exact; the interface crossings at (1/2, 0) and
// (1/2, 1) carry the average of the one-sided tractions and sit between
// equal-length segments.
struct L0BodyField {
    FieldSample operator()(double x, double y, double nx, double ny) const {
        double s22;
        if (x < 0.5)
            s22 = 32.0 / 9.0;
        else if (x > 0.5)
            s22 = 20.0 / 9.0;
        else
            s22 = 26.0 / 9.0;
        const double s11 = 8.0 / 3.0;
        const double u1 = (x <= 0.5) ? 5.0 * x / 9.0 : 5.0 / 18.0 + 13.0 * (x - 0.5) / 9.0;
        return {s11 * nx, s22 * ny, u1, y};
    }
};

inline vfb::boundary::BoundaryTrace l0_trace(int interior_per_half_edge = 4,
                                             double corner_eps = 1e-13) {
    // 2j interior spans per edge put a node exactly at x = 1/2.
    return square_trace(L0BodyField{}, 2 * interior_per_half_edge - 1, corner_eps);
}

// Exact Dirichlet data of a theta = 0 laminate realized on a column-striped
// pixel grid: u is the per-column integral of the piecewise-constant
// gradient. Imposing this trace makes the discrete solution coincide with the
// laminate field.
inline vfb::fem::BoundaryDisplacement laminate_boundary_displacement(
    const vfb::fem::PixelGeometry& geom, const vfb::laminate::Fields& fields) {
    const vfb::Mat2 m1 = vfb::from_grad4(fields.grad1);
    const vfb::Mat2 m2 = vfb::from_grad4(fields.grad2);
    const int n = geom.n;
    const double h = 1.0 / n;

    // Cumulative integral of the first gradient row at column boundaries.
    std::vector<std::array<double, 2>> v(n + 1, {0.0, 0.0});
    for (int ix = 0; ix < n; ++ix) {
        const bool p1 = geom.phase[geom.cell(ix, 0)] == 1;
        v[ix + 1][0] = v[ix][0] + h * (p1 ? m1.m11 : m2.m11);
        v[ix + 1][1] = v[ix][1] + h * (p1 ? m1.m12 : m2.m12);
    }

    return [v, m1, m2, geom, h, n](double x, double y) {
        const int col = std::clamp(static_cast<int>(std::floor(x * n)), 0, n - 1);
        const bool p1 = geom.phase[col] == 1;
        const double dx = x - col * h;
        return std::array<double, 2>{
            v[col][0] + dx * (p1 ? m1.m11 : m2.m11) + m1.m21 * y,
            v[col][1] + dx * (p1 ? m1.m12 : m2.m12) + m1.m22 * y};
    };
}

} // namespace fixtures
