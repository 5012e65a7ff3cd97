#pragma once

#include <cmath>
#include <string>

#include "vfb/errors.hpp"

// Tensor algebra for 2-D isotropic elasticity in the orthonormal (Mandel)
// basis
//
//   e1 = [1 0; 0 1]/sqrt(2),  e2 = [1 0; 0 -1]/sqrt(2),  e3 = [0 1; 1 0]/sqrt(2),
//
// in which a symmetric 2x2 matrix becomes a 3-vector with Frobenius-norm
// isometry, compliance/stiffness of an isotropic phase are diagonal, and
// det A = (v1^2 - v2^2 - v3^2)/2. General displacement gradients add the
// antisymmetric element e0 = [0 1; -1 0]/sqrt(2) in front (GradVec4).

namespace vfb {

inline constexpr double kSqrt2 = 1.4142135623730950488016887242097;

// Symmetric 2x2 matrix in Cartesian components.
struct SymMat2 {
    double a11 = 0.0;
    double a22 = 0.0;
    double a12 = 0.0;
};

// General 2x2 matrix. Convention: m(i,j) holds d(u_j)/d(x_i) when the matrix
// represents a displacement gradient, i.e. grad(u_1) and grad(u_2) are the
// first and second columns.
struct Mat2 {
    double m11 = 0.0, m12 = 0.0;
    double m21 = 0.0, m22 = 0.0;
};

// Symmetric 2x2 tensor as a 3-vector in the Mandel basis.
struct MandelVec {
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;

    MandelVec operator+(const MandelVec& o) const { return {v1 + o.v1, v2 + o.v2, v3 + o.v3}; }
    MandelVec operator-(const MandelVec& o) const { return {v1 - o.v1, v2 - o.v2, v3 - o.v3}; }
    MandelVec operator*(double s) const { return {v1 * s, v2 * s, v3 * s}; }
    MandelVec operator-() const { return {-v1, -v2, -v3}; }

    double dot(const MandelVec& o) const { return v1 * o.v1 + v2 * o.v2 + v3 * o.v3; }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline MandelVec operator*(double s, const MandelVec& v) { return v * s; }

// General 2x2 displacement gradient as a 4-vector: F0 is the coefficient of
// the antisymmetric basis element, (e1, e2, e3) the Mandel components of the
// symmetric part. Sign convention: F0 = (m12 - m21)/sqrt(2); F0 only ever
// enters through F0^2 and <F0>^2.
struct GradVec4 {
    double f0 = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;

    MandelVec strain() const { return {e1, e2, e3}; }

    GradVec4 operator+(const GradVec4& o) const { return {f0 + o.f0, e1 + o.e1, e2 + o.e2, e3 + o.e3}; }
    GradVec4 operator-(const GradVec4& o) const { return {f0 - o.f0, e1 - o.e1, e2 - o.e2, e3 - o.e3}; }
    GradVec4 operator*(double s) const { return {f0 * s, e1 * s, e2 * s, e3 * s}; }
};

inline GradVec4 operator*(double s, const GradVec4& g) { return g * s; }

// Isotropic phase with 2-D bulk and shear moduli, both > 0. In the Mandel
// basis its stiffness is diag(2*kappa, 2*mu, 2*mu).
struct IsotropicPhase {
    double kappa = 0.0;
    double mu = 0.0;

    bool valid() const {
        return kappa > 0.0 && mu > 0.0 && std::isfinite(kappa) && std::isfinite(mu);
    }
};

struct PhasePair {
    IsotropicPhase phase1;
    IsotropicPhase phase2;

    bool valid() const { return phase1.valid() && phase2.valid(); }

    // True when kappa1 != kappa2 and mu1 != mu2 (what the bound modules need).
    bool has_contrast() const {
        return phase1.kappa != phase2.kappa && phase1.mu != phase2.mu;
    }

    PhasePair swapped() const { return {phase2, phase1}; }
};

inline void require_valid(const IsotropicPhase& p, const char* where) {
    if (!p.valid())
        throw DomainError(std::string(where) + ": nonpositive or non-finite modulus (kappa=" +
                          std::to_string(p.kappa) + ", mu=" + std::to_string(p.mu) + ")");
}

inline void require_contrast(const PhasePair& p, const char* where) {
    if (!p.valid())
        throw DomainError(std::string(where) + ": invalid phase moduli");
    if (p.phase1.kappa == p.phase2.kappa)
        throw ContrastError(std::string(where) + ": kappa1 == kappa2, contrast required");
    if (p.phase1.mu == p.phase2.mu)
        throw ContrastError(std::string(where) + ": mu1 == mu2, contrast required");
}

// Diagonal 3x3 matrix acting on MandelVec. Houses compliance, stiffness, the
// translation matrix T and the translated tensors L = S - alpha*T, all of
// which are diagonal in this basis.
struct DiagMat3 {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    MandelVec operator*(const MandelVec& v) const { return {d1 * v.v1, d2 * v.v2, d3 * v.v3}; }
    DiagMat3 operator*(const DiagMat3& o) const { return {d1 * o.d1, d2 * o.d2, d3 * o.d3}; }
    DiagMat3 operator+(const DiagMat3& o) const { return {d1 + o.d1, d2 + o.d2, d3 + o.d3}; }
    DiagMat3 operator-(const DiagMat3& o) const { return {d1 - o.d1, d2 - o.d2, d3 - o.d3}; }
    DiagMat3 scaled(double s) const { return {d1 * s, d2 * s, d3 * s}; }
};

inline MandelVec to_mandel(const SymMat2& a) {
    return {(a.a11 + a.a22) / kSqrt2, (a.a11 - a.a22) / kSqrt2, 2.0 * a.a12 / kSqrt2};
}

inline SymMat2 from_mandel(const MandelVec& v) {
    return {(v.v1 + v.v2) / kSqrt2, (v.v1 - v.v2) / kSqrt2, v.v3 / kSqrt2};
}

inline GradVec4 to_grad4(const Mat2& m) {
    return {(m.m12 - m.m21) / kSqrt2,
            (m.m11 + m.m22) / kSqrt2,
            (m.m11 - m.m22) / kSqrt2,
            (m.m12 + m.m21) / kSqrt2};
}

inline Mat2 from_grad4(const GradVec4& g) {
    return {(g.e1 + g.e2) / kSqrt2, (g.e3 + g.f0) / kSqrt2,
            (g.e3 - g.f0) / kSqrt2, (g.e1 - g.e2) / kSqrt2};
}

// det of the represented symmetric matrix: (1/2) v . T v.
inline double det_mandel(const MandelVec& v) {
    return 0.5 * (v.v1 * v.v1 - v.v2 * v.v2 - v.v3 * v.v3);
}

// det of a general 2x2 matrix in the 4-component basis.
inline double det_grad4(const GradVec4& g) {
    return 0.5 * (g.f0 * g.f0 + g.e1 * g.e1 - g.e2 * g.e2 - g.e3 * g.e3);
}

// Compliance S = (1/2) diag(1/kappa, 1/mu, 1/mu).
inline DiagMat3 compliance(const IsotropicPhase& p) {
    require_valid(p, "compliance");
    return {0.5 / p.kappa, 0.5 / p.mu, 0.5 / p.mu};
}

// Stiffness diag(2*kappa, 2*mu, 2*mu); inverse of compliance.
inline DiagMat3 stiffness(const IsotropicPhase& p) {
    require_valid(p, "stiffness");
    return {2.0 * p.kappa, 2.0 * p.mu, 2.0 * p.mu};
}

// Translation matrix T = diag(1, -1, -1); (1/2) v.Tv is the determinant form.
inline DiagMat3 translation() { return {1.0, -1.0, -1.0}; }

// Action of a frame rotation by `angle` on Mandel components: the trace
// component is fixed, the deviatoric pair (v2, v3) rotates by twice the angle.
inline MandelVec rotate(const MandelVec& v, double angle) {
    const double c = std::cos(2.0 * angle);
    const double s = std::sin(2.0 * angle);
    return {v.v1, c * v.v2 - s * v.v3, s * v.v2 + c * v.v3};
}

inline GradVec4 rotate(const GradVec4& g, double angle) {
    const MandelVec r = rotate(g.strain(), angle);
    return {g.f0, r.v1, r.v2, r.v3};
}

} // namespace vfb
