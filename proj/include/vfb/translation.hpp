#pragma once

#include <utility>

#include "vfb/interval.hpp"
#include "vfb/mandel.hpp"
#include "vfb/measurements.hpp"

// Translation-method bound: the energy inequality obtained by translating the
// compliance with a multiple of the determinant form, evaluated at the two
// admissible endpoint values of the translation parameter, inverted to
// volume-fraction intervals, and its attainability residual.
//
// The slack is linear in alpha, so only the endpoints matter; both endpoint
// inequalities are enforced simultaneously when inverting.

namespace vfb::translation_bounds {

// Default relative tolerance for slack nonnegativity and root cleanup,
// applied against measurement_scale().
inline constexpr double kDefaultTolerance = 1e-9;

// Admissible endpoint values of the translation parameter:
// (-1/(2*mu_max), 1/(2*kappa_max)). L = S - alpha*T stays positive
// semi-definite exactly on this closed interval.
std::pair<double, double> alpha_endpoints(const PhasePair& phases);

// L = S - alpha*T = (1/2) diag(1/kappa - 2a, 1/mu + 2a, 1/mu + 2a).
DiagMat3 translated_tensor(const IsotropicPhase& p, double alpha);

// Phases with a fixed translation parameter and the two translated tensors.
// Constructed through translation_context(), which rejects alpha outside the
// closed admissible interval (where L1, L2 would lose semi-definiteness).
struct TranslationContext {
    PhasePair phases;
    double alpha = 0.0;
    DiagMat3 l1, l2;
};

TranslationContext translation_context(const PhasePair& phases, double alpha);

// Left-hand side minus right-hand side of the translated energy bound at
// volume fraction f1. Nonnegative (to tolerance) whenever the measurements
// derive from a genuine field at that fraction. Only the diagonal contrast
// (S1 - S2) is ever inverted, so singular endpoint tensors are fine.
double slack(double f1, const Measurements& m, const PhasePair& phases, double alpha);

// slack at the alpha midpoint minus the endpoint average; zero in exact
// arithmetic because the alpha^2 coefficient of the bound vanishes.
double alpha_linearity_defect(double f1, const Measurements& m, const PhasePair& phases);

// Coefficients of f1*f2*slack(f1), an exact quadratic. Fitted through
// evaluations at f1 = 1/4, 1/2, 3/4 and verified at f1 = 1/3.
QuadraticInequality quadratic(const Measurements& m, const PhasePair& phases, double alpha);

// Intersection over both endpoint alphas of {f1 in (0,1): quadratic >= 0}.
// An empty result is returned, not thrown: it means the data are
// inconsistent with a two-phase body of these moduli.
FractionInterval invert(const Measurements& m, const PhasePair& phases,
                        double tolerance = kDefaultTolerance);

// The two constant vectors D, E equal to L*sigma_hat on phase 1 and phase 2:
// the attainability condition says the bound is tight exactly when the true
// field satisfies L*sigma = chi1*D + chi2*E.
struct SigmaHat {
    MandelVec d; // phase-1 value of L*sigma_hat
    MandelVec e; // phase-2 value
};

SigmaHat sigma_hat(double f1, const Measurements& m, const PhasePair& phases, double alpha);

} // namespace vfb::translation_bounds
