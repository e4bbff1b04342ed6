#ifndef YMA_CONSTRAINTS_HPP
#define YMA_CONSTRAINTS_HPP

#include "yma/gauge.hpp"

namespace yma {

/// Point of the phase space: connection A and conjugate momentum. Canonical
/// storage for the momentum is the 1-form curly_e; the 2-form E = *curly_e is
/// produced on demand through the flat Hodge star.
struct PhasePoint {
    LieForm a;        // degree 1, Sigma chart
    LieForm curly_e;  // degree 1, Sigma chart

    LieForm electric_two_form() const { return hodge(curly_e, Metric::FlatSigma); }
};

PhasePoint make_phase_point(LieForm a, LieForm curly_e);

/// 1/2 |alpha|^2 + 1/2 |F|^2 against the flat metric.
double energy(const LieForm& alpha, const LieForm& f);

/// 1/2 |alpha|^2 - 1/2 |F(A)|^2.
double lagrangian(const LieForm& a, const LieForm& alpha);

/// D_A E = dE + [A ^ E] as a 3-form.
LieForm gauss_constraint(const PhasePoint& p);

/// <mu, xi> = integral of Tr(D_A E ^ xi).
double smeared_constraint(const PhasePoint& p, const LieForm& xi);

struct SplitConstraint {
    double bulk = 0.0;      // -int Tr(E ^ D_A xi)
    double boundary = 0.0;  // shell integral of Tr(E xi), extrapolated to rho -> 0
    double total = 0.0;     // smeared constraint
};

SplitConstraint bulk_boundary_split(const PhasePoint& p, const LieForm& xi);

/// Electric flux through the sphere at radial layer `shell`.
AlgebraElement electric_flux(const PhasePoint& p, int shell);
/// Flux extrapolated to the asymptotic boundary (flat-space route).
AlgebraElement electric_flux_boundary(const PhasePoint& p);
/// Flux computed on the compactified chart with the K^-1 weighting of the
/// electric 2-form, extrapolated to the boundary sphere.
AlgebraElement electric_flux_boundary_hat(const PhasePoint& p);

/// Tangent vector to phase space.
struct Perturbation {
    LieForm a;  // degree 1
    LieForm e;  // degree 2
};

/// Canonical symplectic form evaluated on two tangent vectors. Oriented so the
/// momentum map identity reads d<mu,xi>(delta) = omega(X_xi, delta) + flux term.
double symplectic_eval(const Perturbation& d1, const Perturbation& d2);

struct MomentumResidual {
    double residual = 0.0;           // d<mu,xi>(delta) - omega(X_xi, delta)
    double boundary_term = 0.0;      // shell-extrapolated Tr(E xi) at p
    double boundary_direction = 0.0; // same integral with delta_E in place of E
};

/// Verifies the momentum map identity by a central field-space difference. For
/// boundary-vanishing xi the residual tends to zero; for a constant at infinity
/// it reproduces the smeared flux of delta_E.
MomentumResidual momentum_identity_residual(const PhasePoint& p, const LieForm& xi,
                                            const Perturbation& delta, double h);

}  // namespace yma

#endif
