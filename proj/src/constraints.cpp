#include "yma/constraints.hpp"

#include <cmath>

namespace yma {

namespace {

// shell integrals of Tr(E ^ xi) extrapolated to rho -> 0
double boundary_pairing(const LieForm& e2, const LieForm& xi) {
    const Grid& g = *e2.grid;
    const int m = g.boundary_layers;
    std::vector<double> rho(m), vals(m);
    for (int i = 0; i < m; ++i) {
        const int j = g.n_r - m + i;
        rho[i] = g.rho[j];
        double acc = 0.0;
        for (int k = 0; k < g.n_theta; ++k) {
            const double wk = g.wx[k] / std::sin(g.theta[k]) * g.wphi;
            for (int l = 0; l < g.n_phi; ++l) {
                const std::size_t node = g.node(j, k, l);
                acc += wk * trace_pair(e2.get(2, node), xi.get(0, node));
            }
        }
        vals[i] = acc;
    }
    return extrapolate_to_zero(rho, vals);
}

double smeared_on(const LieForm& a, const LieForm& e2, const LieForm& xi) {
    return integrate_wedge_trace(covariant_derivative(a, e2), xi);
}

}  // namespace

PhasePoint make_phase_point(LieForm a, LieForm curly_e) {
    if (a.degree != 1 || curly_e.degree != 1)
        throw StructuralError("phase point: both fields must be 1-forms");
    if (a.grid != curly_e.grid || a.group != curly_e.group || a.chart != Chart::Sigma ||
        curly_e.chart != Chart::Sigma)
        throw StructuralError("phase point: fields must share a Sigma-chart grid");
    return PhasePoint{std::move(a), std::move(curly_e)};
}

double energy(const LieForm& alpha, const LieForm& f) {
    if (alpha.chart != Chart::Sigma || f.chart != Chart::Sigma)
        throw StructuralError("energy: defined against the flat metric");
    return 0.5 * l2_norm_sq(alpha, Metric::FlatSigma) + 0.5 * l2_norm_sq(f, Metric::FlatSigma);
}

double lagrangian(const LieForm& a, const LieForm& alpha) {
    if (a.chart != Chart::Sigma || alpha.chart != Chart::Sigma)
        throw StructuralError("lagrangian: defined against the flat metric");
    return 0.5 * l2_norm_sq(alpha, Metric::FlatSigma) -
           0.5 * l2_norm_sq(curvature(a), Metric::FlatSigma);
}

LieForm gauss_constraint(const PhasePoint& p) {
    return covariant_derivative(p.a, p.electric_two_form());
}

double smeared_constraint(const PhasePoint& p, const LieForm& xi) {
    if (xi.degree != 0) throw StructuralError("smeared_constraint: xi must be a 0-form");
    return smeared_on(p.a, p.electric_two_form(), xi);
}

SplitConstraint bulk_boundary_split(const PhasePoint& p, const LieForm& xi) {
    if (xi.degree != 0) throw StructuralError("bulk_boundary_split: xi must be a 0-form");
    const LieForm e2 = p.electric_two_form();
    SplitConstraint s;
    s.total = smeared_on(p.a, e2, xi);
    s.bulk = -integrate_wedge_trace(e2, covariant_derivative(p.a, xi));
    s.boundary = boundary_pairing(e2, xi);
    return s;
}

AlgebraElement electric_flux(const PhasePoint& p, int shell) {
    return shell_integral(p.electric_two_form(), shell);
}

AlgebraElement electric_flux_boundary(const PhasePoint& p) {
    return boundary_integral(p.electric_two_form());
}

AlgebraElement electric_flux_boundary_hat(const PhasePoint& p) {
    // transport curly_e to the compactified chart, take the round Hodge star,
    // then weight the metric-born 2-form by K^-1 so it extends to the boundary
    const LieForm eh = conformal_reweight(p.curly_e, ReweightDirection::ToSigmaHat);
    LieForm e2h = hodge(eh, Metric::RoundSigmaHat);
    const Grid& g = *e2h.grid;
    const int adim = e2h.adim();
    for (int c = 0; c < 3; ++c) {
        double* ptr = e2h.comp(c);
        for (int j = 0; j < g.n_r; ++j) {
            const double f = 1.0 / g.K[j];
            const std::size_t base = g.node(j, 0, 0) * adim;
            const std::size_t cnt = std::size_t(g.n_theta) * g.n_phi * adim;
            for (std::size_t i = 0; i < cnt; ++i) ptr[base + i] *= f;
        }
    }
    return boundary_integral(e2h);
}

double symplectic_eval(const Perturbation& d1, const Perturbation& d2) {
    if (d1.a.degree != 1 || d2.a.degree != 1 || d1.e.degree != 2 || d2.e.degree != 2)
        throw StructuralError("symplectic_eval: needs (1-form, 2-form) pairs");
    return integrate_wedge_trace(d2.a, d1.e) - integrate_wedge_trace(d1.a, d2.e);
}

MomentumResidual momentum_identity_residual(const PhasePoint& p, const LieForm& xi,
                                            const Perturbation& delta, double h) {
    if (h < 1e-6 || h > 1e-2)
        throw DomainError("momentum_identity_residual: step must lie in [1e-6, 1e-2]");
    const LieForm e2 = p.electric_two_form();

    const LieForm ap = p.a + h * delta.a;
    const LieForm am = p.a + (-h) * delta.a;
    const LieForm ep = e2 + h * delta.e;
    const LieForm em = e2 + (-h) * delta.e;
    const double derivative = (smeared_on(ap, ep, xi) - smeared_on(am, em, xi)) / (2.0 * h);

    const auto [xa, xe] = fundamental_vector(xi, p.a, e2);
    const double pairing = symplectic_eval(Perturbation{xa, xe}, delta);

    MomentumResidual out;
    out.residual = derivative - pairing;
    out.boundary_term = boundary_pairing(e2, xi);
    out.boundary_direction = boundary_pairing(delta.e, xi);
    return out;
}

}  // namespace yma
