#ifndef YMA_FORMS_HPP
#define YMA_FORMS_HPP

#include <functional>
#include <memory>
#include <vector>

#include "yma/geometry.hpp"
#include "yma/lie.hpp"

namespace yma {

/// Lie-algebra-valued differential form sampled on a grid. Components live in
/// the coordinate frame of the form's chart: (dr, dtheta, dphi) on Sigma,
/// (dR, dtheta, dphi) on SigmaHat. Component order is (r),(theta),(phi) for
/// degree 1 and (r theta),(r phi),(theta phi) for degree 2; all metric factors
/// live in the Hodge star and the norms.
struct LieForm {
    int degree = 0;
    Chart chart = Chart::Sigma;
    GroupTag group = GroupTag::U1;
    std::shared_ptr<const Grid> grid;
    std::vector<double> data;  // [component][node][algebra axis]

    int n_comps() const { return (degree == 0 || degree == 3) ? 1 : 3; }
    int adim() const { return algebra_dim(group); }

    double* comp(int c) { return data.data() + std::size_t(c) * grid->n_nodes() * adim(); }
    const double* comp(int c) const {
        return data.data() + std::size_t(c) * grid->n_nodes() * adim();
    }

    AlgebraElement get(int c, std::size_t node) const {
        AlgebraElement x = AlgebraElement::zero(group);
        const double* p = comp(c) + node * adim();
        for (int a = 0; a < adim(); ++a) x.c[a] = p[a];
        return x;
    }
    void set(int c, std::size_t node, const AlgebraElement& x) {
        double* p = comp(c) + node * adim();
        for (int a = 0; a < adim(); ++a) p[a] = x.c[a];
    }

    double max_abs() const;
};

LieForm make_form(std::shared_ptr<const Grid> grid, int degree, Chart chart, GroupTag group);

/// Samples an analytic component function; `fn(r, theta, phi)` is evaluated at
/// every node of component `c`.
void fill_component(LieForm& w, int c,
                    const std::function<AlgebraElement(double, double, double)>& fn);

LieForm operator+(const LieForm& a, const LieForm& b);
LieForm operator-(const LieForm& a, const LieForm& b);
LieForm operator*(double s, const LieForm& a);

LieForm exterior_derivative(const LieForm& w);

/// Coefficient of the coordinate volume form d(rad)^dtheta^dphi of Tr(w ^ e);
/// degrees must sum to 3 and charts match.
std::vector<double> wedge_trace(const LieForm& w, const LieForm& e);

/// Integral of Tr(w ^ e) over the form's space.
double integrate_wedge_trace(const LieForm& w, const LieForm& e);

enum class Metric { FlatSigma, RoundSigmaHat };

LieForm hodge(const LieForm& w, Metric metric);

LieForm curvature(const LieForm& a);

/// Graded bracket [a ^ w] of a connection 1-form with a k-form, k <= 2.
LieForm bracket_wedge(const LieForm& a, const LieForm& w);

/// D_A w = dw + [A ^ w].
LieForm covariant_derivative(const LieForm& a, const LieForm& w);

double l2_norm_sq(const LieForm& w, Metric metric);

enum class ReweightDirection { ToSigma, ToSigmaHat };

/// Componentwise conformal transport between the charts: pulling back to Sigma
/// multiplies every component by K once per radial index, transporting to
/// SigmaHat divides. Angular-only and scalar components are left invariant.
LieForm conformal_reweight(const LieForm& w, ReweightDirection direction);

enum class DecayTag { PowerLaw, FasterThanAnyPower, NoPowerLaw };

struct DecayProfile {
    DecayTag tag = DecayTag::NoPowerLaw;
    double exponent = 0.0;     // p in |comp| ~ C r^p (PowerLaw only)
    double amplitude = 0.0;    // C
    double residual = 0.0;     // RMS residual of the log-log fit
    double decay_ratio = 1.0;  // sup over outer half / sup over inner half
};

/// Log-log least-squares fit of per-layer amplitudes against radius.
DecayProfile fit_decay_profile(const std::vector<double>& radii,
                               const std::vector<double>& values);

/// Fall-off exponent of one component over the outer radial window
/// (outermost 25% of layers, at least 6).
DecayProfile estimate_falloff(const LieForm& w, int c);

/// Per-layer sup over angles of the coefficient norm of component c.
std::vector<double> radial_profile(const LieForm& w, int c);

/// Indices of the outer fit window (outermost 25% of layers, at least 6).
std::pair<int, int> falloff_window(const Grid& g);

/// Integral of a degree-2 form over the sphere at radial layer j.
AlgebraElement shell_integral(const LieForm& w, int j);

/// Shell integrals extrapolated to the asymptotic boundary rho -> 0.
AlgebraElement boundary_integral(const LieForm& w);

}  // namespace yma

#endif
