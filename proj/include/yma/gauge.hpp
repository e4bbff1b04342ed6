#ifndef YMA_GAUGE_HPP
#define YMA_GAUGE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "yma/forms.hpp"

namespace yma {

/// G-valued field on the grid. U(1) entries are stored as (cos, sin) pairs and
/// SU(2) entries as unit quaternions so that finite differences never cross a
/// branch cut.
struct GaugeMap {
    GroupTag group = GroupTag::U1;
    std::shared_ptr<const Grid> grid;
    std::vector<double> data;  // [node][dim], dim = 2 (U1) or 4 (SU2)

    int dim() const { return group == GroupTag::U1 ? 2 : 4; }
    GroupElement get(std::size_t node) const;
    void set(std::size_t node, const GroupElement& g);
};

GaugeMap make_gauge_map(std::shared_ptr<const Grid> grid, GroupTag group);
void fill_gauge_map(GaugeMap& g,
                    const std::function<GroupElement(double, double, double)>& fn);

GaugeMap pointwise_multiply(const GaugeMap& g, const GaugeMap& h);
GaugeMap pointwise_inverse(const GaugeMap& g);
GaugeMap multiply_constant(const GroupElement& c, const GaugeMap& g);

/// exp(xi) nodewise for a 0-form parameter.
GaugeMap pointwise_exp(const LieForm& xi);

/// Maurer-Cartan form g^-1 dg as a degree-1 form on the map's grid.
LieForm maurer_cartan(const GaugeMap& g);

/// Componentwise Ad_{g^-1} transport of any form (the conjugation part of the
/// gauge action).
LieForm adjoint_transport(const GaugeMap& g, const LieForm& w);

/// A -> g^-1 A g + g^-1 dg.
LieForm act_on_connection(const GaugeMap& g, const LieForm& a);

/// E -> g^-1 E g.
LieForm act_on_electric(const GaugeMap& g, const LieForm& e);

/// Pointwise [w_I, xi] of any form with a 0-form.
LieForm pointwise_bracket(const LieForm& w, const LieForm& xi);

/// (X_xi(A), X_xi(E)) = (D_A xi, [E, xi]).
std::pair<LieForm, LieForm> fundamental_vector(const LieForm& xi, const LieForm& a,
                                               const LieForm& e);

enum class FallOffKind { Formal, BoundaryPreserving, AsymptoticallyTrivial, NotClassifiable };

struct FallOffClass {
    FallOffKind kind = FallOffKind::Formal;
    GroupElement boundary_constant;
    DecayProfile rate;        // fall-off of log(g c^-1) over the outer window
    double angular_spread = 0.0;    // max distance of per-ray limits from the reference ray
    double limit_stability = 0.0;   // disagreement between two extrapolation windows
};

std::string falloff_kind_name(FallOffKind k);

/// Classification thresholds (kept in one place; see the module docs).
struct ClassifyOptions {
    double angular_tol = 1e-3;      // per-ray limits must agree this tightly
    double stability_tol = 0.05;    // two-window extrapolation agreement
    double identity_tol = 1e-3;     // boundary constant within this of identity
    double rate_margin = 0.01;      // epsilon_0: need exponent <= -0.5 - epsilon_0
};

FallOffClass classify(const GaugeMap& g, const ClassifyOptions& opt = {});

struct RateLemmaReport {
    bool precondition_ok = false;
    std::size_t offending_node = 0;   // first node violating the derivative bound
    double precondition_worst = 0.0;  // worst |d_r xi| / (C r^{-3/2-eps})
    bool limits_exist = false;
    bool limits_uniform = false;
    bool bound_ok = false;
    double bound_worst = 0.0;         // worst |xi - c| / (2 C r^{-1/2-eps})
    AlgebraElement limit;
    bool passed = false;
};

/// Checks the fundamental-theorem-of-calculus rate bound: if |d_r xi| <=
/// C r^{-3/2-eps} then xi has an angle-independent limit c with
/// |xi - c| <= 2 C r^{-1/2-eps}. Throws nothing; precondition failures are
/// reported with the offending node.
RateLemmaReport rate_lemma_check(const LieForm& xi, double epsilon, double C);

using RegionMask = std::vector<std::uint8_t>;

struct LocalizeResult {
    bool localizable = false;
    std::optional<LieForm> localized;  // xi' with xi' = xi on U, 0 on V
};

/// Localizability test: a parameter vanishing at the asymptotic boundary can be
/// matched on U and switched off on V via a smooth transition function; a
/// parameter with nonzero boundary limit cannot when U reaches the boundary.
LocalizeResult is_localizable(const LieForm& xi, const RegionMask& u, const RegionMask& v);

struct WindingResult {
    int value = 0;
    double raw = 0.0;
    double confidence = 0.0;  // |raw - value|, distance to the nearest integer
};

/// Degree of an SU(2) map after one-point compactification, from the
/// Maurer-Cartan volume integral. Only meaningful for boundary-preserving maps.
WindingResult winding_number(const GaugeMap& g, const GroupElement& boundary_constant);

struct QuotientRep {
    GroupElement boundary_constant;
    int winding = 0;
};

/// Representative of the physical quotient class: (constant at infinity,
/// homotopy winding). Throws on maps that do not preserve the boundary.
QuotientRep quotient_representative(const GaugeMap& g);

}  // namespace yma

#endif
