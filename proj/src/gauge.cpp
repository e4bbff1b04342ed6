#include "yma/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace yma {

namespace {

constexpr double kPi = 3.14159265358979323846;

double quintic_smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0);
}

GroupElement normalize_raw(GroupTag tag, const double* p) {
    if (tag == GroupTag::U1) return GroupElement::u1(std::atan2(p[1], p[0]));
    return GroupElement::su2(p[0], p[1], p[2], p[3]);
}

// Extrapolates the raw group data of one ray to rho -> 0 over layers [lo, lo+m).
GroupElement extrapolate_ray(const GaugeMap& g, int k, int l, int lo, int m) {
    const Grid& gr = *g.grid;
    const int dim = g.dim();
    std::vector<double> rho(m);
    std::vector<double> vals(m);
    double raw[4] = {0, 0, 0, 0};
    for (int d = 0; d < dim; ++d) {
        for (int i = 0; i < m; ++i) {
            const int j = lo + i;
            rho[i] = gr.rho[j];
            vals[i] = g.data[gr.node(j, k, l) * dim + d];
        }
        raw[d] = extrapolate_to_zero(rho, vals);
    }
    return normalize_raw(g.group, raw);
}

GroupElement average_constants(GroupTag tag, const std::vector<GroupElement>& cs) {
    double acc[4] = {0, 0, 0, 0};
    for (const auto& c : cs) {
        if (tag == GroupTag::U1) {
            acc[0] += std::cos(c.angle);
            acc[1] += std::sin(c.angle);
        } else {
            for (int d = 0; d < 4; ++d) acc[d] += c.q[d];
        }
    }
    return normalize_raw(tag, acc);
}

}  // namespace

GroupElement GaugeMap::get(std::size_t node) const {
    return normalize_raw(group, data.data() + node * dim());
}

void GaugeMap::set(std::size_t node, const GroupElement& g) {
    double* p = data.data() + node * dim();
    if (group == GroupTag::U1) {
        p[0] = std::cos(g.angle);
        p[1] = std::sin(g.angle);
    } else {
        for (int d = 0; d < 4; ++d) p[d] = g.q[d];
    }
}

GaugeMap make_gauge_map(std::shared_ptr<const Grid> grid, GroupTag group) {
    GaugeMap g;
    g.group = group;
    g.grid = std::move(grid);
    g.data.assign(g.grid->n_nodes() * g.dim(), 0.0);
    const GroupElement e = GroupElement::identity(group);
    for (std::size_t i = 0; i < g.grid->n_nodes(); ++i) g.set(i, e);
    return g;
}

void fill_gauge_map(GaugeMap& g, const std::function<GroupElement(double, double, double)>& fn) {
    const Grid& gr = *g.grid;
    for (int j = 0; j < gr.n_r; ++j)
        for (int k = 0; k < gr.n_theta; ++k)
            for (int l = 0; l < gr.n_phi; ++l)
                g.set(gr.node(j, k, l), fn(gr.r[j], gr.theta[k], gr.phi[l]));
}

GaugeMap pointwise_multiply(const GaugeMap& g, const GaugeMap& h) {
    if (g.group != h.group || g.grid != h.grid)
        throw StructuralError("gauge: map mismatch in pointwise_multiply");
    GaugeMap out = g;
    for (std::size_t i = 0; i < g.grid->n_nodes(); ++i)
        out.set(i, multiply(g.get(i), h.get(i)));
    return out;
}

GaugeMap pointwise_inverse(const GaugeMap& g) {
    GaugeMap out = g;
    for (std::size_t i = 0; i < g.grid->n_nodes(); ++i) out.set(i, inverse(g.get(i)));
    return out;
}

GaugeMap multiply_constant(const GroupElement& c, const GaugeMap& g) {
    if (c.tag != g.group) throw StructuralError("gauge: tag mismatch in multiply_constant");
    GaugeMap out = g;
    for (std::size_t i = 0; i < g.grid->n_nodes(); ++i) out.set(i, multiply(c, g.get(i)));
    return out;
}

GaugeMap pointwise_exp(const LieForm& xi) {
    if (xi.degree != 0) throw StructuralError("gauge: pointwise_exp needs a 0-form");
    GaugeMap out = make_gauge_map(xi.grid, xi.group);
    for (std::size_t i = 0; i < xi.grid->n_nodes(); ++i) out.set(i, exp(xi.get(0, i)));
    return out;
}

LieForm maurer_cartan(const GaugeMap& g) {
    const Grid& gr = *g.grid;
    const int dim = g.dim();
    const std::size_t n = gr.n_nodes();
    LieForm out = make_form(g.grid, 1, Chart::Sigma, g.group);

    // FD of every raw component along each axis, then project to the algebra.
    std::vector<double> der(n * dim);
    for (int axis = 0; axis < 3; ++axis) {
        for (int d = 0; d < dim; ++d) {
            const double* in = g.data.data() + d;
            double* o = der.data() + d;
            if (axis == 0)
                gr.deriv_R(in, o, dim);
            else if (axis == 1)
                gr.deriv_theta(in, o, dim);
            else
                gr.deriv_phi(in, o, dim);
        }
        for (int j = 0; j < gr.n_r; ++j) {
            const double chain = axis == 0 ? gr.K[j] : 1.0;  // d/dr = K d/dR
            for (int k = 0; k < gr.n_theta; ++k)
                for (int l = 0; l < gr.n_phi; ++l) {
                    const std::size_t i = gr.node(j, k, l);
                    const double* q = g.data.data() + i * dim;
                    const double* dq = der.data() + i * dim;
                    AlgebraElement x = AlgebraElement::zero(g.group);
                    if (g.group == GroupTag::U1) {
                        // (cos,sin): Im(conj(g) dg) = c ds - s dc
                        x.c[0] = chain * (q[0] * dq[1] - q[1] * dq[0]);
                    } else {
                        // imag(conj(q) dq) = w dv - dw v - v x dv, coeffs doubled
                        const double w = q[0], vx = q[1], vy = q[2], vz = q[3];
                        const double dw = dq[0], ux = dq[1], uy = dq[2], uz = dq[3];
                        x.c[0] = 2.0 * chain * (w * ux - dw * vx - (vy * uz - vz * uy));
                        x.c[1] = 2.0 * chain * (w * uy - dw * vy - (vz * ux - vx * uz));
                        x.c[2] = 2.0 * chain * (w * uz - dw * vz - (vx * uy - vy * ux));
                    }
                    out.set(axis, i, x);
                }
        }
    }
    return out;
}

LieForm adjoint_transport(const GaugeMap& g, const LieForm& w) {
    if (g.group != w.group || g.grid != w.grid)
        throw StructuralError("gauge: map/form mismatch in adjoint_transport");
    if (g.group == GroupTag::U1) return w;
    LieForm out = w;
    for (std::size_t i = 0; i < g.grid->n_nodes(); ++i) {
        const GroupElement gi = inverse(g.get(i));
        for (int c = 0; c < w.n_comps(); ++c) out.set(c, i, adjoint(gi, w.get(c, i)));
    }
    return out;
}

LieForm act_on_connection(const GaugeMap& g, const LieForm& a) {
    if (a.degree != 1) throw StructuralError("gauge: act_on_connection needs a 1-form");
    return adjoint_transport(g, a) + maurer_cartan(g);
}

LieForm act_on_electric(const GaugeMap& g, const LieForm& e) {
    return adjoint_transport(g, e);
}

LieForm pointwise_bracket(const LieForm& w, const LieForm& xi) {
    if (xi.degree != 0) throw StructuralError("gauge: pointwise_bracket needs a 0-form second");
    if (w.group != xi.group || w.grid != xi.grid)
        throw StructuralError("gauge: mismatch in pointwise_bracket");
    LieForm out = make_form(w.grid, w.degree, w.chart, w.group);
    if (w.group == GroupTag::U1) return out;
    for (std::size_t i = 0; i < w.grid->n_nodes(); ++i) {
        const AlgebraElement x = xi.get(0, i);
        for (int c = 0; c < w.n_comps(); ++c) out.set(c, i, bracket(w.get(c, i), x));
    }
    return out;
}

std::pair<LieForm, LieForm> fundamental_vector(const LieForm& xi, const LieForm& a,
                                               const LieForm& e) {
    if (xi.degree != 0 || a.degree != 1 || e.degree != 2)
        throw StructuralError("gauge: fundamental_vector degree mismatch");
    return {covariant_derivative(a, xi), pointwise_bracket(e, xi)};
}

std::string falloff_kind_name(FallOffKind k) {
    switch (k) {
        case FallOffKind::Formal: return "formal";
        case FallOffKind::BoundaryPreserving: return "boundary_preserving";
        case FallOffKind::AsymptoticallyTrivial: return "asymptotically_trivial";
        default: return "not_classifiable";
    }
}

FallOffClass classify(const GaugeMap& g, const ClassifyOptions& opt) {
    const Grid& gr = *g.grid;
    FallOffClass out;
    const int m = gr.boundary_layers;
    const int lo1 = gr.n_r - m;
    const int lo2 = std::max(0, lo1 - m / 2);

    // per-ray limits from two staggered windows
    std::vector<GroupElement> c1, c2;
    c1.reserve(std::size_t(gr.n_theta) * gr.n_phi);
    double stability = 0.0;
    for (int k = 0; k < gr.n_theta; ++k)
        for (int l = 0; l < gr.n_phi; ++l) {
            c1.push_back(extrapolate_ray(g, k, l, lo1, m));
            const GroupElement w2 = extrapolate_ray(g, k, l, lo2, m);
            stability = std::max(stability, group_distance(c1.back(), w2));
        }
    out.limit_stability = stability;
    if (stability > opt.stability_tol) {
        out.kind = FallOffKind::Formal;
        out.boundary_constant = GroupElement::identity(g.group);
        return out;
    }

    double spread = 0.0;
    for (const auto& c : c1) spread = std::max(spread, group_distance(c1.front(), c));
    out.angular_spread = spread;
    if (spread > opt.angular_tol) {
        out.kind = FallOffKind::Formal;
        out.boundary_constant = GroupElement::identity(g.group);
        return out;
    }

    const GroupElement c = average_constants(g.group, c1);
    out.boundary_constant = c;

    // fall-off of log(g c^-1), i.e. of the group distance to the constant
    const auto [wlo, whi] = falloff_window(gr);
    std::vector<double> radii(gr.r.begin() + wlo, gr.r.begin() + whi);
    std::vector<double> prof(whi - wlo, 0.0);
    for (int j = wlo; j < whi; ++j) {
        double sup = 0.0;
        for (int k = 0; k < gr.n_theta; ++k)
            for (int l = 0; l < gr.n_phi; ++l)
                sup = std::max(sup, group_distance(c, g.get(gr.node(j, k, l))));
        prof[j - wlo] = sup;
    }
    out.rate = fit_decay_profile(radii, prof);

    if (out.rate.tag == DecayTag::NoPowerLaw) {
        // the estimated constant carries an extrapolation error that floors the
        // profile; a drop to that floor within the window is as fast as decay
        // can be measured
        double head = 0.0, tail = 0.0;
        const std::size_t q = prof.size() / 4;
        for (std::size_t i = 0; i < prof.size(); ++i) {
            if (i < q) head = std::max(head, prof[i]);
            if (i >= prof.size() - q) tail = std::max(tail, prof[i]);
        }
        if (tail <= std::max(1e-8, 5e-3 * head)) out.rate.tag = DecayTag::FasterThanAnyPower;
    }

    const bool fast = out.rate.tag == DecayTag::FasterThanAnyPower ||
                      (out.rate.tag == DecayTag::PowerLaw &&
                       out.rate.exponent <= -0.5 - opt.rate_margin);
    if (!fast) {
        // a profile that does not even decrease towards the boundary never
        // approaches its putative constant
        out.kind = out.rate.tag == DecayTag::NoPowerLaw && out.rate.decay_ratio > 0.85
                       ? FallOffKind::Formal
                       : FallOffKind::NotClassifiable;
        return out;
    }
    const double to_identity = group_distance(GroupElement::identity(g.group), c);
    out.kind = to_identity < opt.identity_tol ? FallOffKind::AsymptoticallyTrivial
                                              : FallOffKind::BoundaryPreserving;
    return out;
}

RateLemmaReport rate_lemma_check(const LieForm& xi, double epsilon, double C) {
    if (xi.degree != 0) throw StructuralError("rate_lemma_check: needs a 0-form");
    const Grid& g = *xi.grid;
    RateLemmaReport rep;

    // precondition |d_r xi| <= C r^{-3/2-eps}, checked away from the coordinate
    // singularity at the origin where the bound is vacuous but FD is noisy
    LieForm dxi = make_form(xi.grid, 0, xi.chart, xi.group);
    for (int a = 0; a < xi.adim(); ++a)
        g.deriv_R(xi.comp(0) + a, dxi.comp(0) + a, xi.adim());
    rep.precondition_ok = true;
    rep.precondition_worst = 0.0;
    // the outermost extrapolation layers are skipped: polynomial stencils do not
    // resolve fractional-power tails there, and the windowed bound check below
    // covers that region by direct evaluation
    for (int j = 0; j < g.n_r - g.boundary_layers; ++j) {
        if (g.r[j] < 1.0) continue;
        const double bound = C * std::pow(g.r[j], -1.5 - epsilon) * (1.0 + 1e-3) + 1e-12;
        for (int k = 0; k < g.n_theta; ++k)
            for (int l = 0; l < g.n_phi; ++l) {
                const std::size_t i = g.node(j, k, l);
                const double d = g.K[j] * dxi.get(0, i).norm();  // d/dr = K d/dR
                const double ratio = d / bound;
                if (ratio > rep.precondition_worst) rep.precondition_worst = ratio;
                if (ratio > 1.0 && rep.precondition_ok) {
                    rep.precondition_ok = false;
                    rep.offending_node = i;
                }
            }
    }
    if (!rep.precondition_ok) return rep;

    // per-ray limits from the model xi ~ c + b r^{-1/2-eps}
    const auto [wlo, whi] = falloff_window(g);
    const double q = 0.5 + epsilon;
    std::vector<AlgebraElement> limits;
    rep.limits_exist = true;
    for (int k = 0; k < g.n_theta; ++k)
        for (int l = 0; l < g.n_phi; ++l) {
            AlgebraElement cray = AlgebraElement::zero(xi.group);
            double worst_res = 0.0, scale = 0.0;
            for (int a = 0; a < xi.adim(); ++a) {
                double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (int j = wlo; j < whi; ++j) {
                    const double xv = std::pow(g.r[j], -q);
                    const double yv = xi.get(0, g.node(j, k, l)).c[a];
                    s1 += 1;
                    sx += xv;
                    sy += yv;
                    sxx += xv * xv;
                    sxy += xv * yv;
                }
                const double det = s1 * sxx - sx * sx;
                const double b = (s1 * sxy - sx * sy) / det;
                const double cc = (sy * sxx - sx * sxy) / det;
                cray.c[a] = cc;
                for (int j = wlo; j < whi; ++j) {
                    const double xv = std::pow(g.r[j], -q);
                    const double yv = xi.get(0, g.node(j, k, l)).c[a];
                    worst_res = std::max(worst_res, std::fabs(yv - cc - b * xv));
                    scale = std::max(scale, std::fabs(yv - cc));
                }
            }
            if (worst_res > std::max(1e-8, 0.05 * scale)) rep.limits_exist = false;
            limits.push_back(cray);
        }

    double uni = 0.0;
    for (const auto& c : limits) uni = std::max(uni, (c - limits.front()).norm());
    rep.limits_uniform = uni < 1e-3 * std::max(1.0, limits.front().norm());

    AlgebraElement cbar = AlgebraElement::zero(xi.group);
    for (const auto& c : limits) cbar = cbar + (1.0 / double(limits.size())) * c;
    rep.limit = cbar;

    // the FTC bound itself, at every node of the asymptotic window
    rep.bound_ok = true;
    rep.bound_worst = 0.0;
    for (int j = wlo; j < whi; ++j) {
        const double bound = 2.0 * C * std::pow(g.r[j], -q) * (1.0 + 1e-3) + 1e-12;
        for (int k = 0; k < g.n_theta; ++k)
            for (int l = 0; l < g.n_phi; ++l) {
                const double d = (xi.get(0, g.node(j, k, l)) - cbar).norm();
                rep.bound_worst = std::max(rep.bound_worst, d / bound);
            }
    }
    if (rep.bound_worst > 1.0) rep.bound_ok = false;
    rep.passed = rep.precondition_ok && rep.limits_exist && rep.limits_uniform && rep.bound_ok;
    return rep;
}

namespace {

std::vector<int> bfs_distance(const Grid& g, const RegionMask& mask) {
    std::vector<int> dist(g.n_nodes(), -1);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) {
            dist[i] = 0;
            queue.push_back(i);
        }
    auto push = [&](std::size_t from, int j, int k, int l) {
        const std::size_t i = g.node(j, k, l);
        if (dist[i] < 0) {
            dist[i] = dist[from] + 1;
            queue.push_back(i);
        }
    };
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        const int l = int(i % g.n_phi);
        const int k = int((i / g.n_phi) % g.n_theta);
        const int j = int(i / (std::size_t(g.n_phi) * g.n_theta));
        if (j > 0) push(i, j - 1, k, l);
        if (j + 1 < g.n_r) push(i, j + 1, k, l);
        if (k > 0) push(i, j, k - 1, l);
        if (k + 1 < g.n_theta) push(i, j, k + 1, l);
        push(i, j, k, (l + 1) % g.n_phi);
        push(i, j, k, (l + g.n_phi - 1) % g.n_phi);
    }
    return dist;
}

}  // namespace

LocalizeResult is_localizable(const LieForm& xi, const RegionMask& u, const RegionMask& v) {
    if (xi.degree != 0) throw StructuralError("is_localizable: needs a 0-form");
    const Grid& g = *xi.grid;
    if (u.size() != g.n_nodes() || v.size() != g.n_nodes())
        throw StructuralError("is_localizable: mask size mismatch");

    const std::vector<int> du = bfs_distance(g, u);
    const std::vector<int> dv = bfs_distance(g, v);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] && dv[i] < 2)
            throw DomainError("is_localizable: regions overlap or closures touch");

    // boundary limit of xi along each ray
    const int m = g.boundary_layers;
    double blimit = 0.0;
    for (int k = 0; k < g.n_theta; ++k)
        for (int l = 0; l < g.n_phi; ++l) {
            AlgebraElement c = AlgebraElement::zero(xi.group);
            for (int a = 0; a < xi.adim(); ++a) {
                std::vector<double> rho(m), vals(m);
                for (int i = 0; i < m; ++i) {
                    const int j = g.n_r - m + i;
                    rho[i] = g.rho[j];
                    vals[i] = xi.get(0, g.node(j, k, l)).c[a];
                }
                c.c[a] = extrapolate_to_zero(rho, vals);
            }
            blimit = std::max(blimit, c.norm());
        }
    const bool boundary_zero = blimit < std::max(1e-8, 1e-6 * std::max(1.0, xi.max_abs()));

    bool touches = false;
    int jmax_u = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i]) {
            const int j = int(i / (std::size_t(g.n_phi) * g.n_theta));
            jmax_u = std::max(jmax_u, j);
            if (j >= g.n_r - g.boundary_layers) touches = true;
        }

    if (!boundary_zero && touches) return {false, std::nullopt};

    LieForm out = xi;
    for (std::size_t i = 0; i < g.n_nodes(); ++i) {
        const double t = double(du[i]) / double(du[i] + dv[i]);
        const double f = 1.0 - quintic_smoothstep(t);
        for (int a = 0; a < xi.adim(); ++a) out.comp(0)[i * xi.adim() + a] *= f;
    }
    if (!boundary_zero) {
        // switch off towards the boundary so the result stays boundary-vanishing
        const int j0 = jmax_u + 1;
        const int j1 = g.n_r - 2;
        for (int j = 0; j < g.n_r; ++j) {
            double env = 1.0;
            if (j >= j1)
                env = 0.0;
            else if (j >= j0)
                env = 1.0 - quintic_smoothstep(double(j - j0 + 1) / double(j1 - j0 + 1));
            if (env == 1.0) continue;
            for (int k = 0; k < g.n_theta; ++k)
                for (int l = 0; l < g.n_phi; ++l) {
                    const std::size_t i = g.node(j, k, l);
                    for (int a = 0; a < xi.adim(); ++a) out.comp(0)[i * xi.adim() + a] *= env;
                }
        }
    }
    return {true, out};
}

WindingResult winding_number(const GaugeMap& g, const GroupElement& boundary_constant) {
    if (g.group != GroupTag::SU2)
        throw StructuralError("winding_number: defined for SU2 maps only");
    if (boundary_constant.tag != GroupTag::SU2)
        throw StructuralError("winding_number: constant tag mismatch");
    const Grid& gr = *g.grid;
    const LieForm mc = maurer_cartan(g);
    double acc = 0.0;
    for (int j = 0; j < gr.n_r; ++j)
        for (int k = 0; k < gr.n_theta; ++k) {
            const double w = gr.weight_coordinate(j, k, 0, Chart::Sigma);
            for (int l = 0; l < gr.n_phi; ++l) {
                const std::size_t i = gr.node(j, k, l);
                const AlgebraElement a0 = mc.get(0, i), a1 = mc.get(1, i), a2 = mc.get(2, i);
                const double det = a0.c[0] * (a1.c[1] * a2.c[2] - a1.c[2] * a2.c[1]) -
                                   a0.c[1] * (a1.c[0] * a2.c[2] - a1.c[2] * a2.c[0]) +
                                   a0.c[2] * (a1.c[0] * a2.c[1] - a1.c[1] * a2.c[0]);
                acc += w * det;
            }
        }
    WindingResult res;
    // orientation fixed so the outward hedgehog with chi: 0 -> 2 pi has degree +1
    res.raw = acc / (16.0 * kPi * kPi);
    res.value = int(std::lround(res.raw));
    res.confidence = std::fabs(res.raw - res.value);
    return res;
}

QuotientRep quotient_representative(const GaugeMap& g) {
    const FallOffClass cls = classify(g);
    if (cls.kind == FallOffKind::Formal || cls.kind == FallOffKind::NotClassifiable)
        throw DomainError("quotient_representative: map does not preserve the boundary");
    QuotientRep rep;
    rep.boundary_constant = cls.boundary_constant;
    rep.winding = g.group == GroupTag::SU2 ? winding_number(g, cls.boundary_constant).value : 0;
    return rep;
}

}  // namespace yma
