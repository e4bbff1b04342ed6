#include "yma/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace yma {

namespace {

void check_compatible(const LieForm& a, const LieForm& b, const char* op) {
    if (a.group != b.group) throw StructuralError(std::string("forms: group mismatch in ") + op);
    if (a.grid != b.grid) throw StructuralError(std::string("forms: grid mismatch in ") + op);
    if (a.chart != b.chart) throw StructuralError(std::string("forms: chart mismatch in ") + op);
}

// d/d(rad) of one component (all algebra lanes): FD in R, then the chain rule
// d/dr = K d/dR on Sigma.
void radial_derivative(const LieForm& w, const double* in, double* out) {
    const Grid& g = *w.grid;
    const int adim = w.adim();
    for (int a = 0; a < adim; ++a) g.deriv_R(in + a, out + a, adim);
    if (w.chart == Chart::Sigma) {
        for (int j = 0; j < g.n_r; ++j) {
            const double K = g.K[j];
            double* p = out + std::size_t(g.node(j, 0, 0)) * adim;
            const std::size_t cnt = std::size_t(g.n_theta) * g.n_phi * adim;
            for (std::size_t i = 0; i < cnt; ++i) p[i] *= K;
        }
    }
}

}  // namespace

double LieForm::max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::fabs(v));
    return m;
}

LieForm make_form(std::shared_ptr<const Grid> grid, int degree, Chart chart, GroupTag group) {
    if (degree < 0 || degree > 3) throw DomainError("forms: degree must be 0..3");
    LieForm w;
    w.degree = degree;
    w.chart = chart;
    w.group = group;
    w.grid = std::move(grid);
    const int nc = w.n_comps();
    w.data.assign(std::size_t(nc) * w.grid->n_nodes() * w.adim(), 0.0);
    return w;
}

void fill_component(LieForm& w, int c,
                    const std::function<AlgebraElement(double, double, double)>& fn) {
    const Grid& g = *w.grid;
    for (int j = 0; j < g.n_r; ++j)
        for (int k = 0; k < g.n_theta; ++k)
            for (int l = 0; l < g.n_phi; ++l)
                w.set(c, g.node(j, k, l), fn(g.r[j], g.theta[k], g.phi[l]));
}

LieForm operator+(const LieForm& a, const LieForm& b) {
    check_compatible(a, b, "+");
    if (a.degree != b.degree) throw StructuralError("forms: degree mismatch in +");
    LieForm out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
    return out;
}

LieForm operator-(const LieForm& a, const LieForm& b) {
    check_compatible(a, b, "-");
    if (a.degree != b.degree) throw StructuralError("forms: degree mismatch in -");
    LieForm out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
    return out;
}

LieForm operator*(double s, const LieForm& a) {
    LieForm out = a;
    for (auto& v : out.data) v *= s;
    return out;
}

LieForm exterior_derivative(const LieForm& w) {
    if (w.degree == 3) throw DomainError("forms: exterior derivative of a 3-form");
    const Grid& g = *w.grid;
    const int adim = w.adim();
    LieForm d = make_form(w.grid, w.degree + 1, w.chart, w.group);
    std::vector<double> tmp(g.n_nodes() * adim);

    auto axis_deriv = [&](int axis, const double* in, double* out) {
        if (axis == 0) {
            radial_derivative(w, in, out);
        } else if (axis == 1) {
            for (int a = 0; a < adim; ++a) g.deriv_theta(in + a, out + a, adim);
        } else {
            for (int a = 0; a < adim; ++a) g.deriv_phi(in + a, out + a, adim);
        }
    };
    auto accumulate = [&](int dst_comp, int axis, const double* in, double sign) {
        axis_deriv(axis, in, tmp.data());
        double* out = d.comp(dst_comp);
        for (std::size_t i = 0; i < tmp.size(); ++i) out[i] += sign * tmp[i];
    };

    if (w.degree == 0) {
        for (int axis = 0; axis < 3; ++axis) accumulate(axis, axis, w.comp(0), 1.0);
    } else if (w.degree == 1) {
        // (dw)_{rt} = dr w_t - dt w_r ; (dw)_{rp} = dr w_p - dp w_r ;
        // (dw)_{tp} = dt w_p - dp w_t
        accumulate(0, 0, w.comp(1), 1.0);
        accumulate(0, 1, w.comp(0), -1.0);
        accumulate(1, 0, w.comp(2), 1.0);
        accumulate(1, 2, w.comp(0), -1.0);
        accumulate(2, 1, w.comp(2), 1.0);
        accumulate(2, 2, w.comp(1), -1.0);
    } else {
        // (dw)_{rtp} = dr w_{tp} - dt w_{rp} + dp w_{rt}
        accumulate(0, 0, w.comp(2), 1.0);
        accumulate(0, 1, w.comp(1), -1.0);
        accumulate(0, 2, w.comp(0), 1.0);
    }
    return d;
}

std::vector<double> wedge_trace(const LieForm& w, const LieForm& e) {
    check_compatible(w, e, "wedge_trace");
    if (w.degree + e.degree != 3)
        throw StructuralError("forms: wedge_trace needs degrees summing to 3");
    const Grid& g = *w.grid;
    const std::size_t n = g.n_nodes();
    std::vector<double> out(n, 0.0);

    auto dot = [&](const double* a, const double* b, std::size_t node, int adim) {
        double s = 0.0;
        for (int i = 0; i < adim; ++i) s += a[node * adim + i] * b[node * adim + i];
        return s;
    };
    const int adim = w.adim();

    if (w.degree == 0 || w.degree == 3) {
        const double* a = w.comp(0);
        const double* b = e.comp(0);
        for (std::size_t i = 0; i < n; ++i) out[i] = dot(a, b, i, adim);
        return out;
    }
    // 1-form x 2-form pairing: r<->(tp), t<->(rp) with sign, p<->(rt)
    const LieForm& one = w.degree == 1 ? w : e;
    const LieForm& two = w.degree == 1 ? e : w;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = dot(one.comp(0), two.comp(2), i, adim) - dot(one.comp(1), two.comp(1), i, adim) +
                 dot(one.comp(2), two.comp(0), i, adim);
    return out;
}

double integrate_wedge_trace(const LieForm& w, const LieForm& e) {
    const std::vector<double> density = wedge_trace(w, e);
    const Grid& g = *w.grid;
    double acc = 0.0;
    for (int j = 0; j < g.n_r; ++j)
        for (int k = 0; k < g.n_theta; ++k) {
            const double wjk = g.weight_coordinate(j, k, 0, w.chart);
            const double* p = density.data() + g.node(j, k, 0);
            double row = 0.0;
            for (int l = 0; l < g.n_phi; ++l) row += p[l];
            acc += wjk * row;
        }
    return acc;
}

LieForm hodge(const LieForm& w, Metric metric) {
    if ((metric == Metric::FlatSigma) != (w.chart == Chart::Sigma))
        throw StructuralError("forms: hodge metric does not match the form's chart");
    const Grid& g = *w.grid;
    LieForm out = make_form(w.grid, 3 - w.degree, w.chart, w.group);
    const int adim = w.adim();

    for (int j = 0; j < g.n_r; ++j) {
        // diagonal metric (1, s2, s2 sin^2 t), s = r on Sigma, sin R on SigmaHat
        const double s = metric == Metric::FlatSigma ? g.r[j] : std::sin(g.R[j]);
        for (int k = 0; k < g.n_theta; ++k) {
            const double st = std::sin(g.theta[k]);
            const double sqrtg = s * s * st;
            const double g22 = 1.0 / (s * s);
            const double g33 = 1.0 / (s * s * st * st);
            for (int l = 0; l < g.n_phi; ++l) {
                const std::size_t node = g.node(j, k, l);
                if (w.degree == 0) {
                    for (int a = 0; a < adim; ++a)
                        out.comp(0)[node * adim + a] = sqrtg * w.comp(0)[node * adim + a];
                } else if (w.degree == 3) {
                    for (int a = 0; a < adim; ++a)
                        out.comp(0)[node * adim + a] = w.comp(0)[node * adim + a] / sqrtg;
                } else if (w.degree == 1) {
                    // *(w_1) -> (tp), *(w_2) -> -(rp), *(w_3) -> (rt)
                    for (int a = 0; a < adim; ++a) {
                        out.comp(2)[node * adim + a] = sqrtg * w.comp(0)[node * adim + a];
                        out.comp(1)[node * adim + a] = -sqrtg * g22 * w.comp(1)[node * adim + a];
                        out.comp(0)[node * adim + a] = sqrtg * g33 * w.comp(2)[node * adim + a];
                    }
                } else {
                    // *(w_{tp}) -> r, *(w_{rp}) -> -t, *(w_{rt}) -> p
                    for (int a = 0; a < adim; ++a) {
                        out.comp(0)[node * adim + a] = sqrtg * g22 * g33 * w.comp(2)[node * adim + a];
                        out.comp(1)[node * adim + a] = -sqrtg * g33 * w.comp(1)[node * adim + a];
                        out.comp(2)[node * adim + a] = sqrtg * g22 * w.comp(0)[node * adim + a];
                    }
                }
            }
        }
    }
    return out;
}

LieForm bracket_wedge(const LieForm& a, const LieForm& w) {
    check_compatible(a, w, "bracket_wedge");
    if (a.degree != 1) throw StructuralError("forms: bracket_wedge needs a 1-form first");
    if (w.degree == 3) throw DomainError("forms: bracket_wedge with a 3-form");
    const Grid& g = *a.grid;
    const std::size_t n = g.n_nodes();
    LieForm out = make_form(a.grid, w.degree + 1, a.chart, a.group);
    if (a.group == GroupTag::U1) return out;  // Abelian brackets vanish

    if (w.degree == 0) {
        for (std::size_t i = 0; i < n; ++i)
            for (int c = 0; c < 3; ++c) out.set(c, i, bracket(a.get(c, i), w.get(0, i)));
    } else if (w.degree == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            out.set(0, i, bracket(a.get(0, i), w.get(1, i)) - bracket(a.get(1, i), w.get(0, i)));
            out.set(1, i, bracket(a.get(0, i), w.get(2, i)) - bracket(a.get(2, i), w.get(0, i)));
            out.set(2, i, bracket(a.get(1, i), w.get(2, i)) - bracket(a.get(2, i), w.get(1, i)));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            out.set(0, i,
                    bracket(a.get(0, i), w.get(2, i)) - bracket(a.get(1, i), w.get(1, i)) +
                        bracket(a.get(2, i), w.get(0, i)));
    }
    return out;
}

LieForm covariant_derivative(const LieForm& a, const LieForm& w) {
    check_compatible(a, w, "covariant_derivative");
    LieForm d = exterior_derivative(w);
    if (a.group == GroupTag::U1) return d;
    const LieForm br = bracket_wedge(a, w);
    return d + br;
}

LieForm curvature(const LieForm& a) {
    if (a.degree != 1) throw StructuralError("forms: curvature needs a 1-form");
    LieForm f = exterior_derivative(a);
    if (a.group == GroupTag::U1) return f;
    // F = dA + 1/2 [A ^ A]; the graded bracket of A with itself doubles the
    // pointwise bracket, so F_ij = dA_ij + [A_i, A_j].
    const std::size_t n = a.grid->n_nodes();
    for (std::size_t i = 0; i < n; ++i) {
        f.set(0, i, f.get(0, i) + bracket(a.get(0, i), a.get(1, i)));
        f.set(1, i, f.get(1, i) + bracket(a.get(0, i), a.get(2, i)));
        f.set(2, i, f.get(2, i) + bracket(a.get(1, i), a.get(2, i)));
    }
    return f;
}

double l2_norm_sq(const LieForm& w, Metric metric) {
    return integrate_wedge_trace(w, hodge(w, metric));
}

LieForm conformal_reweight(const LieForm& w, ReweightDirection direction) {
    const Chart target = direction == ReweightDirection::ToSigma ? Chart::Sigma : Chart::SigmaHat;
    if (w.chart == target) throw StructuralError("forms: conformal_reweight to the same chart");
    LieForm out = w;
    out.chart = target;
    // radial-index components: r, (rt), (rp), (rtp)
    std::vector<int> radial_comps;
    if (w.degree == 1) radial_comps = {0};
    if (w.degree == 2) radial_comps = {0, 1};
    if (w.degree == 3) radial_comps = {0};
    const Grid& g = *w.grid;
    const int adim = w.adim();
    for (int c : radial_comps) {
        double* p = out.comp(c);
        for (int j = 0; j < g.n_r; ++j) {
            const double f = direction == ReweightDirection::ToSigma ? g.K[j] : 1.0 / g.K[j];
            const std::size_t base = g.node(j, 0, 0) * adim;
            const std::size_t cnt = std::size_t(g.n_theta) * g.n_phi * adim;
            for (std::size_t i = 0; i < cnt; ++i) p[base + i] *= f;
        }
    }
    return out;
}

DecayProfile fit_decay_profile(const std::vector<double>& radii,
                               const std::vector<double>& values) {
    if (radii.size() != values.size() || radii.size() < 3)
        throw StructuralError("fit_decay_profile: need >= 3 samples");
    DecayProfile out;

    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::fabs(v));
    const std::size_t half = values.size() / 2;
    double sup_in = 0.0, sup_out = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i < half)
            sup_in = std::max(sup_in, std::fabs(values[i]));
        else
            sup_out = std::max(sup_out, std::fabs(values[i]));
    }
    out.decay_ratio = sup_in > 0.0 ? sup_out / sup_in : 1.0;

    if (vmax < 1e-12) {
        out.tag = DecayTag::FasterThanAnyPower;
        return out;
    }

    // a tail that reaches the measurement floor inside the window decays
    // steeper than any power we classify
    double tail_min = vmax;
    for (std::size_t i = 2 * values.size() / 3; i < values.size(); ++i)
        tail_min = std::min(tail_min, std::fabs(values[i]));
    if (tail_min < std::max(1e-12, 1e-6 * vmax)) {
        out.tag = DecayTag::FasterThanAnyPower;
        return out;
    }

    const double tail = std::fabs(values.back());
    const double head = std::fabs(values.front());
    const double secant = (tail < 1e-300 || head < 1e-300)
                              ? -1e9
                              : (std::log(tail) - std::log(head)) /
                                    (std::log(radii.back()) - std::log(radii.front()));
    if (secant < -8.0) {
        out.tag = DecayTag::FasterThanAnyPower;
        return out;
    }

    // steepening log-log slope with strong decay: super-power fall-off
    // (a power law has the same secant over both halves)
    auto half_secant = [&](std::size_t a, std::size_t b) {
        const double va = std::max(std::fabs(values[a]), 1e-300);
        const double vb = std::max(std::fabs(values[b]), 1e-300);
        return (std::log(vb) - std::log(va)) / (std::log(radii[b]) - std::log(radii[a]));
    };
    const double s1 = half_secant(0, half);
    const double s2 = half_secant(half, values.size() - 1);
    if (out.decay_ratio < 0.1 && s1 < -0.5 && s2 < s1 - 0.5) {
        out.tag = DecayTag::FasterThanAnyPower;
        return out;
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (std::fabs(values[i]) < 1e-300) continue;
        lx.push_back(std::log(radii[i]));
        ly.push_back(std::log(std::fabs(values[i])));
    }
    if (lx.size() < 3) {
        out.tag = DecayTag::FasterThanAnyPower;
        return out;
    }
    const std::size_t n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy * sxx - sx * sxy) / det;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ly[i] - slope * lx[i] - intercept;
        rss += resid * resid;
    }
    out.exponent = slope;
    out.amplitude = std::exp(intercept);
    out.residual = std::sqrt(rss / double(n));
    out.tag = out.residual < 0.05 ? DecayTag::PowerLaw : DecayTag::NoPowerLaw;
    return out;
}

std::pair<int, int> falloff_window(const Grid& g) {
    const int width = std::max(6, g.n_r / 4);
    if (width > g.n_r)
        throw StructuralError("falloff_window: grid has fewer than 6 radial layers");
    return {g.n_r - width, g.n_r};
}

std::vector<double> radial_profile(const LieForm& w, int c) {
    const Grid& g = *w.grid;
    std::vector<double> out(g.n_r, 0.0);
    for (int j = 0; j < g.n_r; ++j) {
        double m = 0.0;
        for (int k = 0; k < g.n_theta; ++k)
            for (int l = 0; l < g.n_phi; ++l) m = std::max(m, w.get(c, g.node(j, k, l)).norm());
        out[j] = m;
    }
    return out;
}

DecayProfile estimate_falloff(const LieForm& w, int c) {
    const Grid& g = *w.grid;
    const auto [lo, hi] = falloff_window(g);
    const std::vector<double> prof = radial_profile(w, c);
    std::vector<double> radii(g.r.begin() + lo, g.r.begin() + hi);
    std::vector<double> vals(prof.begin() + lo, prof.begin() + hi);
    return fit_decay_profile(radii, vals);
}

AlgebraElement shell_integral(const LieForm& w, int j) {
    if (w.degree != 2) throw StructuralError("shell_integral: needs a 2-form");
    const Grid& g = *w.grid;
    AlgebraElement acc = AlgebraElement::zero(w.group);
    for (int k = 0; k < g.n_theta; ++k) {
        const double wk = g.wx[k] / std::sin(g.theta[k]) * g.wphi;
        for (int l = 0; l < g.n_phi; ++l) {
            const AlgebraElement v = w.get(2, g.node(j, k, l));  // (theta phi) component
            acc = acc + wk * v;
        }
    }
    return acc;
}

AlgebraElement boundary_integral(const LieForm& w) {
    const Grid& g = *w.grid;
    const int m = g.boundary_layers;
    std::vector<double> rho(m);
    std::vector<std::vector<double>> vals(w.adim(), std::vector<double>(m));
    for (int i = 0; i < m; ++i) {
        const int j = g.n_r - m + i;
        rho[i] = g.rho[j];
        const AlgebraElement s = shell_integral(w, j);
        for (int a = 0; a < w.adim(); ++a) vals[a][i] = s.c[a];
    }
    AlgebraElement out = AlgebraElement::zero(w.group);
    for (int a = 0; a < w.adim(); ++a) out.c[a] = extrapolate_to_zero(rho, vals[a]);
    return out;
}

}  // namespace yma
