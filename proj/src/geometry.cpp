#include "yma/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace yma {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ConformalChart::r_to_R(double r) {
    if (r <= 0.0) throw DomainError("chart: r_to_R requires r > 0");
    return 2.0 * std::atan(r);
}

double ConformalChart::R_to_r(double R) {
    if (R <= 0.0 || R >= kPi) throw DomainError("chart: R_to_r requires R in (0, pi)");
    return std::tan(0.5 * R);
}

double ConformalChart::conformal_factor(double r) {
    if (r < 0.0) throw DomainError("chart: conformal_factor requires r >= 0");
    return 2.0 / (1.0 + r * r);
}

double ConformalChart::conformal_factor_spacetime(double t, double r) {
    const double p = (t + r) * (t + r) + 1.0;
    const double m = (t - r) * (t - r) + 1.0;
    return 2.0 / std::sqrt(p * m);
}

double ConformalChart::boundary_coordinate(double r) {
    if (r <= 0.0) throw DomainError("chart: boundary_coordinate requires r > 0");
    // pi - 2 arctan(r) = 2 arctan(1/r), numerically stable for large r.
    return 2.0 * std::atan(1.0 / r);
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order) {
    // Fornberg (1988). c[k][j]: weight of node j for the k-th derivative.
    const int n = int(nodes.size()) - 1;
    const int m = order;
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c[m];
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

double extrapolate_to_zero(const std::vector<double>& rho, const std::vector<double>& v) {
    if (rho.size() != v.size() || rho.empty())
        throw StructuralError("extrapolate_to_zero: size mismatch or empty input");
    std::vector<double> p = v;
    const int n = int(p.size());
    for (int level = 1; level < n; ++level)
        for (int i = 0; i < n - level; ++i)
            p[i] = (rho[i + level] * p[i] - rho[i] * p[i + 1]) / (rho[i + level] - rho[i]);
    return p[0];
}

double Grid::weight_flat(int j, int k, int l) const {
    (void)l;
    return wR[j] * (r[j] * r[j] / K[j]) * wx[k] * wphi;
}

double Grid::weight_round(int j, int k, int l) const {
    (void)l;
    const double s = std::sin(R[j]);
    return wR[j] * s * s * wx[k] * wphi;
}

double Grid::weight_coordinate(int j, int k, int l, Chart c) const {
    (void)l;
    const double radial = c == Chart::Sigma ? wR[j] / K[j] : wR[j];
    return radial * (wx[k] / std::sin(theta[k])) * wphi;
}

void Grid::deriv_R(const double* in, double* out, std::ptrdiff_t stride) const {
    const std::ptrdiff_t layer = std::ptrdiff_t(n_theta) * n_phi * stride;
    for (int k = 0; k < n_theta; ++k) {
        for (int l = 0; l < n_phi; ++l) {
            const std::ptrdiff_t base = (std::ptrdiff_t(k) * n_phi + l) * stride;
            for (int j = 0; j < n_r; ++j) {
                const Stencil& s = stencil_R[j];
                double acc = 0.0;
                for (std::size_t m = 0; m < s.w.size(); ++m)
                    acc += s.w[m] * in[base + (s.lo + std::ptrdiff_t(m)) * layer];
                out[base + j * layer] = acc;
            }
        }
    }
}

void Grid::deriv_theta(const double* in, double* out, std::ptrdiff_t stride) const {
    const std::ptrdiff_t row = std::ptrdiff_t(n_phi) * stride;
    for (int j = 0; j < n_r; ++j) {
        for (int l = 0; l < n_phi; ++l) {
            const std::ptrdiff_t base = (std::ptrdiff_t(j) * n_theta * n_phi + l) * stride;
            for (int k = 0; k < n_theta; ++k) {
                const Stencil& s = stencil_theta[k];
                double acc = 0.0;
                for (std::size_t m = 0; m < s.w.size(); ++m)
                    acc += s.w[m] * in[base + (s.lo + std::ptrdiff_t(m)) * row];
                out[base + k * row] = acc;
            }
        }
    }
}

void Grid::deriv_phi(const double* in, double* out, std::ptrdiff_t stride) const {
    for (int j = 0; j < n_r; ++j) {
        for (int k = 0; k < n_theta; ++k) {
            const std::ptrdiff_t base = (std::ptrdiff_t(j) * n_theta + k) * std::ptrdiff_t(n_phi) * stride;
            for (int l = 0; l < n_phi; ++l) {
                double acc = 0.0;
                for (int m = -2; m <= 2; ++m) {
                    const int lm = (l + m + 2 * n_phi) % n_phi;
                    acc += stencil_phi[m + 2] * in[base + std::ptrdiff_t(lm) * stride];
                }
                out[base + std::ptrdiff_t(l) * stride] = acc;
            }
        }
    }
}

std::shared_ptr<const Grid> build_grid(int n_r, int n_theta, int n_phi, Chart chart) {
    if (n_r < 8 || n_theta < 8 || n_phi < 8 || n_phi % 2 != 0)
        throw DomainError("build_grid: need n_r, n_theta >= 8 and n_phi >= 8 even");

    auto g = std::make_shared<Grid>();
    g->chart = chart;
    g->n_r = n_r;
    g->n_theta = n_theta;
    g->n_phi = n_phi;

    // Radial: midpoint-staggered uniform nodes in R, avoiding R = 0 and R = pi.
    const double h = kPi / n_r;
    g->dR = h;
    g->R.resize(n_r);
    g->r.resize(n_r);
    g->K.resize(n_r);
    g->rho.resize(n_r);
    for (int j = 0; j < n_r; ++j) {
        g->R[j] = (j + 0.5) * h;
        g->r[j] = ConformalChart::R_to_r(g->R[j]);
        g->K[j] = ConformalChart::conformal_factor(g->r[j]);
        g->rho[j] = kPi - g->R[j];
    }
    g->boundary_shell = n_r - 1;
    g->boundary_layers = std::min(6, n_r / 2);

    // Corrected midpoint weights: Euler-Maclaurin end corrections restore order 6
    // using one-sided derivative approximations at R = 0 and R = pi.
    g->wR.assign(n_r, h);
    const int m = std::min(6, n_r / 2);
    std::vector<double> end(m);
    for (int i = 0; i < m; ++i) end[i] = g->R[i];
    const std::vector<double> d1L = fd_weights(0.0, end, 1);
    const std::vector<double> d3L = fd_weights(0.0, end, 3);
    for (int i = 0; i < m; ++i)
        g->wR[i] += (h * h / 24.0) * (-d1L[i]) + (7.0 * std::pow(h, 4) / 5760.0) * d3L[i];
    for (int i = 0; i < m; ++i) end[i] = g->R[n_r - m + i];
    const std::vector<double> d1R = fd_weights(kPi, end, 1);
    const std::vector<double> d3R = fd_weights(kPi, end, 3);
    for (int i = 0; i < m; ++i)
        g->wR[n_r - m + i] += (h * h / 24.0) * d1R[i] - (7.0 * std::pow(h, 4) / 5760.0) * d3R[i];

    // Angular: Gauss-Legendre in x = cos(theta), stored with theta ascending.
    std::vector<double> xn, xw;
    gauss_legendre(n_theta, xn, xw);
    g->x.resize(n_theta);
    g->wx.resize(n_theta);
    g->theta.resize(n_theta);
    for (int k = 0; k < n_theta; ++k) {
        g->x[k] = xn[n_theta - 1 - k];  // descending x = ascending theta
        g->wx[k] = xw[n_theta - 1 - k];
        g->theta[k] = std::acos(g->x[k]);
    }

    g->phi.resize(n_phi);
    for (int l = 0; l < n_phi; ++l) g->phi[l] = 2.0 * kPi * l / n_phi;
    g->wphi = 2.0 * kPi / n_phi;

    // 4th-order first-derivative stencils: 5-point windows, one-sided at the ends.
    auto make_stencils = [](const std::vector<double>& nodes) {
        const int n = int(nodes.size());
        const int width = std::min(5, n);
        std::vector<Grid::Stencil> st(n);
        for (int i = 0; i < n; ++i) {
            int lo = std::clamp(i - width / 2, 0, n - width);
            std::vector<double> window(nodes.begin() + lo, nodes.begin() + lo + width);
            st[i].lo = lo;
            st[i].w = fd_weights(nodes[i], window, 1);
        }
        return st;
    };
    g->stencil_R = make_stencils(g->R);
    g->stencil_theta = make_stencils(g->theta);

    const double hp = 2.0 * kPi / n_phi;
    g->stencil_phi = {1.0 / (12.0 * hp), -8.0 / (12.0 * hp), 0.0, 8.0 / (12.0 * hp),
                      -1.0 / (12.0 * hp)};

    return g;
}

double integrate_scalar(const Grid& g, const std::vector<double>& f, Chart weights) {
    if (f.size() != g.n_nodes())
        throw StructuralError("integrate_scalar: field size does not match grid");
    double acc = 0.0;
    for (int j = 0; j < g.n_r; ++j)
        for (int k = 0; k < g.n_theta; ++k) {
            const double wjk = weights == Chart::Sigma ? g.weight_flat(j, k, 0)
                                                       : g.weight_round(j, k, 0);
            double row = 0.0;
            const double* p = f.data() + g.node(j, k, 0);
            for (int l = 0; l < g.n_phi; ++l) row += p[l];
            acc += wjk * row;
        }
    return acc;
}

}  // namespace yma
