#ifndef YMA_GEOMETRY_HPP
#define YMA_GEOMETRY_HPP

#include <cstddef>
#include <memory>
#include <vector>

#include "yma/errors.hpp"

namespace yma {

enum class Chart { Sigma, SigmaHat };

/// The conformal chart between flat space (radius r) and its compactification
/// (radius R in (0, pi)): R = 2 arctan(r), conformal factor K = 2/(1 + r^2),
/// boundary coordinate rho = pi - R.
struct ConformalChart {
    static double r_to_R(double r);
    static double R_to_r(double R);
    static double conformal_factor(double r);           // K(r), t = 0 slice
    static double conformal_factor_spacetime(double t, double r);
    static double boundary_coordinate(double r);        // rho(r) = pi - R(r)
};

/// Finite-difference weights for the m-th derivative at x0 from arbitrary nodes
/// (Fornberg's algorithm). Returns one weight per node.
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order);

/// Tensor quadrature grid on (0,pi) x (0,pi) x [0,2pi): radial nodes uniform in
/// the compactified coordinate R (midpoint-staggered), Gauss-Legendre nodes in
/// cos(theta), uniform phi. Carries weights for both the flat Sigma and round
/// SigmaHat volume elements plus 4th-order derivative stencils per axis.
struct Grid {
    Chart chart = Chart::Sigma;
    int n_r = 0, n_theta = 0, n_phi = 0;

    std::vector<double> R, r, K, rho;   // radial, size n_r
    std::vector<double> theta, x, wx;   // angular, size n_theta (theta ascending)
    std::vector<double> phi;            // size n_phi
    std::vector<double> wR;             // corrected-midpoint weights for dR
    double dR = 0.0, wphi = 0.0;

    int boundary_shell = 0;     // outermost radial layer, the boundary proxy
    int boundary_layers = 6;    // layers used for extrapolation to rho = 0

    struct Stencil {
        int lo = 0;
        std::vector<double> w;
    };
    std::vector<Stencil> stencil_R, stencil_theta;
    std::vector<double> stencil_phi;  // centered, offsets -2..2, periodic

    std::size_t n_nodes() const { return std::size_t(n_r) * n_theta * n_phi; }
    std::size_t node(int j, int k, int l) const {
        return (std::size_t(j) * n_theta + k) * n_phi + l;
    }

    /// Quadrature weight of node (j,k,l) against the flat volume element
    /// r^2 sin(theta) dr dtheta dphi.
    double weight_flat(int j, int k, int l) const;
    /// Against the round volume element sin^2(R) sin(theta) dR dtheta dphi.
    double weight_round(int j, int k, int l) const;
    /// Against the bare coordinate measure of the chart (dr or dR) dtheta dphi,
    /// for integrating 3-form coefficient densities.
    double weight_coordinate(int j, int k, int l, Chart c) const;

    /// d/dR, d/dtheta, d/dphi of a sampled function. `in`/`out` address node 0;
    /// consecutive nodes are `stride` doubles apart.
    void deriv_R(const double* in, double* out, std::ptrdiff_t stride) const;
    void deriv_theta(const double* in, double* out, std::ptrdiff_t stride) const;
    void deriv_phi(const double* in, double* out, std::ptrdiff_t stride) const;
};

std::shared_ptr<const Grid> build_grid(int n_r, int n_theta, int n_phi,
                                       Chart chart = Chart::Sigma);

/// Integrates a per-node scalar field against the flat or round volume element.
double integrate_scalar(const Grid& g, const std::vector<double>& f, Chart weights);

/// Polynomial extrapolation to rho = 0 through (rho_i, v_i) samples (Neville).
double extrapolate_to_zero(const std::vector<double>& rho, const std::vector<double>& v);

/// Gauss-Legendre nodes and weights on (-1, 1).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace yma

#endif
