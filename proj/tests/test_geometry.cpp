#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "yma/geometry.hpp"

using namespace yma;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> sample(const Grid& g, double (*f)(double, double, double)) {
    std::vector<double> out(g.n_nodes());
    for (int j = 0; j < g.n_r; ++j)
        for (int k = 0; k < g.n_theta; ++k)
            for (int l = 0; l < g.n_phi; ++l)
                out[g.node(j, k, l)] = f(g.r[j], g.theta[k], g.phi[l]);
    return out;
}
}  // namespace

TEST_CASE("chart point values") {
    CHECK(ConformalChart::r_to_R(1.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(ConformalChart::conformal_factor(0.0) == doctest::Approx(2.0));
    CHECK(ConformalChart::conformal_factor(1.0) == doctest::Approx(1.0));
    CHECK(ConformalChart::boundary_coordinate(1.0) == doctest::Approx(kPi / 2));
    CHECK(ConformalChart::boundary_coordinate(100.0) ==
          doctest::Approx(0.019999333373327).epsilon(1e-12));
    CHECK(ConformalChart::conformal_factor_spacetime(0.0, 3.0) ==
          doctest::Approx(ConformalChart::conformal_factor(3.0)));
    CHECK_THROWS_AS(ConformalChart::r_to_R(0.0), DomainError);
    CHECK_THROWS_AS(ConformalChart::r_to_R(-1.0), DomainError);
}

TEST_CASE("chart identities across 1e4 log-spaced radii") {
    double max_rt = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double r = std::pow(10.0, -6.0 + 9.0 * i / 9999.0);
        const double back = ConformalChart::R_to_r(ConformalChart::r_to_R(r));
        max_rt = std::max(max_rt, std::fabs(back - r) / r);
        // K (1 + r^2) = 2 exactly
        CHECK(ConformalChart::conformal_factor(r) * (1.0 + r * r) == doctest::Approx(2.0));
    }
    CHECK(max_rt < 1e-12);

    // monotone increasing R, K decreasing, K r^2 -> 2
    CHECK(ConformalChart::r_to_R(2.0) > ConformalChart::r_to_R(1.0));
    CHECK(ConformalChart::conformal_factor(2.0) < ConformalChart::conformal_factor(1.0));
    CHECK(ConformalChart::conformal_factor(1e7) * 1e14 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(ConformalChart::r_to_R(1e12) == doctest::Approx(kPi));
}

TEST_CASE("boundary coordinate asymptotics") {
    for (int i = 0; i < 200; ++i) {
        const double r = std::pow(10.0, 1.0 + 5.0 * i / 199.0);
        const double rho = ConformalChart::boundary_coordinate(r);
        CHECK(std::fabs(rho - 2.0 / r) <= 1.0 / (r * r * r));
    }
}

TEST_CASE("grid construction guards") {
    CHECK_THROWS_AS(build_grid(4, 8, 8), DomainError);
    CHECK_THROWS_AS(build_grid(8, 4, 8), DomainError);
    CHECK_THROWS_AS(build_grid(8, 8, 9), DomainError);
    auto g = build_grid(8, 8, 8);
    CHECK(g->n_nodes() == 512);
    CHECK(g->R.front() > 0.0);
    CHECK(g->R.back() < kPi);
    CHECK(g->theta.front() > 0.0);
    CHECK(g->theta.back() < kPi);
    for (double w : g->wR) CHECK(w > 0.0);
    for (double w : g->wx) CHECK(w > 0.0);
}

TEST_CASE("volume oracles") {
    auto g = build_grid(48, 24, 16);

    // round volume of the compactified space: 2 pi^2
    std::vector<double> one(g->n_nodes(), 1.0);
    CHECK(integrate_scalar(*g, one, Chart::SigmaHat) ==
          doctest::Approx(2.0 * kPi * kPi).epsilon(1e-8));

    // Gaussian over flat space: pi^(3/2)
    auto gauss = sample(*g, [](double r, double, double) { return std::exp(-r * r); });
    CHECK(integrate_scalar(*g, gauss, Chart::Sigma) ==
          doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-8));

    // 4 pi * int r^2 (1+r^2)^-2 dr = pi^2
    auto lor = sample(*g, [](double r, double, double) {
        const double d = 1.0 + r * r;
        return 1.0 / (d * d);
    });
    CHECK(integrate_scalar(*g, lor, Chart::Sigma) == doctest::Approx(kPi * kPi).epsilon(1e-10));

    // zero integrates to zero
    std::vector<double> zero(g->n_nodes(), 0.0);
    CHECK(integrate_scalar(*g, zero, Chart::Sigma) == 0.0);
}

TEST_CASE("linearity and outer-support behavior") {
    auto g = build_grid(16, 8, 8);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> f(g->n_nodes()), h(g->n_nodes());
    for (auto& v : f) v = u(rng);
    for (auto& v : h) v = u(rng);
    const double a = 1.7, b = -0.3;
    std::vector<double> comb(g->n_nodes());
    for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = a * f[i] + b * h[i];
    const double lhs = integrate_scalar(*g, comb, Chart::Sigma);
    const double rhs = a * integrate_scalar(*g, f, Chart::Sigma) +
                       b * integrate_scalar(*g, h, Chart::Sigma);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    // a field supported strictly outside the outermost node radius vanishes on the grid
    const double rmax = g->r[g->n_r - 1];
    std::vector<double> outer(g->n_nodes(), 0.0);
    for (int j = 0; j < g->n_r; ++j)
        if (g->r[j] > rmax * 2.0)
            for (int k = 0; k < g->n_theta; ++k)
                for (int l = 0; l < g->n_phi; ++l) outer[g->node(j, k, l)] = 1.0;
    CHECK(integrate_scalar(*g, outer, Chart::Sigma) == 0.0);
}

TEST_CASE("quadrature converges at order >= 2 under doubling") {
    const double exact = std::pow(kPi, 1.5);
    double prev = 0.0;
    std::vector<double> errs;
    for (int n : {16, 32, 64}) {
        auto g = build_grid(n, 8, 8);
        auto f = sample(*g, [](double r, double, double) { return std::exp(-r * r); });
        errs.push_back(std::fabs(integrate_scalar(*g, f, Chart::Sigma) - exact));
        (void)prev;
    }
    CHECK(errs[0] / errs[1] >= 4.0);
    CHECK(errs[1] / errs[2] >= 4.0);
}

TEST_CASE("flat weights equal K^-3 times round weights") {
    auto g = build_grid(32, 16, 8);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> f(g->n_nodes());
    for (auto& v : f) v = u(rng);
    std::vector<double> fk(g->n_nodes());
    for (int j = 0; j < g->n_r; ++j) {
        const double k3 = std::pow(g->K[j], -3);
        for (int k = 0; k < g->n_theta; ++k)
            for (int l = 0; l < g->n_phi; ++l) fk[g->node(j, k, l)] = k3 * f[g->node(j, k, l)];
    }
    CHECK(integrate_scalar(*g, f, Chart::Sigma) ==
          doctest::Approx(integrate_scalar(*g, fk, Chart::SigmaHat)).epsilon(1e-12));
}

TEST_CASE("derivative stencils are 4th order") {
    auto g = build_grid(32, 16, 16);
    const std::size_t n = g->n_nodes();
    std::vector<double> f(n), dr(n), dt(n), dp(n);
    for (int j = 0; j < g->n_r; ++j)
        for (int k = 0; k < g->n_theta; ++k)
            for (int l = 0; l < g->n_phi; ++l)
                f[g->node(j, k, l)] =
                    std::sin(g->R[j]) * std::cos(g->theta[k]) * std::sin(g->phi[l]);
    g->deriv_R(f.data(), dr.data(), 1);
    g->deriv_theta(f.data(), dt.data(), 1);
    g->deriv_phi(f.data(), dp.data(), 1);
    double er = 0, et = 0, ep = 0;
    for (int j = 0; j < g->n_r; ++j)
        for (int k = 0; k < g->n_theta; ++k)
            for (int l = 0; l < g->n_phi; ++l) {
                const auto i = g->node(j, k, l);
                er = std::max(er, std::fabs(dr[i] - std::cos(g->R[j]) * std::cos(g->theta[k]) *
                                                        std::sin(g->phi[l])));
                et = std::max(et, std::fabs(dt[i] + std::sin(g->R[j]) * std::sin(g->theta[k]) *
                                                        std::sin(g->phi[l])));
                ep = std::max(ep, std::fabs(dp[i] - std::sin(g->R[j]) * std::cos(g->theta[k]) *
                                                        std::cos(g->phi[l])));
            }
    CHECK(er < 5e-5);
    CHECK(et < 5e-4);
    CHECK(ep < 5e-3);
}

TEST_CASE("extrapolation to rho = 0 reproduces polynomials") {
    std::vector<double> rho{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
    std::vector<double> v(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
        v[i] = 3.0 - 2.0 * rho[i] + 0.5 * rho[i] * rho[i] - rho[i] * rho[i] * rho[i];
    CHECK(extrapolate_to_zero(rho, v) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("gauss-legendre sanity") {
    std::vector<double> xs, ws;
    gauss_legendre(12, xs, ws);
    double s0 = 0, s2 = 0;
    for (int i = 0; i < 12; ++i) {
        s0 += ws[i];
        s2 += ws[i] * xs[i] * xs[i];
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}
