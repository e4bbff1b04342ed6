#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "yma/forms.hpp"

using namespace yma;

namespace {
constexpr double kPi = 3.14159265358979323846;

LieForm random_form(std::shared_ptr<const Grid> g, int degree, GroupTag group, unsigned seed,
                    double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amp, amp);
    LieForm w = make_form(g, degree, Chart::Sigma, group);
    for (int c = 0; c < w.n_comps(); ++c) {
        const double a0 = u(rng), a1 = u(rng), a2 = u(rng), wdt = 1.0 + std::fabs(u(rng));
        fill_component(w, c, [=](double r, double t, double p) {
            const double radial = std::exp(-r * r / (wdt * wdt));
            const double ang = a0 + a1 * std::cos(t) + a2 * std::sin(t) * std::cos(p);
            AlgebraElement x = AlgebraElement::zero(group);
            x.c[0] = radial * ang;
            if (group == GroupTag::SU2) {
                x.c[1] = radial * a1 * std::sin(t) * std::sin(p);
                x.c[2] = radial * a2 * std::cos(t);
            }
            return x;
        });
    }
    return w;
}
}  // namespace

TEST_CASE("exterior derivative basics") {
    auto g = build_grid(32, 16, 16);

    LieForm c = make_form(g, 0, Chart::Sigma, GroupTag::U1);
    fill_component(c, 0, [](double, double, double) { return AlgebraElement::u1(0.7); });
    CHECK(exterior_derivative(c).max_abs() < 1e-12);

    // f(r) dr is closed
    LieForm w = make_form(g, 1, Chart::Sigma, GroupTag::U1);
    fill_component(w, 0, [](double r, double, double) { return AlgebraElement::u1(std::exp(-r)); });
    CHECK(exterior_derivative(w).max_abs() < 1e-11);

    CHECK_THROWS_AS(exterior_derivative(make_form(g, 3, Chart::Sigma, GroupTag::U1)),
                    DomainError);
}

TEST_CASE("exterior derivative matches the symbolic oracle") {
    // d(r^2 sin t dt^dp) = 2 r sin t dr^dt^dp, compared where the
    // R-parametrization of r^2 is gentle; error drops at 4th order.
    auto err_at = [](int n) {
        auto g = build_grid(n, 16, 16);
        LieForm w = make_form(g, 2, Chart::Sigma, GroupTag::U1);
        fill_component(w, 2, [](double r, double t, double) {
            return AlgebraElement::u1(r * r * std::sin(t));
        });
        LieForm d = exterior_derivative(w);
        double max_rel = 0.0;
        for (int j = 0; j < g->n_r; ++j) {
            if (g->r[j] > 2.0) continue;
            for (int k = 0; k < g->n_theta; ++k)
                for (int l = 0; l < g->n_phi; ++l) {
                    const double exact = 2.0 * g->r[j] * std::sin(g->theta[k]);
                    const double got = d.get(0, g->node(j, k, l)).c[0];
                    max_rel = std::max(max_rel, std::fabs(got - exact) / (1.0 + std::fabs(exact)));
                }
        }
        return max_rel;
    };
    const double e1 = err_at(48), e2 = err_at(96);
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 > 10.0);
}

TEST_CASE("d of d vanishes identically on the tensor grid") {
    auto g = build_grid(16, 8, 8);
    for (int degree : {0, 1}) {
        LieForm w = random_form(g, degree, GroupTag::SU2, 101 + degree);
        LieForm dd = exterior_derivative(exterior_derivative(w));
        CHECK(dd.max_abs() < 1e-11 * std::max(1.0, w.max_abs()));
    }
}

TEST_CASE("abelian Bianchi identity dF = 0") {
    auto g = build_grid(16, 8, 8);
    LieForm a = random_form(g, 1, GroupTag::U1, 7);
    CHECK(exterior_derivative(curvature(a)).max_abs() < 1e-11);
}

TEST_CASE("wedge_trace pairing and graded symmetry") {
    auto g = build_grid(16, 8, 8);
    LieForm zero = make_form(g, 1, Chart::Sigma, GroupTag::U1);
    LieForm e = random_form(g, 2, GroupTag::U1, 13);
    for (double v : wedge_trace(zero, e)) CHECK(v == 0.0);

    // dr paired with sin t dt^dp gives the sin t density
    LieForm dr = make_form(g, 1, Chart::Sigma, GroupTag::U1);
    fill_component(dr, 0, [](double, double, double) { return AlgebraElement::u1(1.0); });
    LieForm s = make_form(g, 2, Chart::Sigma, GroupTag::U1);
    fill_component(s, 2, [](double, double t, double) { return AlgebraElement::u1(std::sin(t)); });
    auto density = wedge_trace(dr, s);
    for (int j = 0; j < g->n_r; ++j)
        for (int k = 0; k < g->n_theta; ++k)
            CHECK(density[g->node(j, k, 0)] ==
                  doctest::Approx(std::sin(g->theta[k])).epsilon(1e-13));

    LieForm w1 = random_form(g, 1, GroupTag::SU2, 17);
    LieForm w2 = random_form(g, 2, GroupTag::SU2, 19);
    CHECK(integrate_wedge_trace(w1, w2) ==
          doctest::Approx(integrate_wedge_trace(w2, w1)).epsilon(1e-12));

    CHECK_THROWS_AS(wedge_trace(w1, random_form(g, 1, GroupTag::SU2, 23)), StructuralError);
}

TEST_CASE("hodge star against the metric oracle") {
    auto g = build_grid(16, 8, 8);

    LieForm one = make_form(g, 0, Chart::Sigma, GroupTag::U1);
    fill_component(one, 0, [](double, double, double) { return AlgebraElement::u1(1.0); });
    LieForm vol = hodge(one, Metric::FlatSigma);
    for (int j = 0; j < g->n_r; ++j)
        for (int k = 0; k < g->n_theta; ++k) {
            const double expect = g->r[j] * g->r[j] * std::sin(g->theta[k]);
            CHECK(vol.get(0, g->node(j, k, 0)).c[0] == doctest::Approx(expect).epsilon(1e-13));
        }

    LieForm dr = make_form(g, 1, Chart::Sigma, GroupTag::U1);
    fill_component(dr, 0, [](double, double, double) { return AlgebraElement::u1(1.0); });
    LieForm sdr = hodge(dr, Metric::FlatSigma);
    for (int j = 0; j < g->n_r; ++j)
        for (int k = 0; k < g->n_theta; ++k) {
            const double expect = g->r[j] * g->r[j] * std::sin(g->theta[k]);
            CHECK(sdr.get(2, g->node(j, k, 0)).c[0] == doctest::Approx(expect).epsilon(1e-13));
            CHECK(sdr.get(0, g->node(j, k, 0)).c[0] == 0.0);
        }

    for (int degree : {0, 1, 2, 3}) {
        LieForm w = random_form(g, degree, GroupTag::SU2, 31 + degree);
        LieForm ss = hodge(hodge(w, Metric::FlatSigma), Metric::FlatSigma);
        CHECK((ss - w).max_abs() < 1e-10 * std::max(1.0, w.max_abs()));
    }

    CHECK_THROWS_AS(hodge(dr, Metric::RoundSigmaHat), StructuralError);
}

TEST_CASE("hodge isometry of the pairing") {
    auto g = build_grid(16, 8, 8);
    LieForm w = random_form(g, 1, GroupTag::SU2, 37);
    LieForm sw = hodge(w, Metric::FlatSigma);
    LieForm ssw = hodge(sw, Metric::FlatSigma);
    CHECK(integrate_wedge_trace(w, sw) ==
          doctest::Approx(integrate_wedge_trace(sw, ssw)).epsilon(1e-10));
}

TEST_CASE("curvature examples") {
    auto g = build_grid(48, 12, 12);
    LieForm zero = make_form(g, 1, Chart::Sigma, GroupTag::SU2);
    CHECK(curvature(zero).max_abs() == 0.0);

    // U1: A = f(r) dp -> F = f'(r) dr^dp, with 4th-order convergence
    auto err_at = [](int n) {
        auto gg = build_grid(n, 12, 12);
        LieForm a = make_form(gg, 1, Chart::Sigma, GroupTag::U1);
        fill_component(a, 2, [](double r, double, double) {
            return AlgebraElement::u1(std::exp(-r * r));
        });
        LieForm f = curvature(a);
        double max_err = 0.0;
        for (int j = 0; j < gg->n_r; ++j) {
            const double exact = -2.0 * gg->r[j] * std::exp(-gg->r[j] * gg->r[j]);
            max_err = std::max(max_err, std::fabs(f.get(1, gg->node(j, 4, 3)).c[0] - exact));
        }
        return max_err;
    };
    const double e1 = err_at(48), e2 = err_at(96);
    CHECK(e1 < 1e-4);
    CHECK(e1 / e2 > 10.0);
    {
        auto gg = build_grid(48, 12, 12);
        LieForm a = make_form(gg, 1, Chart::Sigma, GroupTag::U1);
        fill_component(a, 2, [](double r, double, double) {
            return AlgebraElement::u1(std::exp(-r * r));
        });
        CHECK(curvature(a).comp(0)[gg->node(5, 5, 5)] == doctest::Approx(0.0));
    }
}

TEST_CASE("covariant derivative") {
    auto g = build_grid(16, 8, 8);

    LieForm a = random_form(g, 1, GroupTag::SU2, 41);
    LieForm zero = make_form(g, 0, Chart::Sigma, GroupTag::SU2);
    CHECK(covariant_derivative(a, zero).max_abs() == 0.0);

    LieForm w = random_form(g, 1, GroupTag::SU2, 43);
    LieForm nozero = make_form(g, 1, Chart::Sigma, GroupTag::SU2);
    LieForm d1 = covariant_derivative(nozero, w);
    LieForm d2 = exterior_derivative(w);
    CHECK((d1 - d2).max_abs() == 0.0);

    // constant xi, constant A: D_A xi = [A, xi] pointwise
    const AlgebraElement A0 = AlgebraElement::su2(0.3, -0.1, 0.5);
    const AlgebraElement X0 = AlgebraElement::su2(-0.2, 0.7, 0.1);
    LieForm ca = make_form(g, 1, Chart::Sigma, GroupTag::SU2);
    fill_component(ca, 1, [&](double, double, double) { return A0; });
    LieForm cx = make_form(g, 0, Chart::Sigma, GroupTag::SU2);
    fill_component(cx, 0, [&](double, double, double) { return X0; });
    LieForm dx = covariant_derivative(ca, cx);
    const AlgebraElement expect = bracket(A0, X0);
    const std::size_t probe = g->node(7, 3, 2);
    CHECK((dx.get(1, probe) - expect).norm() < 1e-11);
    CHECK(dx.get(0, probe).norm() < 1e-11);
}

TEST_CASE("l2 norms") {
    auto g = build_grid(64, 8, 8);
    LieForm zero = make_form(g, 1, Chart::Sigma, GroupTag::U1);
    CHECK(l2_norm_sq(zero, Metric::FlatSigma) == 0.0);

    // || e^{-r} dr ||^2 = 4 pi int e^{-2r} r^2 dr = pi
    LieForm w = make_form(g, 1, Chart::Sigma, GroupTag::U1);
    fill_component(w, 0, [](double r, double, double) { return AlgebraElement::u1(std::exp(-r)); });
    CHECK(l2_norm_sq(w, Metric::FlatSigma) == doctest::Approx(kPi).epsilon(1e-5));

    LieForm w3 = 3.0 * w;
    CHECK(l2_norm_sq(w3, Metric::FlatSigma) ==
          doctest::Approx(9.0 * l2_norm_sq(w, Metric::FlatSigma)).epsilon(1e-12));
}

TEST_CASE("conformal reweight directions and round trip") {
    auto g = build_grid(16, 8, 8);

    // scalars carry no radial index
    LieForm s = make_form(g, 0, Chart::SigmaHat, GroupTag::U1);
    fill_component(s, 0, [](double r, double, double) { return AlgebraElement::u1(1.0 / (1 + r)); });
    LieForm sp = conformal_reweight(s, ReweightDirection::ToSigma);
    CHECK((sp - [&] { LieForm t = s; t.chart = Chart::Sigma; return t; }()).max_abs() == 0.0);

    // pulling a 1-form back to Sigma multiplies the radial component by K
    LieForm ah = make_form(g, 1, Chart::SigmaHat, GroupTag::U1);
    fill_component(ah, 0, [](double, double t, double) { return AlgebraElement::u1(std::cos(t)); });
    fill_component(ah, 1, [](double, double t, double) { return AlgebraElement::u1(std::sin(t)); });
    LieForm al = conformal_reweight(ah, ReweightDirection::ToSigma);
    const std::size_t probe = g->node(9, 3, 2);
    const int j = 9;
    CHECK(al.get(0, probe).c[0] ==
          doctest::Approx(g->K[j] * ah.get(0, probe).c[0]).epsilon(1e-14));
    CHECK(al.get(1, probe).c[0] == doctest::Approx(ah.get(1, probe).c[0]));

    // 2-form: (theta phi) invariant, radial-index pairs gain K going to Sigma
    LieForm fh = random_form(g, 2, GroupTag::SU2, 47);
    fh.chart = Chart::SigmaHat;
    LieForm fl = conformal_reweight(fh, ReweightDirection::ToSigma);
    CHECK(fl.get(2, probe).c[1] == doctest::Approx(fh.get(2, probe).c[1]));
    CHECK(fl.get(0, probe).c[1] == doctest::Approx(g->K[j] * fh.get(0, probe).c[1]));

    // round trip inverts to within one rounding step per component
    LieForm back = conformal_reweight(fl, ReweightDirection::ToSigmaHat);
    CHECK((back - fh).max_abs() < 4e-16 * std::max(1.0, fh.max_abs()));
}

TEST_CASE("falloff estimation") {
    auto g = build_grid(48, 8, 8);

    LieForm p2 = make_form(g, 0, Chart::Sigma, GroupTag::U1);
    fill_component(p2, 0, [](double r, double, double) { return AlgebraElement::u1(1.0 / (r * r)); });
    auto fit = estimate_falloff(p2, 0);
    CHECK(fit.tag == DecayTag::PowerLaw);
    CHECK(fit.exponent == doctest::Approx(-2.0).epsilon(0.01));

    LieForm ex = make_form(g, 0, Chart::Sigma, GroupTag::U1);
    fill_component(ex, 0, [](double r, double, double) { return AlgebraElement::u1(std::exp(-r)); });
    CHECK(estimate_falloff(ex, 0).tag == DecayTag::FasterThanAnyPower);

    LieForm osc = make_form(g, 0, Chart::Sigma, GroupTag::U1);
    fill_component(osc, 0, [](double r, double, double) { return AlgebraElement::u1(std::sin(r)); });
    auto ofit = estimate_falloff(osc, 0);
    CHECK(ofit.tag == DecayTag::NoPowerLaw);
    CHECK(ofit.residual > 0.1);

    LieForm z = make_form(g, 0, Chart::Sigma, GroupTag::U1);
    CHECK(estimate_falloff(z, 0).tag == DecayTag::FasterThanAnyPower);
}

TEST_CASE("pullbacks of boundary-vanishing forms are square integrable") {
    auto g = build_grid(192, 12, 12);
    LieForm ah = make_form(g, 1, Chart::SigmaHat, GroupTag::U1);
    auto vanish = [](double r, double t, double) {
        const double R = ConformalChart::r_to_R(r);
        return AlgebraElement::u1(std::sin(R) * (1.0 + 0.5 * std::cos(t)));
    };
    fill_component(ah, 0, vanish);
    fill_component(ah, 1, vanish);
    LieForm a = conformal_reweight(ah, ReweightDirection::ToSigma);

    // partial norms: against the flat metric, cut at r <= rc and r <= 2 rc
    LieForm sa = hodge(a, Metric::FlatSigma);
    auto density = wedge_trace(a, sa);
    auto partial = [&](double rc) {
        double acc = 0.0;
        for (int j = 0; j < g->n_r; ++j) {
            if (g->r[j] > rc) break;
            for (int k = 0; k < g->n_theta; ++k) {
                const double w = g->weight_coordinate(j, k, 0, Chart::Sigma);
                for (int l = 0; l < g->n_phi; ++l) acc += w * density[g->node(j, k, l)];
            }
        }
        return acc;
    };
    const double rmax = g->r[g->n_r - 1];
    const double half = partial(rmax / 2.0);
    const double full = partial(rmax);
    CHECK(full > 0.0);
    CHECK((full - half) / full < 0.01);
}

TEST_CASE("shell and boundary integrals") {
    auto g = build_grid(32, 12, 12);
    // 2-form with (theta phi) component q sin t: every shell integrates to 4 pi q
    const double q = 1.25;
    LieForm e = make_form(g, 2, Chart::Sigma, GroupTag::U1);
    fill_component(e, 2, [&](double, double t, double) { return AlgebraElement::u1(q * std::sin(t)); });
    for (int j : {5, 16, 31})
        CHECK(shell_integral(e, j).c[0] == doctest::Approx(4.0 * kPi * q).epsilon(1e-12));
    CHECK(boundary_integral(e).c[0] == doctest::Approx(4.0 * kPi * q).epsilon(1e-10));
}
