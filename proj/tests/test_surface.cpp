#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "cmcfol/surface.hpp"
#include "models.hpp"

using namespace cmcfol;

namespace {

double dot3v(const T3& a, const T3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

TEST_CASE("round sphere in flat space") {
    SphereGrid grid(16);
    GraphSurface s = GraphSurface::round(5.0);
    MetricModel flat = MetricModel::euclidean();
    SurfaceCache c = build_cache(grid, s, flat);

    REQUIRE(c.area == Catch::Approx(100.0 * pi).epsilon(1e-12));
    REQUIRE(c.area_radius == Catch::Approx(5.0).epsilon(1e-12));
    REQUIRE(c.area_e == Catch::Approx(c.area).epsilon(1e-13));
    for (int n = 0; n < grid.nnodes; ++n) {
        REQUIRE(c.H[n] == Catch::Approx(-0.4).margin(1e-12));
        REQUIRE(c.ktf2[n] == Catch::Approx(0.0).margin(1e-13));
        REQUIRE(c.mu[n] == Catch::Approx(c.mu_e[n]).margin(1e-12));
        // nu is the unit radial direction
        const T3 x = {c.X[0][n], c.X[1][n], c.X[2][n]};
        for (int a = 0; a < 3; ++a) REQUIRE(c.nu[a][n] == Catch::Approx(x[a] / 5.0).margin(1e-12));
    }
}

TEST_CASE("schwarzschild centered sphere matches the conformal closed forms") {
    SphereGrid grid(16);
    const double m = 1.0, r = 10.0;
    const double phi = 1.0 + 0.5 * m / r;
    const double Href = -(2.0 / r) * (1.0 - 0.5 * m / r) / (phi * phi * phi);
    MetricModel model = MetricModel::schwarzschild(m);
    SurfaceCache c = build_cache(grid, GraphSurface::round(r), model, 2);

    REQUIRE(Href == Catch::Approx(-0.16412954).margin(1e-8));
    REQUIRE(c.area_radius == Catch::Approx(r * phi * phi).epsilon(1e-12));
    REQUIRE(c.area_radius == Catch::Approx(11.025).epsilon(1e-12));
    double hmin = 0.0, hmax = -1.0;
    for (int n = 0; n < grid.nnodes; ++n) {
        hmin = std::min(hmin, c.H[n]);
        hmax = std::max(hmax, c.H[n]);
        REQUIRE(c.H[n] == Catch::Approx(Href).margin(1e-13));
        REQUIRE(c.ktf2[n] == Catch::Approx(0.0).margin(1e-14));
    }
    REQUIRE(hmax - hmin <= 1e-13);

    // depth-2 curvature samples: Ric(nu,nu) = -2m/rho^3 on the curvature
    // radius rho = r phi^2, and the scalar curvature vanishes
    const double rho = r * phi * phi;
    for (int n = 0; n < grid.nnodes; ++n) {
        REQUIRE(c.ricnn[n] == Catch::Approx(-2.0 * m / (rho * rho * rho)).epsilon(1e-11));
        REQUIRE(c.sbar[n] == Catch::Approx(0.0).margin(1e-11));
    }
}

TEST_CASE("cache invariants hold on a perturbed surface in a messy metric") {
    SphereGrid grid(16);
    MetricModel model = messy_model();
    GraphSurface s;
    s.center = {0.1, -0.2, 0.05};
    s.rho = 10.0;
    s.f = bumpy(grid, 0.3, 5);
    SurfaceCache c = build_cache(grid, s, model);
    const SurfaceFields F = surface_fields(grid, c.coeffs, s.rho, 2);

    std::vector<double> trk(grid.nnodes);
    for (int n = 0; n < grid.nnodes; ++n) {
        // positive definite induced metric
        REQUIRE(c.g11[n] > 0.0);
        REQUIRE(c.g11[n] * c.g22[n] - c.g12[n] * c.g12[n] > 0.0);
        REQUIRE(c.mu[n] > 0.0);

        const T3 x = {c.X[0][n], c.X[1][n], c.X[2][n]};
        const T3 nu = {c.nu[0][n], c.nu[1][n], c.nu[2][n]};
        const MetricJet J = model.jet(x, 0);
        double nn = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) nn += J.g[a][b] * nu[a] * nu[b];
        REQUIRE(nn == Catch::Approx(1.0).margin(1e-12));

        // orthogonality against freshly evaluated tangent frames
        const int i = n / grid.nlon;
        const NodeGeometry<2> G = node_geometry<2>(model, s.center, radius_jet<2>(F, n),
                                                   grid.theta[i], grid.lambda[n % grid.nlon]);
        double ot = 0.0, ol = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                ot += J.g[a][b] * nu[a] * G.Xt[b].value();
                ol += J.g[a][b] * nu[a] * G.Xl[b].value();
            }
        REQUIRE(ot == Catch::Approx(0.0).margin(1e-10));
        REQUIRE(ol == Catch::Approx(0.0).margin(1e-10));

        // H = tr k and tr kring = 0, via an independent 2x2 inversion
        const double det = c.g11[n] * c.g22[n] - c.g12[n] * c.g12[n];
        const double tr = (c.g22[n] * c.k11[n] - 2.0 * c.g12[n] * c.k12[n] + c.g11[n] * c.k22[n]) / det;
        REQUIRE(c.H[n] == Catch::Approx(tr).margin(1e-12));
        const double t11 = c.k11[n] - 0.5 * c.H[n] * c.g11[n];
        const double t12 = c.k12[n] - 0.5 * c.H[n] * c.g12[n];
        const double t22 = c.k22[n] - 0.5 * c.H[n] * c.g22[n];
        trk[n] = (c.g22[n] * t11 - 2.0 * c.g12[n] * t12 + c.g11[n] * t22) / det;
        REQUIRE(trk[n] == Catch::Approx(0.0).margin(1e-12));
        trk[n] *= c.mu[n];
    }
    REQUIRE(std::abs(grid.integrate(trk)) <= 1e-10);
}

TEST_CASE("mean curvature agrees with a dense finite-difference oracle") {
    SphereGrid grid(16);
    const double rho = 1.0;
    std::vector<double> coeffs(grid.nbasis(), 0.0);
    coeffs[grid.coef_index(1, 0, false)] = 0.1 * std::sqrt(4.0 * pi / 3.0);  // f = 0.1 nu_3
    GraphSurface s;
    s.rho = rho;
    s.f = coeffs;
    MetricModel flat = MetricModel::euclidean();
    SurfaceCache c = build_cache(grid, s, flat);

    auto embed = [&](double th, double lm) -> T3 {
        const double u = rho + grid.eval(coeffs, th, lm);
        return {u * std::sin(th) * std::cos(lm), u * std::sin(th) * std::sin(lm),
                u * std::cos(th)};
    };
    const double h = 1e-2;
    auto d1 = [&](auto g, double t) {
        return (-g(t + 2 * h) + 8.0 * g(t + h) - 8.0 * g(t - h) + g(t - 2 * h)) / (12.0 * h);
    };
    auto d2 = [&](auto g, double t) {
        return (-g(t + 2 * h) + 16.0 * g(t + h) - 30.0 * g(t) + 16.0 * g(t - h) - g(t - 2 * h)) /
               (12.0 * h * h);
    };
    auto oracle_H = [&](double th, double lm) {
        T3 Xt, Xl, Xtt, Xtl, Xll;
        for (int a = 0; a < 3; ++a) {
            auto ft = [&](double t) { return embed(t, lm)[a]; };
            auto fl = [&](double l) { return embed(th, l)[a]; };
            Xt[a] = d1(ft, th);
            Xl[a] = d1(fl, lm);
            Xtt[a] = d2(ft, th);
            Xll[a] = d2(fl, lm);
            auto fml = [&](double l) {
                auto g = [&](double t) { return embed(t, l)[a]; };
                return d1(g, th);
            };
            Xtl[a] = d1(fml, lm);
        }
        const double g11 = dot3v(Xt, Xt), g12 = dot3v(Xt, Xl), g22 = dot3v(Xl, Xl);
        T3 w = {Xt[1] * Xl[2] - Xt[2] * Xl[1], Xt[2] * Xl[0] - Xt[0] * Xl[2],
                Xt[0] * Xl[1] - Xt[1] * Xl[0]};
        const double wn = std::sqrt(dot3v(w, w));
        T3 nu = {w[0] / wn, w[1] / wn, w[2] / wn};
        if (dot3v(nu, embed(th, lm)) < 0.0)
            for (auto& v : nu) v = -v;
        const double k11 = dot3v(nu, Xtt), k12 = dot3v(nu, Xtl), k22 = dot3v(nu, Xll);
        const double det = g11 * g22 - g12 * g12;
        return (g22 * k11 - 2.0 * g12 * k12 + g11 * k22) / det;
    };

    // near-pole, mid-latitude, near-south rows
    for (int i : {0, grid.nlat / 2, grid.nlat - 1})
        for (int j : {3, 11}) {
            const int n = grid.node(i, j);
            const double Hfd = oracle_H(grid.theta[i], grid.lambda[j]);
            REQUIRE(c.H[n] == Catch::Approx(Hfd).margin(1e-6));
            REQUIRE(std::abs(c.H[n] + 2.0) <= 0.05);  // close to the round value
        }
}

TEST_CASE("euclidean center") {
    SphereGrid grid(16);

    SECTION("round sphere recovers its center") {
        GraphSurface s = GraphSurface::round(3.0, {1.0, 2.0, 3.0});
        const T3 z = euclidean_center(grid, s);
        REQUIRE(z[0] == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(z[1] == Catch::Approx(2.0).margin(1e-12));
        REQUIRE(z[2] == Catch::Approx(3.0).margin(1e-12));
    }

    SECTION("small l=1 graph moves the center to first order") {
        const double a = 1e-3;
        GraphSurface s = GraphSurface::round(1.0);
        s.f.assign(grid.nbasis(), 0.0);
        s.f[grid.coef_index(1, 0, false)] = a * std::sqrt(4.0 * pi / 3.0);
        const T3 z = euclidean_center(grid, s);
        REQUIRE(z[0] == Catch::Approx(0.0).margin(1e-8));
        REQUIRE(z[1] == Catch::Approx(0.0).margin(1e-8));
        REQUIRE(z[2] == Catch::Approx(a).margin(1e-5));
    }

    SECTION("reflection-symmetric graphs keep the center") {
        GraphSurface s = GraphSurface::round(2.0, {0.5, 0.0, -0.5});
        s.f.assign(grid.nbasis(), 0.0);
        s.f[grid.coef_index(2, 1, true)] = 0.1;
        s.f[grid.coef_index(4, 2, false)] = 0.05;
        const T3 z = euclidean_center(grid, s);
        REQUIRE(z[0] == Catch::Approx(0.5).margin(1e-12));
        REQUIRE(z[1] == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(z[2] == Catch::Approx(-0.5).margin(1e-12));
    }
}

TEST_CASE("sobolev norms on round spheres") {
    SphereGrid grid(16);
    const double sig = 7.0;
    MetricModel flat = MetricModel::euclidean();
    SurfaceCache c = build_cache(grid, GraphSurface::round(sig), flat);

    std::vector<double> one(grid.nbasis(), 0.0), nu1(grid.nbasis(), 0.0), nu3(grid.nbasis(), 0.0);
    one[0] = std::sqrt(4.0 * pi);
    nu1[grid.coef_index(1, 1, false)] = std::sqrt(4.0 * pi / 3.0);
    nu3[grid.coef_index(1, 0, false)] = std::sqrt(4.0 * pi / 3.0);

    REQUIRE(sobolev_norm(grid, c, one, 0, 2.0) == Catch::Approx(std::sqrt(4.0 * pi) * sig).epsilon(1e-12));
    REQUIRE(sobolev_norm(grid, c, one, 0, 1.0) == Catch::Approx(4.0 * pi * sig * sig).epsilon(1e-12));
    REQUIRE(sobolev_norm(grid, c, nu1, 0, 2.0) ==
            Catch::Approx(std::sqrt(4.0 * pi / 3.0) * sig).epsilon(1e-12));
    const double w12 = std::sqrt(4.0 * pi / 3.0) * sig + sig * std::sqrt(8.0 * pi / 3.0);
    REQUIRE(sobolev_norm(grid, c, nu1, 1, 2.0) == Catch::Approx(w12).epsilon(1e-11));
    const double w22 = w12 + sig * std::sqrt(8.0 * pi / 3.0);
    REQUIRE(sobolev_norm(grid, c, nu1, 2, 2.0) == Catch::Approx(w22).epsilon(1e-10));

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> c25(grid.nbasis(), 0.0);
    c25[0] = 2.5 * std::sqrt(4.0 * pi);
    REQUIRE(sobolev_norm(grid, c, c25, 1, inf) == Catch::Approx(2.5).margin(1e-12));
    double cm = 0.0;
    for (int i = 0; i < grid.nlat; ++i) cm = std::max(cm, std::abs(grid.ctheta[i]));
    REQUIRE(sobolev_norm(grid, c, nu3, 0, inf) == Catch::Approx(cm).margin(1e-13));

    // same norms on a curved round sphere: a centered Schwarzschild sphere is
    // round with curvature radius r phi^2, so the flat formulas apply with
    // sigma replaced by the area radius
    MetricModel schw = MetricModel::schwarzschild(1.0);
    SurfaceCache cs = build_cache(grid, GraphSurface::round(10.0), schw);
    const double se = cs.area_radius;
    REQUIRE(sobolev_norm(grid, cs, nu1, 1, 2.0) ==
            Catch::Approx(std::sqrt(4.0 * pi / 3.0) * se + se * std::sqrt(8.0 * pi / 3.0)).epsilon(1e-11));

    REQUIRE_THROWS_AS(sobolev_norm(grid, c, one, 3, 2.0), ConfigError);
    REQUIRE_THROWS_AS(sobolev_norm(grid, c, one, 1, 0.5), ConfigError);
}

TEST_CASE("symmetry defect in coefficient space") {
    SphereGrid grid(16);
    const double rho = 4.0;

    GraphSurface odd = GraphSurface::round(rho);
    odd.f.assign(grid.nbasis(), 0.0);
    odd.f[grid.coef_index(1, 0, false)] = std::sqrt(4.0 * pi / 3.0);  // f = nu_3
    const SymmetryDefect d1 = symmetry_defect(grid, odd);
    REQUIRE(d1.l2 == Catch::Approx(2.0 * std::sqrt(4.0 * pi / 3.0) * rho).epsilon(1e-13));
    REQUIRE(d1.h2 == Catch::Approx(d1.l2 * (1.0 + 2.0 * std::sqrt(2.0))).epsilon(1e-13));

    GraphSurface even = GraphSurface::round(rho);
    even.f.assign(grid.nbasis(), 0.0);
    even.f[grid.coef_index(2, 0, false)] = 0.7;
    even.f[grid.coef_index(4, 3, true)] = -0.2;
    const SymmetryDefect d2 = symmetry_defect(grid, even);
    REQUIRE(d2.l2 == 0.0);
    REQUIRE(d2.h2 == 0.0);

    GraphSurface mix = odd;
    mix.f[grid.coef_index(2, 0, false)] = 0.7;
    const SymmetryDefect d3 = symmetry_defect(grid, mix);
    REQUIRE(d3.l2 == Catch::Approx(d1.l2).epsilon(1e-14));
    REQUIRE(d3.h2 == Catch::Approx(d1.h2).epsilon(1e-14));

    GraphSurface twice = odd;
    twice.f[grid.coef_index(1, 0, false)] *= 2.0;
    REQUIRE(symmetry_defect(grid, twice).l2 == Catch::Approx(2.0 * d1.l2).epsilon(1e-14));
}

TEST_CASE("translation equivariance") {
    SphereGrid grid(16);
    const T3 z0 = {5.0, -3.0, 2.0};
    GraphSurface s;
    s.center = {0.2, -0.1, 0.3};
    s.rho = 8.0;
    s.f = bumpy(grid, 0.2, 4);

    MetricModel m0 = MetricModel::schwarzschild(0.9);
    MetricModel m1 = MetricModel::schwarzschild(0.9, z0);
    GraphSurface s1 = s;
    for (int a = 0; a < 3; ++a) s1.center[a] += z0[a];

    SurfaceCache c0 = build_cache(grid, s, m0);
    SurfaceCache c1 = build_cache(grid, s1, m1);
    REQUIRE(c1.area == Catch::Approx(c0.area).epsilon(1e-12));
    for (int n = 0; n < grid.nnodes; ++n) {
        REQUIRE(c1.H[n] == Catch::Approx(c0.H[n]).margin(1e-11));
        REQUIRE(c1.ktf2[n] == Catch::Approx(c0.ktf2[n]).margin(1e-11));
    }
    const T3 e0 = euclidean_center(grid, c0), e1 = euclidean_center(grid, c1);
    for (int a = 0; a < 3; ++a) REQUIRE(e1[a] - e0[a] == Catch::Approx(z0[a]).margin(1e-11));
}

TEST_CASE("concentricity report") {
    SphereGrid grid(16);
    MetricModel flat = MetricModel::euclidean();

    SECTION("centered euclidean sphere passes everything") {
        ConcentricReport r = concentric_check(grid, GraphSurface::round(5.0), flat, 0.5, 0.5, 0.5, 1.0);
        REQUIRE(std::abs(r.willmore_defect) <= 1e-10);
        REQUIRE(r.center_norm <= 1e-12);
        REQUIRE(r.all());
    }

    SECTION("schwarzschild sphere has the closed-form willmore defect") {
        const double m = 1.0, r0 = 10.0, phi = 1.05;
        MetricModel schw = MetricModel::schwarzschild(m);
        ConcentricReport r = concentric_check(grid, GraphSurface::round(r0), schw, 0.5, 0.5, 0.5, 1.0);
        const double expect = 16.0 * pi * (std::pow((1.0 - 0.5 * m / r0) / phi, 2) - 1.0);
        REQUIRE(r.willmore_defect == Catch::Approx(expect).epsilon(1e-9));
        REQUIRE(r.willmore_defect < 0.0);
        REQUIRE(r.all());
    }

    SECTION("far off-center sphere fails the center condition") {
        ConcentricReport r =
            concentric_check(grid, GraphSurface::round(5.0, {5.0, 0.0, 0.0}), flat, 0.5, 1.0, 0.5, 0.0);
        REQUIRE_FALSE(r.center_ok);
    }

    SECTION("parameter ranges are enforced") {
        GraphSurface s = GraphSurface::round(5.0);
        REQUIRE_THROWS_AS(concentric_check(grid, s, flat, 0.5, 0.0, 0.5, 1.0), ConfigError);
        REQUIRE_THROWS_AS(concentric_check(grid, s, flat, 0.5, 0.5, 1.0, 1.0), ConfigError);
        REQUIRE_THROWS_AS(concentric_check(grid, s, flat, 0.5, 0.5, 0.5, -1.0), ConfigError);
    }
}

TEST_CASE("graph and domain guards") {
    SphereGrid grid(16);
    MetricModel flat = MetricModel::euclidean();

    GraphSurface bad = GraphSurface::round(1.0);
    bad.f.assign(grid.nbasis(), 0.0);
    bad.f[0] = -1.2 * std::sqrt(4.0 * pi);  // constant offset -1.2
    REQUIRE_THROWS_AS(build_cache(grid, bad, flat), DomainError);

    MetricModel heavy = MetricModel::schwarzschild(4.0);  // r_min = 4
    REQUIRE_THROWS_AS(build_cache(grid, GraphSurface::round(3.0), heavy), DomainError);

    std::vector<double> big((grid.L + 2) * (grid.L + 2), 0.0);
    big.back() = 1.0;
    GraphSurface over = GraphSurface::round(2.0);
    over.f = big;
    REQUIRE_THROWS_AS(build_cache(grid, over, flat), ConfigError);
}

TEST_CASE("order-4 jets are consistent with the fast kernel and the transforms") {
    SphereGrid grid(24);
    MetricModel model = messy_model();
    GraphSurface s;
    s.rho = 9.0;
    s.f = bumpy(grid, 0.1, 4);
    SurfaceCache c = build_cache(grid, s, model);
    const SurfaceFields F2 = surface_fields(grid, c.coeffs, s.rho, 2);
    const SurfaceFields F4 = surface_fields(grid, c.coeffs, s.rho, 4);

    // spectral theta-derivative of the nodal H field; H is a smooth scalar
    // on the sphere, so its projection error is spectrally small
    const std::vector<double> cH = grid.analyze(c.H);
    const std::vector<double> Ht = grid.synthesize(cH, 1, 0);

    double dmax = 0.0;
    for (int n = 0; n < grid.nnodes; n += 7) {
        const int i = n / grid.nlon;
        const NodeGeometry<2> G2 = node_geometry<2>(model, s.center, radius_jet<2>(F2, n),
                                                    grid.theta[i], grid.lambda[n % grid.nlon]);
        const NodeGeometry<4> G4 = node_geometry<4>(model, s.center, radius_jet<4>(F4, n),
                                                    grid.theta[i], grid.lambda[n % grid.nlon]);
        REQUIRE(G4.H.value() == Catch::Approx(G2.H.value()).margin(1e-13));
        REQUIRE(G4.k11.value() == Catch::Approx(G2.k11.value()).margin(1e-13));
        REQUIRE(G4.g22.value() == Catch::Approx(G2.g22.value()).margin(1e-13));
        dmax = std::max(dmax, std::abs(G4.H.deriv(1, 0) - Ht[n]));
    }
    REQUIRE(dmax <= 1e-7);
}

TEST_CASE("second chart reproduces the surface") {
    SphereGrid grid(16);
    MetricModel model = MetricModel::schwarzschild(0.8);
    GraphSurface s;
    s.rho = 9.0;
    s.f = bumpy(grid, 0.15, 5);
    const T33 Q = second_chart_rotation();

    GraphSurface s2 = s;
    s2.f = rotate_field(grid, s.coeffs_on(grid), Q);

    SurfaceCache c1 = build_cache(grid, s, model);
    SurfaceCache c2 = build_cache(grid, s2, model, 1, &Q);
    REQUIRE(c2.area == Catch::Approx(c1.area).epsilon(1e-12));
    REQUIRE(c2.area_e == Catch::Approx(c1.area_e).epsilon(1e-12));
    const T3 e1 = euclidean_center(grid, c1), e2 = euclidean_center(grid, c2);
    for (int a = 0; a < 3; ++a) REQUIRE(e2[a] == Catch::Approx(e1[a]).margin(1e-11));

    // rotating twice equals rotating by Q^2 directly
    T33 Q2{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int k = 0; k < 3; ++k) Q2[a][b] += Q[a][k] * Q[k][b];
    const std::vector<double> twice = rotate_field(grid, s2.f, Q);
    const std::vector<double> direct = rotate_field(grid, s.coeffs_on(grid), Q2);
    for (int p = 0; p < grid.nbasis(); ++p)
        REQUIRE(twice[p] == Catch::Approx(direct[p]).margin(1e-11));

    // both trusted bands together cover the sphere
    int covered = 0;
    for (int i = 0; i < grid.nlat; ++i)
        if (trusted_row(grid, i)) ++covered;
    REQUIRE(covered >= grid.nlat / 2);
}

TEST_CASE("refinement leaves integral quantities fixed") {
    MetricModel model = MetricModel::schwarzschild(1.0);
    GraphSurface s;
    s.rho = 11.0;
    SphereGrid g16(16), g32(32);
    s.f = bumpy(g16, 0.05, 4);

    SurfaceCache a = build_cache(g16, s, model);
    SurfaceCache b = build_cache(g32, s, model);
    REQUIRE(b.area == Catch::Approx(a.area).epsilon(1e-11));
    REQUIRE(b.area_radius == Catch::Approx(a.area_radius).epsilon(1e-11));
    const T3 ea = euclidean_center(g16, a), eb = euclidean_center(g32, b);
    for (int q = 0; q < 3; ++q) REQUIRE(eb[q] == Catch::Approx(ea[q]).margin(1e-11));

    std::vector<double> nu1(g16.nbasis(), 0.0);
    nu1[g16.coef_index(1, 1, false)] = std::sqrt(4.0 * pi / 3.0);
    std::vector<double> nu1b(g32.nbasis(), 0.0);
    nu1b[g32.coef_index(1, 1, false)] = std::sqrt(4.0 * pi / 3.0);
    REQUIRE(sobolev_norm(g32, b, nu1b, 2, 2.0) ==
            Catch::Approx(sobolev_norm(g16, a, nu1, 2, 2.0)).epsilon(1e-10));
}
