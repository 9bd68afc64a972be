#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "cmcfol/jets.hpp"

using cmcfol::Jet;
using cmcfol::compose;
using cmcfol::recip;

TEST_CASE("polynomial jets reproduce exact Taylor data") {
    const double x0 = 0.37, y0 = -0.81;
    Jet x = Jet::variable(x0, 0);
    Jet y = Jet::variable(y0, 1);
    Jet u = x + 2.0 * y + 0.5;
    Jet p = u * u * u * u;

    const double ub = x0 + 2.0 * y0 + 0.5;
    auto fall = [](int n, int k) {
        double r = 1.0;
        for (int i = 0; i < k; ++i) r *= n - i;
        return r;
    };
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b) {
            double pow2 = 1.0;
            for (int i = 0; i < b; ++i) pow2 *= 2.0;
            const int k = a + b;
            double expect = fall(4, k) * pow2;
            for (int i = 0; i < 4 - k; ++i) expect *= ub;
            REQUIRE(p.deriv(a, b) == Catch::Approx(expect).margin(1e-12));
        }
}

TEST_CASE("reciprocal and sqrt jets match closed form derivatives") {
    const double x0 = 0.4, y0 = 0.9;
    Jet x = Jet::variable(x0, 0);
    Jet y = Jet::variable(y0, 1);
    Jet u = 1.0 + x * x + y * y;
    const double uv = 1.0 + x0 * x0 + y0 * y0;

    Jet r = recip(u);
    REQUIRE(r.value() == Catch::Approx(1.0 / uv));
    REQUIRE(r.deriv(1, 0) == Catch::Approx(-2.0 * x0 / (uv * uv)));
    REQUIRE(r.deriv(2, 0) ==
            Catch::Approx(-2.0 / (uv * uv) + 8.0 * x0 * x0 / (uv * uv * uv)));
    REQUIRE(r.deriv(1, 1) == Catch::Approx(8.0 * x0 * y0 / (uv * uv * uv)));

    Jet s = cmcfol::sqrt(u);
    REQUIRE(s.value() == Catch::Approx(std::sqrt(uv)));
    REQUIRE(s.deriv(1, 0) == Catch::Approx(x0 / std::sqrt(uv)));
    REQUIRE(s.deriv(0, 2) ==
            Catch::Approx(1.0 / std::sqrt(uv) - y0 * y0 / std::pow(uv, 1.5)));
    REQUIRE((s * s - u).deriv(2, 2) == Catch::Approx(0.0).margin(1e-13));
}

TEST_CASE("division round trips and composition is consistent") {
    Jet x = Jet::variable(1.3, 0);
    Jet y = Jet::variable(-0.2, 1);
    Jet a = 2.0 + x * y + y * y;
    Jet b = 1.5 + x * x;
    Jet q = a / b;
    Jet back = q * b - a;
    for (int i = 0; i < Jet::Size; ++i) REQUIRE(back.c[i] == Catch::Approx(0.0).margin(1e-12));

    // exp(u) * exp(-u) == 1 through the scalar-composition hook
    auto jet_exp = [](const Jet& u) {
        const double e = std::exp(u.value());
        return compose({e, e, e, e, e}, u);
    };
    Jet u = 0.3 * x + 0.7 * y * y;
    Jet one = jet_exp(u) * jet_exp(-u);
    REQUIRE(one.value() == Catch::Approx(1.0));
    for (int i = 1; i < Jet::Size; ++i) REQUIRE(one.c[i] == Catch::Approx(0.0).margin(1e-12));
}
