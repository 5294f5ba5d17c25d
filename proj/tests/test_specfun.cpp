#include <cmath>

#include "doctest.h"
#include "foxlink/specfun.hpp"

using namespace foxlink::specfun;

TEST_CASE("log_gamma matches reference values") {
    const cplx a = log_gamma({3.0, 4.0});
    CHECK(a.real() == doctest::Approx(-1.75662678460378).epsilon(1e-13));
    CHECK(a.imag() == doctest::Approx(4.74266443803466).epsilon(1e-13));
    const cplx b = log_gamma({-2.5, 0.3});
    CHECK(b.real() == doctest::Approx(-0.432088892613202).epsilon(1e-12));
    CHECK(b.imag() == doctest::Approx(-9.09334542128974).epsilon(1e-12));
    CHECK_THROWS_AS(log_gamma({-3.0, 0.0}), SpecfunError);
    const cplx f = log_gamma_fast({-2.5, 0.3});
    CHECK(f.real() == doctest::Approx(b.real()).epsilon(1e-12));
    CHECK(std::abs(std::exp(f) - std::exp(b)) < 1e-12 * std::abs(std::exp(b)));
    const auto r = log_gamma_real(-1.5);
    CHECK(r.sign == 1);
    CHECK(std::exp(r.logAbs) == doctest::Approx(4.0 * std::sqrt(M_PI) / 3.0));
}

TEST_CASE("exponential as Meijer G") {
    MeijerGSpec g{1, 0, {}, {0.0}};
    for (double x : {0.01, 0.7, 5.0, 30.0}) {
        const auto r = meijer_g(g, x);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(std::exp(-x)).epsilon(1e-8));
    }
}

TEST_CASE("Fox H with non-unit scale") {
    // H^{1,0}_{0,1}[x | (b,B)] = x^{b/B} exp(-x^{1/B}) / B
    const double b = 0.4, B = 2.5;
    FoxHSpec h(1, 0, {}, {{b, B}});
    for (double x : {0.05, 1.0, 20.0}) {
        const double expect = std::pow(x, b / B) * std::exp(-std::pow(x, 1.0 / B)) / B;
        CHECK(fox_h(h, x).value == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("Bessel K identity") {
    // G^{2,0}_{0,2}[x | a, b] = 2 x^{(a+b)/2} K_{a-b}(2 sqrt x)
    MeijerGSpec g{2, 0, {}, {0.5, 0.2}};
    const double x = 2.3;
    const double expect = 2.0 * std::pow(x, 0.35) * std::cyl_bessel_k(0.3, 2.0 * std::sqrt(x));
    CHECK(expect == doctest::Approx(0.0906698205144449).epsilon(1e-12));
    CHECK(meijer_g(g, x).value == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("general Meijer G against reference") {
    MeijerGSpec g{2, 1, {0.3}, {0.1, 1.2, 0.4}};
    CHECK(meijer_g(g, 0.8).value == doctest::Approx(0.256390618959602).epsilon(1e-8));
    CHECK(meijer_g(g, 40.0).value == doctest::Approx(-0.00829156789095741).epsilon(1e-7));
}

TEST_CASE("rational Meijer G with a right pole family") {
    MeijerGSpec g{1, 1, {0.0}, {0.0}};
    for (double x : {0.1, 1.0, 9.0}) CHECK(meijer_g(g, x).value == doctest::Approx(1.0 / (1.0 + x)).epsilon(1e-8));
}

TEST_CASE("contour errors") {
    CHECK_THROWS_AS(FoxHSpec(1, 1, {{1.5, 1.0}}, {{0.0, 1.0}}), ContourError);
    CHECK_THROWS_AS(FoxHSpec(2, 0, {}, {{0.0, -1.0}}), ContourError);
    FoxHSpec ok(1, 0, {}, {{0.0, 1.0}});
    ContourSpec c;
    c.realPartS = -0.5;
    CHECK_THROWS_AS(fox_h(ok, 1.0, c), ContourError);
}

TEST_CASE("residue series and leading terms") {
    FoxHSpec e(1, 0, {}, {{0.0, 1.0}});
    const auto s = residue_series(e, 1.3);
    CHECK(s.converged);
    CHECK(s.value == doctest::Approx(std::exp(-1.3)).epsilon(1e-10));

    MeijerGSpec g{2, 1, {0.3}, {0.1, 1.2, 0.4}};
    CHECK(residue_series(g.toFox(), 0.8).value == doctest::Approx(0.256390618959602).epsilon(1e-9));

    const auto lt = leading_term(MeijerGSpec{2, 0, {}, {0.5, 0.2}}.toFox());
    CHECK(lt.exponent == doctest::Approx(0.2));
    CHECK(lt.coefficient == doctest::Approx(std::tgamma(0.3)));

    const auto terms = residue_terms(MeijerGSpec{2, 0, {}, {0.5, 0.2}}.toFox(), 1.25);
    REQUIRE(terms.size() == 3);
    CHECK(terms[1].exponent == doctest::Approx(0.5));
    CHECK(terms[2].exponent == doctest::Approx(1.2));

    CHECK_THROWS_AS(residue_series(MeijerGSpec{2, 0, {}, {0.0, 1.0}}.toFox(), 0.5), CoincidingPoleError);
    CHECK_THROWS_AS(leading_term(MeijerGSpec{2, 0, {}, {0.3, 0.3}}.toFox()), CoincidingPoleError);
}

TEST_CASE("bivariate with a coupling Gamma") {
    // (2 pi i)^-2 int int G(s) G(t) G(a-s-t) x^-s y^-t = G(a) (1+x+y)^-a
    BivariateFoxHSpec b;
    b.kernelS = FoxHSpec(1, 0, {}, {{0.0, 1.0}});
    b.kernelT = FoxHSpec(1, 0, {}, {{0.0, 1.0}});
    b.jointNumerator = {{1.7, -1.0, -1.0}};
    for (auto [x, y] : {std::pair{0.5, 0.8}, std::pair{3.0, 0.05}, std::pair{20.0, 40.0}}) {
        const auto r = fox_h_bivariate(b, x, y);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(std::tgamma(1.7) * std::pow(1.0 + x + y, -1.7)).epsilon(1e-6));
    }
}

TEST_CASE("bivariate without coupling factorises") {
    BivariateFoxHSpec b;
    b.kernelS = MeijerGSpec{2, 0, {}, {0.5, 0.2}}.toFox();
    b.kernelT = MeijerGSpec{1, 1, {0.0}, {0.0}}.toFox();
    const auto r = fox_h_bivariate(b, 2.3, 0.4);
    CHECK(r.value == doctest::Approx(0.0906698205144449 / 1.4).epsilon(1e-6));
}

TEST_CASE("bivariate contour infeasibility") {
    BivariateFoxHSpec b;
    b.kernelS = FoxHSpec(1, 0, {}, {{0.0, 1.0}});
    b.kernelT = FoxHSpec(1, 0, {}, {{0.0, 1.0}});
    b.jointNumerator = {{-0.5, -1.0, -1.0}};
    CHECK_THROWS_AS(b.validate(), ContourError);
}
