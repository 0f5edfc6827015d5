#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geoflow/calculus.hpp"
#include "geoflow/criteria.hpp"
#include "geoflow/derivatives.hpp"

using namespace geoflow;

namespace {

const GridSpec g64{64, DiffMode::spectral};

MetricField conformal_metric(const GridSpec& grid, double a = 0.2) {
    return MetricField::conformal(ScalarField(
        grid, [a](double x, double) { return a * std::cos(x); }));
}

// Fixed non-conformal SPD metric used across the suites.
MetricField general_metric(const GridSpec& grid) {
    return MetricField::general(
        grid, [](double x, double) { return 1.25 + 0.2 * std::cos(x); },
        [](double x, double y) { return 0.15 * std::sin(x + y); },
        [](double, double y) { return 1.1 + 0.2 * std::sin(y); });
}

} // namespace

TEST_CASE("exterior derivative on closed forms") {
    ScalarField f(g64, [](double x, double) { return std::sin(x); });
    OneFormField df = d0(f);
    ScalarField expected(g64, [](double x, double) { return std::cos(x); });
    CHECK(max_abs(df.comp_x - expected.values) < 1e-12);
    CHECK(max_abs(df.comp_y) < 1e-12);

    ScalarField fc(g64, [](double x, double y) { return std::sin(x) * std::cos(y); });
    CHECK(max_abs(d1(d0(fc))) < 1e-12 * max_abs(fc));

    OneFormField phi(g64);
    phi.comp_x = ScalarField(g64, [](double, double y) { return std::sin(y); }).values;
    TwoFormField dphi = d1(phi);
    ScalarField exp_density(g64, [](double, double y) { return -std::cos(y); });
    CHECK(max_abs(dphi.density - exp_density.values) < 1e-12);
}

TEST_CASE("hodge star on the flat torus") {
    const MetricField flat = MetricField::flat(g64);
    OneFormField dx(g64);
    dx.comp_x = Buffer2D(64, 1.0);
    OneFormField star_dx = star1(dx, flat);
    CHECK(max_abs(star_dx.comp_x) < 1e-14);
    CHECK(max_abs(star_dx.comp_y - Buffer2D(64, 1.0)) < 1e-14);

    OneFormField star2x = star1(star_dx, flat);
    CHECK(max_abs(star2x.comp_x + Buffer2D(64, 1.0)) < 1e-14); // ** = -id on 1-forms
    CHECK(max_abs(star2x.comp_y) < 1e-14);
}

TEST_CASE("star star = +-id for every metric") {
    for (const MetricField& g : {MetricField::flat(g64), conformal_metric(g64), general_metric(g64)}) {
        const ScalarField f = trig_scalar(g64, 11);
        CHECK(max_abs(star2(star0(f, g), g) - f) < 1e-12 * max_abs(f));

        const OneFormField phi = trig_oneform(g64, 12);
        const OneFormField ss = star1(star1(phi, g), g);
        CHECK(max_abs(ss + phi) < 1e-12 * max_abs(phi));

        TwoFormField alpha(g64);
        alpha.density = trig_scalar(g64, 13).values;
        CHECK(max_abs(star0(star2(alpha, g), g) - alpha) < 1e-12 * max_abs(alpha));
    }
}

TEST_CASE("conformal volume form") {
    const MetricField g = conformal_metric(g64);
    ScalarField one(g64, 1.0);
    TwoFormField mu = star0(one, g);
    ScalarField expected(g64, [](double x, double) { return std::exp(0.4 * std::cos(x)); });
    CHECK(max_abs(mu.density - expected.values) < 1e-12);
}

TEST_CASE("codifferential closed forms and adjointness") {
    const MetricField flat = MetricField::flat(g64);

    OneFormField phi(g64);
    phi.comp_x = ScalarField(g64, [](double x, double) { return std::cos(x); }).values;
    ScalarField d = delta1(phi, flat);
    ScalarField expected(g64, [](double x, double) { return std::sin(x); });
    CHECK(max_abs(d - expected) < 1e-12);

    OneFormField dxf(g64);
    dxf.comp_x = Buffer2D(64, 1.0);
    CHECK(max_abs(delta1(dxf, flat)) < 1e-13);

    for (const MetricField& g : {MetricField::flat(g64), conformal_metric(g64), general_metric(g64)}) {
        const ScalarField f = trig_scalar(g64, 21);
        const OneFormField psi = trig_oneform(g64, 22);
        const double lhs = inner_product(d0(f), psi, g);
        const double rhs = inner_product(f, delta1(psi, g), g);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * l2_norm(d0(f), g) * l2_norm(psi, g));

        TwoFormField alpha(g64);
        alpha.density = trig_scalar(g64, 23).values;
        const double lhs2 = inner_product(d1(psi), alpha, g);
        const double rhs2 = inner_product(psi, delta2(alpha, g), g);
        CHECK(std::abs(lhs2 - rhs2) <= 1e-12 * l2_norm(d1(psi), g) * l2_norm(alpha, g));
    }
}

TEST_CASE("laplacian sign convention") {
    const MetricField flat = MetricField::flat(g64);
    ScalarField f(g64, [](double x, double) { return std::sin(x); });
    CHECK(max_abs(laplacian0(f, flat) - f) < 1e-10);

    for (const MetricField& g : {MetricField::flat(g64), conformal_metric(g64), general_metric(g64)})
        CHECK(max_abs(laplacian0(ScalarField(g64, 1.0), g)) < 1e-12);

    ScalarField fc(g64, [](double x, double y) { return std::cos(x) * std::cos(y); });
    CHECK(max_abs(laplacian0(fc, flat) - 2.0 * fc) < 1e-10);
}

TEST_CASE("musical isomorphisms") {
    const MetricField flat = MetricField::flat(g64);
    OneFormField dx(g64);
    dx.comp_x = Buffer2D(64, 1.0);
    VectorField v = sharp_g(dx, flat);
    CHECK(max_abs(v.comp_x - Buffer2D(64, 1.0)) < 1e-14);
    CHECK(max_abs(v.comp_y) < 1e-14);

    VectorField w = sharp_omega(dx, flat);
    CHECK(max_abs(w.comp_x) < 1e-14);
    CHECK(max_abs(w.comp_y + Buffer2D(64, 1.0)) < 1e-14); // -J d/dx = -d/dy

    for (const MetricField& g : {MetricField::flat(g64), conformal_metric(g64), general_metric(g64)}) {
        const OneFormField phi = trig_oneform(g64, 31);
        CHECK(max_abs(flat_g(sharp_g(phi, g), g) - phi) < 1e-12 * max_abs(phi));
        CHECK(max_abs(flat_omega(sharp_omega(phi, g), g) - phi) < 1e-12 * max_abs(phi));

        // sharp_omega is a pointwise isometry
        const ScalarField n1 = oneform_pairing(phi, phi, g);
        const ScalarField n2 =
            vector_pairing(sharp_omega(phi, g), sharp_omega(phi, g), g);
        CHECK(max_abs(n1 - n2) < 1e-12 * max_abs(n1));

        // J is g(X,Y) = omega(X, JY): check J^2 = -id and isometry
        const VectorField X = trig_vector(g64, 32);
        const VectorField jjx = rotate_j(rotate_j(X, g), g);
        CHECK(max_abs(jjx + X) < 1e-12 * max_abs(X));
        CHECK(max_abs(vector_pairing(rotate_j(X, g), rotate_j(X, g), g) -
                      vector_pairing(X, X, g)) < 1e-12 * max_abs(vector_pairing(X, X, g)));
    }
}

TEST_CASE("integration and inner products, flat") {
    const MetricField flat = MetricField::flat(g64);
    CHECK(integrate(ScalarField(g64, 1.0), flat) == doctest::Approx(two_pi * two_pi).epsilon(1e-14));

    OneFormField dx(g64), dy(g64);
    dx.comp_x = Buffer2D(64, 1.0);
    dy.comp_y = Buffer2D(64, 1.0);
    CHECK(inner_product(dx, dx, flat) == doctest::Approx(two_pi * two_pi).epsilon(1e-14));
    CHECK(std::abs(inner_product(dx, dy, flat)) < 1e-14);
}

TEST_CASE("lie bracket, divergence, gradient") {
    const MetricField flat = MetricField::flat(g64);

    VectorField X(g64), Y(g64);
    X.comp_y = ScalarField(g64, [](double x, double) { return std::sin(x); }).values;
    Y.comp_x = ScalarField(g64, [](double, double y) { return std::cos(y); }).values;
    VectorField br = lie_bracket(X, Y);
    ScalarField e1(g64, [](double x, double y) { return -std::sin(x) * std::sin(y); });
    ScalarField e2(g64, [](double x, double y) { return -std::cos(x) * std::cos(y); });
    CHECK(max_abs(br.comp_x - e1.values) < 1e-12);
    CHECK(max_abs(br.comp_y - e2.values) < 1e-12);

    VectorField shear(g64);
    shear.comp_x = ScalarField(g64, [](double, double y) { return std::sin(y); }).values;
    CHECK(max_abs(divergence(shear, flat)) < 1e-13);

    for (const MetricField& g : {MetricField::flat(g64), conformal_metric(g64), general_metric(g64)}) {
        const VectorField Z = trig_vector(g64, 41);
        CHECK(std::abs(integrate(divergence(Z, g), g)) < 1e-12 * l2_norm(Z, g));
    }
}

TEST_CASE("jacobi identity at discretization tolerance") {
    const VectorField X = trig_vector(g64, 51);
    const VectorField Y = trig_vector(g64, 52);
    const VectorField Z = trig_vector(g64, 53);
    const VectorField jac = lie_bracket(X, lie_bracket(Y, Z)) +
                            lie_bracket(Y, lie_bracket(Z, X)) +
                            lie_bracket(Z, lie_bracket(X, Y));
    const double scale = max_abs(X) * max_abs(Y) * max_abs(Z);
    CHECK(max_abs(jac) < 1e-8 * scale);
}

TEST_CASE("spectral exactness for band-limited fields") {
    // trig polynomials of degree < n/2 differentiate exactly
    ScalarField f(g64, [](double x, double y) { return std::sin(5 * x) * std::cos(7 * y); });
    OneFormField df = d0(f);
    ScalarField ex(g64, [](double x, double y) { return 5 * std::cos(5 * x) * std::cos(7 * y); });
    ScalarField ey(g64, [](double x, double y) { return -7 * std::sin(5 * x) * std::sin(7 * y); });
    CHECK(max_abs(df.comp_x - ex.values) < 1e-11);
    CHECK(max_abs(df.comp_y - ey.values) < 1e-11);
}

TEST_CASE("fd4 mode keeps structural identities") {
    const GridSpec gfd{64, DiffMode::fd4};
    const MetricField g = MetricField::general(
        gfd, [](double x, double) { return 1.25 + 0.2 * std::cos(x); },
        [](double x, double y) { return 0.15 * std::sin(x + y); },
        [](double, double y) { return 1.1 + 0.2 * std::sin(y); });

    const ScalarField f = trig_scalar(gfd, 61);
    const OneFormField psi = trig_oneform(gfd, 62);
    const double lhs = inner_product(d0(f), psi, g);
    const double rhs = inner_product(f, delta1(psi, g), g);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * l2_norm(d0(f), g) * l2_norm(psi, g));
    CHECK(max_abs(d1(d0(f))) < 1e-12 * max_abs(f));

    // 4th-order accuracy, not spectral: derivative error scales with h^4
    ScalarField s(gfd, [](double x, double) { return std::sin(x); });
    ScalarField c(gfd, [](double x, double) { return std::cos(x); });
    CHECK(max_abs(d0(s).comp_x - c.values) < 1e-5);
    CHECK(max_abs(d0(s).comp_x - c.values) > 1e-9);
}

TEST_CASE("expression evaluation against closed forms") {
    ScalarField f = eval_expression("sin(x)", g64);
    CHECK(f.values(0, 0) == 0.0);
    CHECK(f.values(16, 0) == doctest::Approx(1.0).epsilon(1e-15)); // x = pi/2 at i = n/4

    CHECK(max_abs(eval_expression("1", g64) - ScalarField(g64, 1.0)) == 0.0);
    CHECK_THROWS_AS(eval_expression("sin(x", g64), ParseError);
}
