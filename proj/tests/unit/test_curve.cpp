#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "steklov/curve.hpp"
#include "steklov/error.hpp"

using namespace steklov;
using std::numbers::pi;

namespace {

// Fourier coefficients of a + b cos(kt) + c sin(kt) style curves, built by hand.
std::vector<cplx> coeffs(int d, std::initializer_list<std::pair<int, cplx>> terms) {
    std::vector<cplx> c(static_cast<std::size_t>(2 * d + 1));
    for (auto [k, v] : terms) c[static_cast<std::size_t>(k + d)] += v;
    return c;
}

}  // namespace

TEST_CASE("curve_eval matches closed-form presets") {
    const auto ell = AnalyticCurve::ellipse(2.0, 1.0);
    auto p = ell.eval(0.0);
    CHECK(std::abs(p.c1 - cplx(2.0)) < 1e-15);
    CHECK(std::abs(p.c2) < 1e-15);

    const auto circ = AnalyticCurve::circle(1.0);
    p = circ.eval(pi / 2);
    CHECK(std::abs(p.c1) < 1e-15);
    CHECK(std::abs(p.c2 - 1.0) < 1e-15);

    const auto kite = AnalyticCurve::kite();
    p = kite.eval(0.0);
    CHECK(std::abs(p.c1 - 1.0) < 1e-15);
    CHECK(std::abs(p.c2) < 1e-15);
}

TEST_CASE("complex evaluation equals the entire extension") {
    // Oracle: ellipse(2,1) at complex t is (2 cos t, sin t) with std::cos on complex arguments.
    const auto ell = AnalyticCurve::ellipse(2.0, 1.0);
    for (cplx t : {cplx(0.3, 0.7), cplx(-1.2, -1.5), cplx(4.0, 2.0)}) {
        const auto p = ell.eval(t);
        CHECK(std::abs(p.c1 - 2.0 * std::cos(t)) < 1e-12 * std::abs(std::cos(t)) + 1e-14);
        CHECK(std::abs(p.c2 - std::sin(t)) < 1e-12 * std::abs(std::sin(t)) + 1e-14);
    }
}

TEST_CASE("curve_derivative examples") {
    auto d = AnalyticCurve::circle(1.0).derivative(0.0, 1);
    CHECK(std::abs(d.c1) < 1e-15);
    CHECK(std::abs(d.c2 - 1.0) < 1e-15);

    d = AnalyticCurve::ellipse(2.0, 1.0).derivative(0.0, 1);
    CHECK(std::abs(d.c1) < 1e-15);
    CHECK(std::abs(d.c2 - 1.0) < 1e-15);

    d = AnalyticCurve::kite().derivative(pi / 2, 1);
    CHECK(std::abs(d.c1 - (-1.0)) < 1e-14);
    CHECK(std::abs(d.c2) < 1e-14);
}

TEST_CASE("outward normal examples, including a clockwise input") {
    auto n = outward_normal(AnalyticCurve::circle(1.0), 0.0);
    CHECK(n.x1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(n.x2) < 1e-14);

    n = outward_normal(AnalyticCurve::ellipse(2.0, 1.0), pi / 2);
    CHECK(std::abs(n.x1) < 1e-14);
    CHECK(n.x2 == doctest::Approx(1.0).epsilon(1e-14));

    // (cos t, -sin t) runs clockwise.
    const auto cw = AnalyticCurve::from_coefficients(coeffs(1, {{-1, 0.5}, {1, 0.5}}),
                                                     coeffs(1, {{-1, cplx(0, -0.5)}, {1, cplx(0, 0.5)}}));
    CHECK(cw.was_reversed());
    n = outward_normal(cw, 0.0);
    CHECK(n.x1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(n.x2) < 1e-14);
    CHECK(winding_number(cw, {0.0, 0.0}) == 1);
}

TEST_CASE("point_in_domain examples and boundary ambiguity") {
    const auto ell = AnalyticCurve::ellipse(2.0, 1.0);
    CHECK(point_in_domain(ell, {0.0, 0.0}));
    CHECK_FALSE(point_in_domain(ell, {3.0, 0.0}));
    const auto kite = AnalyticCurve::kite();
    CHECK(point_in_domain(kite, {0.9, 0.0}));
    // Independent oracle: angle-accumulation winding number.
    CHECK(winding_number(kite, {0.9, 0.0}, 20000) == 1);
    CHECK_THROWS_AS(point_in_domain(ell, {2.0, 0.0}), Error);
    try {
        point_in_domain(ell, {2.0, 0.0});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BoundaryAmbiguous);
    }
}

TEST_CASE("invalid curves are rejected") {
    // Constant curve: zero speed everywhere.
    CHECK_THROWS_AS(AnalyticCurve::from_coefficients(coeffs(1, {{0, 1.0}}), coeffs(1, {{0, 1.0}})), Error);
    // Figure-eight (cos t, sin 2t) crosses itself at the origin.
    CHECK_THROWS_AS(AnalyticCurve::from_coefficients(coeffs(2, {{-1, 0.5}, {1, 0.5}}),
                                                     coeffs(2, {{-2, cplx(0, 0.5)}, {2, cplx(0, -0.5)}})),
                    Error);
    CHECK_FALSE(curve_from_preset("hexagon").has_value());
    CHECK(curve_from_preset("ellipse(2,1)").has_value());
    CHECK(curve_from_preset("circle(0.5)")->shape().a == doctest::Approx(0.5));
}

TEST_CASE("property: winding number about centroid is one for presets") {
    for (const auto& c : {AnalyticCurve::circle(1.0), AnalyticCurve::ellipse(2.0, 1.0), AnalyticCurve::kite(),
                          AnalyticCurve::ellipse(1.0, 1.01)}) {
        const auto pts = sample_curve(c, 4096);
        Point2 m{};
        for (auto p : pts) m = m + (1.0 / pts.size()) * p;
        CHECK(std::abs(winding_number(c, m)) == 1);
    }
}

TEST_CASE("property: derivatives agree with central differences") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.0, 2 * pi);
    const double h = 1e-5;
    for (const auto& c : {AnalyticCurve::kite(), AnalyticCurve::ellipse(2.0, 1.0)}) {
        for (int i = 0; i < 64; ++i) {
            const double t = U(rng);
            const auto d1 = c.derivative(t, 1);
            const auto fp = c.eval(t + h), fm = c.eval(t - h);
            const cplx fd1 = (fp.c1 - fm.c1) / (2 * h), fd2 = (fp.c2 - fm.c2) / (2 * h);
            const double scale = std::abs(d1.c1) + std::abs(d1.c2);
            CHECK(std::abs(fd1 - d1.c1) / scale < 1e-8);
            CHECK(std::abs(fd2 - d1.c2) / scale < 1e-8);
            const auto d2 = c.derivative(t, 2);
            const auto g = c.derivative(t + h, 1), gm = c.derivative(t - h, 1);
            const double s2 = std::abs(d2.c1) + std::abs(d2.c2) + 1.0;
            CHECK(std::abs((g.c1 - gm.c1) / (2 * h) - d2.c1) / s2 < 1e-8);
        }
    }
}

TEST_CASE("property: periodicity for complex parameters") {
    const auto kite = AnalyticCurve::kite();
    for (double s : {-2.0, -0.5, 0.0, 1.0, 2.0}) {
        const cplx t(0.7, s);
        const auto a = kite.eval(t), b = kite.eval(t + 2 * pi);
        const double scale = std::abs(a.c1) + std::abs(a.c2);
        CHECK(std::abs(a.c1 - b.c1) < 1e-13 * scale);
        CHECK(std::abs(a.c2 - b.c2) < 1e-13 * scale);
    }
}

TEST_CASE("projection onto the boundary") {
    const auto circ = AnalyticCurve::circle(1.0);
    const auto pr = project_to_boundary(circ, {0.5, 0.0});
    CHECK(pr.distance == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(std::remainder(pr.t, 2 * pi)) < 1e-8);
    CHECK(circ.length() == doctest::Approx(2 * pi).epsilon(1e-12));
}
