#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "steklov/error.hpp"
#include "steklov/polynomial.hpp"
#include "steklov/reconstruction.hpp"

namespace steklov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    return t < 0 ? t + kTwoPi : t;
}

// Coefficients (in w = e^{iz}) of w^d (xi - F(w)), F = C1 + i C2.
std::vector<cplx> h_factor_poly(const AnalyticCurve& curve, Point2 x) {
    const int d = curve.degree();
    std::vector<cplx> c(static_cast<std::size_t>(2 * d + 1));
    const cplx i(0, 1);
    for (int k = -d; k <= d; ++k) c[static_cast<std::size_t>(k + d)] = -(curve.coeff_x(k) + i * curve.coeff_y(k));
    c[static_cast<std::size_t>(d)] += cplx(x.x1, x.x2);
    return c;
}

cplx newton_polish(const AnalyticCurve& curve, Point2 x, cplx z) {
    for (int it = 0; it < 8; ++it) {
        const auto hj = h_jet(curve, x, z);
        if (hj[1] == 0.0) break;
        const cplx step = hj[0] / hj[1];
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag()) || std::abs(step) > 1e-3) break;
        z -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(z))) break;
    }
    return z;
}

}  // namespace

std::array<cplx, 3> h_jet(const AnalyticCurve& curve, Point2 x, cplx z) {
    const auto j = curve.jet(z);
    const cplx d1 = x.x1 - j[0].c1, d2 = x.x2 - j[0].c2;
    return {d1 * d1 + d2 * d2, -2.0 * (d1 * j[1].c1 + d2 * j[1].c2),
            2.0 * (j[1].c1 * j[1].c1 + j[1].c2 * j[1].c2) - 2.0 * (d1 * j[2].c1 + d2 * j[2].c2)};
}

double lambda_circle(double r, Point2 x) {
    const double rho = norm(x);
    if (rho == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(rho / r);
}

double lambda_ellipse(double a, double b, Point2 x) {
    if (a == b) return lambda_circle(a, x);
    if (b > a) return lambda_ellipse(b, a, {x.x2, -x.x1});
    const double c = std::sqrt(a * a - b * b);
    return std::acosh(a / c) - std::acosh(cplx(x.x1, x.x2) / c).real();
}

std::vector<cplx> h_zeros(const AnalyticCurve& curve, Point2 x, std::vector<cplx>* seed) {
    auto c = h_factor_poly(curve, x);
    // Strip vanishing low-order terms (zeros at w = 0 are z = +i infinity).
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    std::size_t lo = 0;
    while (lo + 1 < c.size() && std::abs(c[lo]) <= 1e-15 * scale) ++lo;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lo));
    c = poly_trim(c, 1e-15);

    std::vector<cplx> w;
    bool ok = false;
    if (seed && seed->size() + 1 == c.size()) {
        w = *seed;
        ok = poly_polish_roots(c, w, 30);
    }
    if (!ok) {
        w = poly_roots(c);
        poly_polish_roots(c, w, 10);
    }
    if (seed) *seed = w;

    std::vector<cplx> z;
    z.reserve(2 * w.size());
    for (const auto& r : w) {
        if (r == 0.0) continue;
        const cplx zz(wrap_angle(std::arg(r)), -std::log(std::abs(r)));
        z.push_back(zz);
        z.push_back(std::conj(zz));
    }
    return z;
}

LambdaResult lambda_from_zeros(std::span<const cplx> zeros, LambdaMethod method) {
    LambdaResult res;
    res.method = method;
    res.lambda = std::numeric_limits<double>::infinity();
    for (const auto& z : zeros) {
        if (std::abs(z.imag()) < res.lambda) {
            res.lambda = std::abs(z.imag());
            res.witness = z;
        }
    }
    if (!std::isfinite(res.lambda)) return res;
    const double tol = 1e-9 * std::max(1.0, res.lambda);
    for (const auto& z : zeros) {
        if (std::abs(std::abs(z.imag()) - res.lambda) > tol) continue;
        const cplx u(wrap_angle(z.real()), std::abs(z.imag()));
        const bool dup = std::any_of(res.upper_roots.begin(), res.upper_roots.end(), [&](const cplx& v) {
            const double dt = std::abs(u.real() - v.real());
            return std::min(dt, kTwoPi - dt) < 1e-9;
        });
        if (!dup) res.upper_roots.push_back(u);
    }
    for (const auto& z : zeros) {
        const double h = std::abs(z.imag());
        if (h > res.lambda + tol) res.next_height = std::min(res.next_height, h);
    }
    std::sort(res.upper_roots.begin(), res.upper_roots.end(),
              [](const cplx& a, const cplx& b) { return a.real() < b.real(); });
    return res;
}

namespace {

LambdaResult lambda_newton(const AnalyticCurve& curve, Point2 x) {
    std::vector<cplx> roots;
    for (int k = 0; k < 16; ++k) {
        for (double s : {0.1, -0.1, 0.3, -0.3, 0.6, -0.6, 1.0, -1.0}) {
            cplx z(kTwoPi * k / 16.0, s);
            bool conv = false;
            for (int it = 0; it < 100; ++it) {
                const auto hj = h_jet(curve, x, z);
                if (hj[1] == 0.0) break;
                const cplx step = hj[0] / hj[1];
                if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
                z -= step;
                if (std::abs(z.imag()) > 50.0) break;
                if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) {
                    conv = true;
                    break;
                }
            }
            if (!conv) continue;
            z = cplx(wrap_angle(z.real()), z.imag());
            const bool dup = std::any_of(roots.begin(), roots.end(), [&](const cplx& r) {
                const double dt = std::abs(r.real() - z.real());
                return std::min(dt, kTwoPi - dt) + std::abs(r.imag() - z.imag()) < 1e-10;
            });
            if (!dup) roots.push_back(z);
        }
    }
    if (roots.empty()) {
        throw Error(ErrorKind::NewtonFailed, "no Newton start converged to a zero of h (128 starts)");
    }
    return lambda_from_zeros(roots, LambdaMethod::Newton);
}

LambdaResult lambda_roots(const AnalyticCurve& curve, Point2 x, LambdaMethod tag) {
    auto z = h_zeros(curve, x);
    // Polish the zeros nearest the real axis directly on h.
    double lam = std::numeric_limits<double>::infinity();
    for (const auto& v : z) lam = std::min(lam, std::abs(v.imag()));
    for (auto& v : z) {
        if (std::abs(v.imag()) < lam + 1e-6) v = newton_polish(curve, x, v);
    }
    return lambda_from_zeros(z, tag);
}

}  // namespace

LambdaResult lambda_of(const AnalyticCurve& curve, Point2 x, LambdaMethod method) {
    if (!point_in_domain(curve, x)) throw Error(ErrorKind::InteriorRequired, "lambda requires an interior point");
    const auto& shape = curve.shape();
    if (method == LambdaMethod::Auto) {
        if (shape.kind == CurveKind::Circle) method = LambdaMethod::Circle;
        else if (shape.kind == CurveKind::Ellipse) method = LambdaMethod::Ellipse;
        else method = LambdaMethod::Roots;
    }
    switch (method) {
        case LambdaMethod::Newton:
            return lambda_newton(curve, x);
        case LambdaMethod::Circle: {
            if (shape.kind != CurveKind::Circle) throw Error(ErrorKind::InvalidArgument, "curve is not a circle preset");
            LambdaResult r;
            r.method = LambdaMethod::Circle;
            r.lambda = lambda_circle(shape.a, x);
            if (std::isfinite(r.lambda)) {
                r.witness = cplx(wrap_angle(std::atan2(x.x2, x.x1)), r.lambda);
                r.upper_roots = {r.witness};
            }
            return r;
        }
        case LambdaMethod::Ellipse: {
            if (shape.kind != CurveKind::Ellipse && shape.kind != CurveKind::Circle) {
                throw Error(ErrorKind::InvalidArgument, "curve is not an ellipse preset");
            }
            LambdaResult r = lambda_roots(curve, x, LambdaMethod::Ellipse);
            r.lambda = lambda_ellipse(shape.a, shape.b, x);
            return r;
        }
        case LambdaMethod::Roots:
        case LambdaMethod::Auto:
            break;
    }
    return lambda_roots(curve, x, LambdaMethod::Roots);
}

}  // namespace steklov
