#include "steklov/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "steklov/error.hpp"
#include "steklov/polynomial.hpp"

namespace steklov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Curve whose complex coordinate C1 + i C2 equals sum_k b[k] e^{ikt}.
AnalyticCurve curve_from_analytic(const std::vector<cplx>& b) {
    const auto trimmed = poly_trim(b, 1e-17);
    const int d = std::max(1, static_cast<int>(trimmed.size()) - 1);
    const std::size_t ud = static_cast<std::size_t>(d);
    const cplx i(0, 1);
    std::vector<cplx> cx(2 * ud + 1, 0.0), cy(2 * ud + 1, 0.0);
    const cplx b0 = trimmed.empty() ? cplx{} : trimmed[0];
    cx[ud] = b0.real();
    cy[ud] = b0.imag();
    for (std::size_t k = 1; k < trimmed.size(); ++k) {
        cx[ud + k] = trimmed[k] / 2.0;
        cx[ud - k] = std::conj(trimmed[k]) / 2.0;
        cy[ud + k] = trimmed[k] / (2.0 * i);
        cy[ud - k] = std::conj(cy[ud + k]);
    }
    return AnalyticCurve::from_coefficients(std::move(cx), std::move(cy));
}

}  // namespace

cplx PowerSeries::eval(cplx z) const { return poly_eval(c, z); }

PowerSeries series_multiply(const PowerSeries& a, const PowerSeries& b, std::size_t order) {
    PowerSeries out{std::vector<cplx>(order, 0.0)};
    for (std::size_t i = 0; i < std::min(order, a.size()); ++i) {
        for (std::size_t j = 0; j < b.size() && i + j < order; ++j) out.c[i + j] += a.c[i] * b.c[j];
    }
    return out;
}

PowerSeries series_derivative(const PowerSeries& a) {
    PowerSeries out;
    for (std::size_t k = 1; k < a.size(); ++k) out.c.push_back(static_cast<double>(k) * a.c[k]);
    return out;
}

PowerSeries series_integral(const PowerSeries& a, cplx c0) {
    PowerSeries out{{c0}};
    for (std::size_t k = 0; k < a.size(); ++k) out.c.push_back(a.c[k] / static_cast<double>(k + 1));
    return out;
}

PowerSeries series_reciprocal(const PowerSeries& a, std::size_t order) {
    if (a.size() == 0 || a.c[0] == 0.0) {
        throw Error(ErrorKind::ZeroAtOrigin, "series reciprocal needs a nonzero constant term");
    }
    PowerSeries out{std::vector<cplx>(order, 0.0)};
    if (order == 0) return out;
    out.c[0] = 1.0 / a.c[0];
    for (std::size_t n = 1; n < order; ++n) {
        cplx acc = 0.0;
        for (std::size_t k = 1; k <= n && k < a.size(); ++k) acc += a.c[k] * out.c[n - k];
        out.c[n] = -acc / a.c[0];
    }
    return out;
}

PowerSeries series_log(const PowerSeries& a, std::size_t order) {
    double scale = 0.0;
    for (const auto& v : a.c) scale = std::max(scale, std::abs(v));
    if (a.size() == 0 || std::abs(a.c[0]) <= 1e-14 * scale || a.c[0] == 0.0) {
        throw Error(ErrorKind::ZeroAtOrigin, "log of a series vanishing at the origin");
    }
    if (order == 0) return {};
    const auto ratio = series_multiply(series_derivative(a), series_reciprocal(a, order), order - 1);
    return series_integral(ratio, std::log(a.c[0]));
}

PowerSeries series_exp(const PowerSeries& a, std::size_t order) {
    PowerSeries out{std::vector<cplx>(order, 0.0)};
    if (order == 0) return out;
    out.c[0] = std::exp(a[0]);
    // E' = a' E  =>  n E_n = sum_{k=1}^{n} k a_k E_{n-k}
    for (std::size_t n = 1; n < order; ++n) {
        cplx acc = 0.0;
        for (std::size_t k = 1; k <= n; ++k) acc += static_cast<double>(k) * a[k] * out.c[n - k];
        out.c[n] = acc / static_cast<double>(n);
    }
    return out;
}

std::vector<cplx> PolynomialConformalMap::derivative_coeffs() const { return poly_square(p_coeffs); }

std::vector<cplx> PolynomialConformalMap::map_coeffs() const {
    const auto d = derivative_coeffs();
    std::vector<cplx> out(d.size() + 1, 0.0);
    out[0] = f0;
    for (std::size_t k = 0; k < d.size(); ++k) out[k + 1] = d[k] / static_cast<double>(k + 1);
    return out;
}

cplx map_eval(const PolynomialConformalMap& map, cplx z) { return poly_eval(map.map_coeffs(), z); }

cplx BandCoefficients::operator()(int m) const {
    const int am = std::abs(m);
    if (am > m0 || static_cast<std::size_t>(am) >= a.size()) return 0.0;
    return m >= 0 ? a[static_cast<std::size_t>(am)] : std::conj(a[static_cast<std::size_t>(am)]);
}

double BandCoefficients::eval(double theta) const {
    double v = a0();
    for (int m = 1; m <= m0; ++m) {
        v += 2.0 * (a[static_cast<std::size_t>(m)] * std::exp(cplx(0, m * theta))).real();
    }
    return v;
}

double BandCoefficients::max_value(int samples) const {
    double mx = 0.0;
    for (int j = 0; j < samples; ++j) mx = std::max(mx, eval(kTwoPi * j / samples));
    return mx;
}

BandCoefficients band_coefficients(const PolynomialConformalMap& map) {
    const auto& c = map.p_coeffs;
    BandCoefficients out;
    if (c.empty()) return out;
    const std::size_t d = c.size() - 1;
    out.a.assign(d + 1, 0.0);
    for (std::size_t m = 0; m <= d; ++m) {
        for (std::size_t k = 0; k + m <= d; ++k) out.a[m] += c[k + m] * std::conj(c[k]);
    }
    out.a[0] = out.a[0].real();
    const double a0 = out.a[0].real();
    int m0 = 0;
    for (std::size_t m = 1; m <= d; ++m) {
        if (std::abs(out.a[m]) > 1e-14 * a0) m0 = static_cast<int>(m);
    }
    out.m0 = m0;
    out.a.resize(static_cast<std::size_t>(m0) + 1);
    return out;
}

PowerSeries sqrt_series(const PowerSeries& g, int N) {
    if (N < 0) throw Error(ErrorKind::InvalidArgument, "sqrt_series order must be nonnegative");
    const std::size_t order = static_cast<std::size_t>(N) + 1;
    auto h = series_log(g, order);
    for (auto& v : h.c) v *= 0.5;
    return series_exp(h, order);
}

PolynomialConformalMap truncate_and_certify(const PowerSeries& w, int N, cplx f0) {
    if (N < 0) throw Error(ErrorKind::InvalidArgument, "truncation order must be nonnegative");
    PolynomialConformalMap map;
    map.f0 = f0;
    for (int k = 0; k <= N; ++k) map.p_coeffs.push_back(w[static_cast<std::size_t>(k)]);
    map.p_coeffs = poly_trim(map.p_coeffs);
    if (map.p_coeffs.empty()) throw Error(ErrorKind::ZeroAtOrigin, "truncated polynomial vanishes");
    map.roots = poly_roots(map.p_coeffs);
    std::vector<cplx> bad;
    for (const auto& r : map.roots) {
        if (!(std::abs(r) > 1.0 + kRootMargin)) bad.push_back(r);
    }
    if (!bad.empty()) {
        throw RootInsideDiskError(bad, "truncated square root has " + std::to_string(bad.size()) +
                                           " root(s) in the closed unit disk");
    }
    map.certified = true;
    return map;
}

PolynomialConformalMap ensure_nonconstant_modulus(PolynomialConformalMap map, double delta) {
    if (map.p_coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "empty polynomial");
    if (band_coefficients(map).m0 > 0) return map;
    const double top = std::abs(map.p_coeffs.back());
    map.p_coeffs.push_back(delta * top);
    PowerSeries w{map.p_coeffs};
    return truncate_and_certify(w, static_cast<int>(map.p_coeffs.size()) - 1, map.f0);
}

AnalyticCurve boundary_curve(const PolynomialConformalMap& map) {
    return curve_from_analytic(map.map_coeffs());
}

AnalyticCurve series_boundary_curve(const PowerSeries& f) { return curve_from_analytic(f.c); }

PowerSeries mobius_series(cplx a, std::size_t order) {
    PowerSeries f{std::vector<cplx>(order, 0.0)};
    if (order == 0) return f;
    f.c[0] = a;
    const double scale = 1.0 - std::norm(a);
    cplx pw = 1.0;
    for (std::size_t j = 1; j < order; ++j) {
        f.c[j] = -pw * scale;
        pw *= std::conj(a);
    }
    return f;
}

PolynomialConformalMap mobius_approximant(cplx a, int N) {
    if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::InvalidArgument, "Mobius parameter must satisfy |a| < 1");
    PowerSeries w;
    const cplx lead = cplx(0, 1) * std::sqrt(1.0 - std::norm(a));
    cplx pw = 1.0;
    for (int j = 0; j <= N; ++j) {
        w.c.push_back(lead * pw);
        pw *= std::conj(a);
    }
    return truncate_and_certify(w, N, a);
}

namespace {

struct OffsetSolver {
    const AnalyticCurve& target;
    const AnalyticCurve& approx;
    std::vector<Point2> dense;
    double dense_h;

    OffsetSolver(const AnalyticCurve& t, const AnalyticCurve& a) : target(t), approx(a) {
        const int m = std::max(4096, 128 * approx.degree());
        dense = sample_curve(approx, m);
        dense_h = kTwoPi / m;
    }

    // Returns (omega, s) with approx(omega) = target(theta) + s nu(theta).
    std::pair<double, double> solve(double theta, const double* omega_guess) const {
        const Point2 p = target.point(theta);
        const Point2 nu = outward_normal(target, theta);
        const Point2 tau{-nu.x2, nu.x1};
        double omega = 0.0;
        if (omega_guess) {
            omega = *omega_guess;
        } else {
            // Among the dense chords that cross the normal line, take the
            // crossing closest to p (the far side of the curve also crosses).
            double best = std::numeric_limits<double>::infinity();
            const std::size_t m = dense.size();
            for (std::size_t j = 0; j < m; ++j) {
                const Point2 q0 = dense[j] - p, q1 = dense[(j + 1) % m] - p;
                const double a0 = dot(q0, tau), a1 = dot(q1, tau);
                if ((a0 > 0) == (a1 > 0) && a0 != 0.0) continue;
                const double w = a0 == a1 ? 0.0 : a0 / (a0 - a1);
                const double dist = std::abs((1 - w) * dot(q0, nu) + w * dot(q1, nu));
                if (dist < best) {
                    best = dist;
                    omega = dense_h * (static_cast<double>(j) + w);
                }
            }
        }
        double s = dot(approx.point(omega) - p, nu);
        for (int it = 0; it < 60; ++it) {
            const Point2 q = approx.point(omega);
            const Point2 d = approx.tangent(omega);
            const Point2 F = q - p - s * nu;
            // J = [d, -nu]
            const double det = d.x1 * (-nu.x2) - (-nu.x1) * d.x2;
            if (std::abs(det) < 1e-14 * norm(d)) break;
            const double dw = (F.x1 * (-nu.x2) - (-nu.x1) * F.x2) / det;
            const double ds = (d.x1 * F.x2 - d.x2 * F.x1) / det;
            omega -= dw;
            s -= ds;
            if (std::abs(dw) + std::abs(ds) < 1e-15 * (1.0 + std::abs(omega) + std::abs(s))) {
                return {omega, s};
            }
        }
        const Point2 F = approx.point(omega) - p - s * nu;
        if (norm(F) < 1e-12 * (1.0 + target.diameter())) return {omega, s};
        throw Error(ErrorKind::NoIntersection,
                    "normal line from the target does not meet the approximant transversally");
    }
};

}  // namespace

OffsetProfile boundary_offset(const AnalyticCurve& target, const AnalyticCurve& approx, int samples) {
    if (samples < 8) throw Error(ErrorKind::InvalidArgument, "boundary_offset needs at least 8 samples");
    OffsetSolver solver(target, approx);
    OffsetProfile out;
    out.theta.resize(static_cast<std::size_t>(samples));
    out.s.resize(out.theta.size());
    out.omega.resize(out.theta.size());
    const double h = kTwoPi / samples;
    for (int j = 0; j < samples; ++j) {
        const double theta = h * j;
        const auto [omega, s] = solver.solve(theta, nullptr);
        out.theta[static_cast<std::size_t>(j)] = theta;
        out.s[static_cast<std::size_t>(j)] = s;
        out.omega[static_cast<std::size_t>(j)] = omega;
    }
    std::size_t best = 0;
    for (std::size_t j = 0; j < out.s.size(); ++j) {
        if (std::abs(out.s[j]) > std::abs(out.s[best])) best = j;
        const double sp = out.s[(j + 1) % out.s.size()];
        const double sm = out.s[(j + out.s.size() - 1) % out.s.size()];
        out.sup_ds = std::max(out.sup_ds, std::abs(sp - sm) / (2 * h));
    }
    // Golden-section refinement of the maximum of |s| between neighbours.
    double lo = out.theta[best] - h, hi = out.theta[best] + h;
    const double omega0 = out.omega[best];
    auto f = [&](double th) { return std::abs(solver.solve(th, &omega0).second); };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        if (f1 > f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - g * (hi - lo); f1 = f(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + g * (hi - lo); f2 = f(x2);
        }
    }
    out.sup_s = std::max({std::abs(out.s[best]), f1, f2});
    return out;
}

}  // namespace steklov
