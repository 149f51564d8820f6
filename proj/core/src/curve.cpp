#include "steklov/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>

#include "steklov/error.hpp"

namespace steklov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int validation_samples(int degree) { return std::max(512, 32 * degree); }

// Orientation test for segment intersection.
double orient(Point2 a, Point2 b, Point2 c) {
    return (b.x1 - a.x1) * (c.x2 - a.x2) - (b.x2 - a.x2) * (c.x1 - a.x1);
}

bool segments_cross(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
    const double d1 = orient(q1, q2, p1);
    const double d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1);
    const double d4 = orient(p1, p2, q2);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
           d4 != 0;
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::BoundaryAmbiguous: return "BoundaryAmbiguous";
        case ErrorKind::DegenerateCurve: return "DegenerateCurve";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ZeroAtOrigin: return "ZeroAtOrigin";
        case ErrorKind::RootInsideDisk: return "RootInsideDisk";
        case ErrorKind::NoIntersection: return "NoIntersection";
        case ErrorKind::SingularRHS: return "SingularRHS";
        case ErrorKind::TooFewConverged: return "TooFewConverged";
        case ErrorKind::OutsideDomain: return "OutsideDomain";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::NewtonFailed: return "NewtonFailed";
        case ErrorKind::InteriorRequired: return "InteriorRequired";
        case ErrorKind::BranchJump: return "BranchJump";
        case ErrorKind::NoSignConstantCell: return "NoSignConstantCell";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::LapackFailure: return "LapackFailure";
    }
    return "Unknown";
}

double norm(Point2 p) { return std::hypot(p.x1, p.x2); }
double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

AnalyticCurve AnalyticCurve::from_coefficients(std::vector<cplx> coeffs_x, std::vector<cplx> coeffs_y,
                                               CurveShape shape) {
    if (coeffs_x.size() != coeffs_y.size() || coeffs_x.size() % 2 == 0) {
        throw Error(ErrorKind::InvalidArgument,
                    "curve coefficient vectors must have equal odd length 2d+1");
    }
    AnalyticCurve c;
    c.degree_ = static_cast<int>(coeffs_x.size() / 2);
    c.cx_ = std::move(coeffs_x);
    c.cy_ = std::move(coeffs_y);
    c.shape_ = shape;
    c.finalize();
    return c;
}

AnalyticCurve AnalyticCurve::circle(double r) {
    if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "circle radius must be positive");
    const cplx i(0, 1);
    return from_coefficients({r / 2, 0.0, r / 2}, {i * r / 2.0, 0.0, -i * r / 2.0},
                             {CurveKind::Circle, r, r});
}

AnalyticCurve AnalyticCurve::ellipse(double a, double b) {
    if (!(a > 0 && b > 0)) throw Error(ErrorKind::InvalidArgument, "ellipse semiaxes must be positive");
    const cplx i(0, 1);
    const CurveKind kind = (a == b) ? CurveKind::Circle : CurveKind::Ellipse;
    return from_coefficients({a / 2, 0.0, a / 2}, {i * b / 2.0, 0.0, -i * b / 2.0}, {kind, a, b});
}

AnalyticCurve AnalyticCurve::kite() {
    // (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)
    const cplx i(0, 1);
    return from_coefficients({0.325, 0.5, -0.65, 0.5, 0.325}, {0.0, 0.75 * i, 0.0, -0.75 * i, 0.0},
                             {CurveKind::Kite, 0, 0});
}

void AnalyticCurve::finalize() {
    const int m = validation_samples(degree_);
    std::vector<Point2> pts(static_cast<std::size_t>(m));
    double area = 0.0;
    double min_speed = std::numeric_limits<double>::infinity();
    double max_speed = 0.0;
    double length = 0.0;
    for (int j = 0; j < m; ++j) {
        const double t = kTwoPi * j / m;
        const auto p = eval(t);
        const auto d = derivative(t, 1);
        pts[static_cast<std::size_t>(j)] = {p.c1.real(), p.c2.real()};
        area += 0.5 * (p.c1.real() * d.c2.real() - p.c2.real() * d.c1.real());
        const double sp = std::hypot(d.c1.real(), d.c2.real());
        min_speed = std::min(min_speed, sp);
        max_speed = std::max(max_speed, sp);
        length += sp;
    }
    area *= kTwoPi / m;
    length *= kTwoPi / m;
    if (!(max_speed > 0) || min_speed <= 1e-12 * max_speed) {
        throw Error(ErrorKind::DegenerateCurve, "curve parametrization has vanishing speed");
    }
    if (area == 0.0) throw Error(ErrorKind::DegenerateCurve, "curve encloses zero area");
    if (area < 0) {
        std::reverse(cx_.begin(), cx_.end());
        std::reverse(cy_.begin(), cy_.end());
        reversed_ = true;
        std::reverse(pts.begin() + 1, pts.end());
    }
    for (int i = 0; i < m; ++i) {
        const Point2 p1 = pts[static_cast<std::size_t>(i)];
        const Point2 p2 = pts[static_cast<std::size_t>((i + 1) % m)];
        for (int j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1) continue;
            const Point2 q1 = pts[static_cast<std::size_t>(j)];
            const Point2 q2 = pts[static_cast<std::size_t>((j + 1) % m)];
            if (segments_cross(p1, p2, q1, q2)) {
                throw Error(ErrorKind::DegenerateCurve, "curve is self-intersecting");
            }
        }
    }
    double diam = 0.0;
    const int stride = std::max(1, m / 512);
    for (int i = 0; i < m; i += stride) {
        for (int j = i + stride; j < m; j += stride) {
            diam = std::max(diam, norm(pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]));
        }
    }
    diameter_ = diam;
    max_speed_ = max_speed;
    length_ = length;
}

std::array<ComplexPoint, 3> AnalyticCurve::jet(cplx t) const {
    const cplx i(0, 1);
    const cplx w = std::exp(i * t);
    const cplx winv = 1.0 / w;
    std::array<ComplexPoint, 3> out{};
    const std::size_t d = static_cast<std::size_t>(degree_);
    out[0].c1 = cx_[d];
    out[0].c2 = cy_[d];
    cplx wp = 1.0;
    cplx wm = 1.0;
    for (int k = 1; k <= degree_; ++k) {
        wp *= w;
        wm *= winv;
        const std::size_t ip = d + static_cast<std::size_t>(k);
        const std::size_t im = d - static_cast<std::size_t>(k);
        const cplx x_p = cx_[ip] * wp, x_m = cx_[im] * wm;
        const cplx y_p = cy_[ip] * wp, y_m = cy_[im] * wm;
        const double kk = k;
        out[0].c1 += x_p + x_m;
        out[0].c2 += y_p + y_m;
        out[1].c1 += i * kk * (x_p - x_m);
        out[1].c2 += i * kk * (y_p - y_m);
        out[2].c1 -= kk * kk * (x_p + x_m);
        out[2].c2 -= kk * kk * (y_p + y_m);
    }
    return out;
}

ComplexPoint AnalyticCurve::eval(cplx t) const { return jet(t)[0]; }

ComplexPoint AnalyticCurve::derivative(cplx t, int order) const {
    if (order != 1 && order != 2) {
        throw Error(ErrorKind::InvalidArgument, "curve derivative order must be 1 or 2");
    }
    return jet(t)[static_cast<std::size_t>(order)];
}

Point2 AnalyticCurve::point(double t) const {
    const auto p = eval(t);
    return {p.c1.real(), p.c2.real()};
}

Point2 AnalyticCurve::tangent(double t) const {
    const auto d = derivative(t, 1);
    return {d.c1.real(), d.c2.real()};
}

double AnalyticCurve::speed(double t) const { return norm(tangent(t)); }

ComplexPoint curve_eval(const AnalyticCurve& curve, cplx t) { return curve.eval(t); }

ComplexPoint curve_derivative(const AnalyticCurve& curve, cplx t, int order) {
    return curve.derivative(t, order);
}

Point2 outward_normal(const AnalyticCurve& curve, double t) {
    // Curves are stored counterclockwise, so the outward normal is the
    // tangent rotated clockwise.
    const Point2 d = curve.tangent(t);
    const double s = norm(d);
    if (!(s > 0)) throw Error(ErrorKind::DegenerateCurve, "zero tangent at requested parameter");
    return {d.x2 / s, -d.x1 / s};
}

BoundaryProjection project_to_boundary(const AnalyticCurve& curve, Point2 x) {
    const int m = std::max(1024, 64 * curve.degree());
    const double h = kTwoPi / m;
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
        const Point2 p = curve.point(h * j);
        const double d2 = dot(p - x, p - x);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    // Safeguarded Newton on g(t) = (C(t) - x) . C'(t), kept within the bracket
    // of neighbouring samples.
    double t = h * best;
    const double lo = t - h, hi = t + h;
    for (int it = 0; it < 30; ++it) {
        const auto j = curve.jet(t);
        const Point2 p{j[0].c1.real(), j[0].c2.real()};
        const Point2 d1{j[1].c1.real(), j[1].c2.real()};
        const Point2 d2{j[2].c1.real(), j[2].c2.real()};
        const double g = dot(p - x, d1);
        const double gp = dot(d1, d1) + dot(p - x, d2);
        if (!(gp > 0)) break;
        double tn = t - g / gp;
        tn = std::clamp(tn, lo, hi);
        const bool done = std::abs(tn - t) < 1e-15 * (1.0 + std::abs(t));
        t = tn;
        if (done) break;
    }
    const Point2 p = curve.point(t);
    double dist = norm(p - x);
    if (dist * dist > best_d2) {
        t = h * best;
        dist = std::sqrt(best_d2);
    }
    return {t, dist};
}

bool point_in_domain(const AnalyticCurve& curve, Point2 x) {
    const auto proj = project_to_boundary(curve, x);
    if (proj.distance < 1e-12 * curve.diameter()) {
        throw Error(ErrorKind::BoundaryAmbiguous, "point lies on the boundary within tolerance");
    }
    const Point2 nu = outward_normal(curve, proj.t);
    return dot(x - curve.point(proj.t), nu) < 0.0;
}

int winding_number(const AnalyticCurve& curve, Point2 x, int samples) {
    double total = 0.0;
    Point2 prev = curve.point(0.0) - x;
    for (int j = 1; j <= samples; ++j) {
        const Point2 cur = curve.point(kTwoPi * j / samples) - x;
        total += std::atan2(prev.x1 * cur.x2 - prev.x2 * cur.x1, dot(prev, cur));
        prev = cur;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

std::vector<Point2> sample_curve(const AnalyticCurve& curve, int n) {
    std::vector<Point2> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = curve.point(kTwoPi * j / n);
    return out;
}

std::optional<AnalyticCurve> curve_from_preset(const std::string& spec) {
    static const std::regex circle_re(R"(\s*circle\s*\(\s*([-+0-9.eE]+)\s*\)\s*)");
    static const std::regex ellipse_re(
        R"(\s*ellipse\s*\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)\s*)");
    static const std::regex kite_re(R"(\s*kite\s*(\(\s*\))?\s*)");
    std::smatch m;
    if (std::regex_match(spec, m, circle_re)) return AnalyticCurve::circle(std::stod(m[1]));
    if (std::regex_match(spec, m, ellipse_re)) {
        return AnalyticCurve::ellipse(std::stod(m[1]), std::stod(m[2]));
    }
    if (std::regex_match(spec, kite_re)) return AnalyticCurve::kite();
    return std::nullopt;
}

}  // namespace steklov
