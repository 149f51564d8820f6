#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace steklov {

using cplx = std::complex<double>;

struct Point2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
double norm(Point2 p);
double dot(Point2 a, Point2 b);

// Complexified evaluation of the two coordinate functions.
struct ComplexPoint {
    cplx c1;
    cplx c2;
};

enum class CurveKind { Circle, Ellipse, Kite, Custom };

// Which closed form (if any) describes the curve. Circle and Ellipse are
// centred at the origin with C(t) = (a cos t, b sin t).
struct CurveShape {
    CurveKind kind = CurveKind::Custom;
    double a = 0.0;
    double b = 0.0;
};

/// Closed curve C(t) = (C1(t), C2(t)) given by finite Fourier series
///   C_i(t) = sum_{k=-d}^{d} c_{i,k} e^{ikt},
/// with real values on the real axis (c_{i,-k} = conj(c_{i,k})). Being a
/// trigonometric polynomial, C extends to an entire function of t.
///
/// Construction validates the curve (nonzero speed, no self intersection)
/// and normalizes it to counterclockwise orientation.
class AnalyticCurve {
public:
    /// Coefficient vectors hold indices -d..d at positions 0..2d.
    static AnalyticCurve from_coefficients(std::vector<cplx> coeffs_x, std::vector<cplx> coeffs_y,
                                           CurveShape shape = {});

    static AnalyticCurve circle(double r);
    static AnalyticCurve ellipse(double a, double b);
    static AnalyticCurve kite();

    int degree() const noexcept { return degree_; }
    const std::vector<cplx>& coeffs_x() const noexcept { return cx_; }
    const std::vector<cplx>& coeffs_y() const noexcept { return cy_; }
    cplx coeff_x(int k) const { return cx_.at(static_cast<std::size_t>(k + degree_)); }
    cplx coeff_y(int k) const { return cy_.at(static_cast<std::size_t>(k + degree_)); }
    const CurveShape& shape() const noexcept { return shape_; }
    // True when the input parametrization was clockwise and got reversed.
    bool was_reversed() const noexcept { return reversed_; }

    ComplexPoint eval(cplx t) const;
    ComplexPoint derivative(cplx t, int order) const;
    /// Position, first and second derivative in one pass.
    std::array<ComplexPoint, 3> jet(cplx t) const;

    Point2 point(double t) const;
    Point2 tangent(double t) const;
    double speed(double t) const;

    double diameter() const noexcept { return diameter_; }
    double max_speed() const noexcept { return max_speed_; }
    double length() const noexcept { return length_; }

private:
    AnalyticCurve() = default;
    void finalize();

    int degree_ = 0;
    std::vector<cplx> cx_;
    std::vector<cplx> cy_;
    CurveShape shape_;
    bool reversed_ = false;
    double diameter_ = 0.0;
    double max_speed_ = 0.0;
    double length_ = 0.0;
};

ComplexPoint curve_eval(const AnalyticCurve& curve, cplx t);
ComplexPoint curve_derivative(const AnalyticCurve& curve, cplx t, int order);
Point2 outward_normal(const AnalyticCurve& curve, double t);

/// Nearest boundary point to x: parameter and distance.
struct BoundaryProjection {
    double t = 0.0;
    double distance = 0.0;
};
BoundaryProjection project_to_boundary(const AnalyticCurve& curve, Point2 x);

/// Throws BoundaryAmbiguous when x lies within 1e-12 * diameter of the curve.
bool point_in_domain(const AnalyticCurve& curve, Point2 x);

/// Winding number of the curve about x by angle accumulation over `samples`
/// equispaced parameters. Independent of point_in_domain.
int winding_number(const AnalyticCurve& curve, Point2 x, int samples = 4096);

/// Samples C(t_j), t_j = 2 pi j / n.
std::vector<Point2> sample_curve(const AnalyticCurve& curve, int n);

/// Parses "circle(r)", "ellipse(a,b)" or "kite".
std::optional<AnalyticCurve> curve_from_preset(const std::string& spec);

}  // namespace steklov
