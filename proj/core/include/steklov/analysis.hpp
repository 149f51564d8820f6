#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "steklov/disk.hpp"
#include "steklov/reconstruction.hpp"

namespace steklov {

struct TunnelingEntry {
    double sigma = 0.0;
    int m = 0;
    double K = 2.0;
    double A_m = 0.0;  // (sum_{|l - m| <= m0} |u(l)|^2)^{1/2}
    double C0 = std::numeric_limits<double>::infinity();
    double C_low = std::numeric_limits<double>::infinity();
    double decay_slope = 0.0;  // least-squares slope of log|u(k)| against |k - m|
};

/// Window masses at or below this level count as zero (C0 = infinity).
inline constexpr double kZeroMass = 1e-13;

TunnelingEntry tunneling_constants(const FourierVector& u, double sigma, int m, int m0, double K = 2.0);

/// -ln(A_m)/sigma for unit-l2 u.
double lower_bound_rate(const FourierVector& u, double sigma, int m, int m0);

/// Worst case (largest C0, largest C_low) over cos(a) u1 + sin(a) u2 for 32
/// angles a in [0, pi).
TunnelingEntry tunneling_worst_over_pair(const FourierVector& u1, const FourierVector& u2, double sigma, int m,
                                         int m0, double K = 2.0);

struct RemainderEntry {
    double sigma = 0.0;
    double delta = 0.0;
    int m = 0;
    int N = 0;
    double numerator = 0.0;    // sum_{|k| >= m} |u(k)| |k|^N delta^{|k| - N}
    double denominator = 0.0;  // L2 norm of the harmonic extension on B(0, delta)
    double ratio = 0.0;
    double bound = 0.0;  // C_N (delta^{m-N-m0-1} + e^{-c sigma}) once fitted
};

RemainderEntry remainder_ratio(const FourierVector& u, double sigma, double delta, int m, int N, int m0);

struct RemainderFit {
    double C_N = 0.0;
    double c = 0.0;
};

/// Fits (C_N, c) so that every entry satisfies ratio <= bound; c minimises the
/// log-space misfit over a grid, C_N is then the smallest constant that works.
/// Fills entry.bound.
RemainderFit fit_remainder_bound(std::vector<RemainderEntry>& entries, int m0);

/// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

struct NonvanishingBall {
    Point2 center;
    double r1 = 0.0;
    Point2 x0;
    double r0 = 0.0;
    int sign = 0;
    double min_abs_u = 0.0;
};

/// Largest disk of constant sign (cell centres) inside B(x0, r0). Throws
/// NoSignConstantCell if no inside cell of nonzero sign lies in the region.
NonvanishingBall nonvanishing_ball(const FieldGrid& field, Point2 x0, double r0);

using Polyline = std::vector<Point2>;

/// Marching squares on the cell-centre values of u (inside cells only).
std::vector<Polyline> nodal_extract(const FieldGrid& field);

/// Samples a field given as a function of the plane point on the grid of
/// `curve` (used for conformal-map and closed-form fields).
FieldGrid sample_field(const AnalyticCurve& curve, const Box& box, int resolution,
                       const std::function<double(Point2)>& u);

/// Inverse of a polynomial conformal map by Newton continuation; returns
/// nullopt if Newton fails or the preimage leaves the closed disk.
std::optional<cplx> map_inverse(const PolynomialConformalMap& map, cplx w, cplx guess);

/// Eigenfunction field phi = u o f^{-1} on the image domain of a BBLCN map.
FieldGrid map_field_grid(const PolynomialConformalMap& map, const FourierVector& u, const Box& box, int resolution);

}  // namespace steklov
