#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <limits>
#include <vector>

#include "steklov/curve.hpp"

namespace steklov {

/// Fourier coefficients A_n, |n| <= n_nodes/2, of (phi - mean) |C'| with the
/// Nyquist term split evenly between +N and -N.
struct DensitySpectrum {
    int N = 0;
    std::vector<cplx> A;  // A[n + N]
    double mean = 0.0;

    cplx operator()(int n) const { return (n < -N || n > N) ? cplx{} : A[static_cast<std::size_t>(n + N)]; }
};

DensitySpectrum fourier_density(std::span<const double> density, const AnalyticCurve& curve);

enum class LambdaMethod { Auto, Newton, Roots, Circle, Ellipse };

/// lambda(x): distance from the real axis to the nearest complex zero of
///   h(z) = (x1 - C1(z))^2 + (x2 - C2(z))^2.
struct LambdaResult {
    double lambda = 0.0;
    cplx witness{};                  // a zero with |Im| = lambda
    std::vector<cplx> upper_roots;   // every zero on Im z = +lambda, Re in [0, 2 pi)
    double next_height = std::numeric_limits<double>::infinity();  // smallest |Im| above lambda
    LambdaMethod method = LambdaMethod::Auto;
};

/// Auto dispatches the circle / ellipse closed forms for those presets and
/// the polynomial-root method otherwise. Newton is the multi-start search.
/// Throws InteriorRequired for points not strictly inside, NewtonFailed if
/// no Newton start converges.
LambdaResult lambda_of(const AnalyticCurve& curve, Point2 x, LambdaMethod method = LambdaMethod::Auto);

/// Closed forms (centred circle / axis-aligned ellipse).
double lambda_circle(double r, Point2 x);
double lambda_ellipse(double a, double b, Point2 x);

/// Zeros of h for a Fourier curve, as z = t + i s with t in [0, 2 pi).
/// `seed`, if non-empty, holds roots in the w = e^{iz} variable from a nearby
/// point and is refined in place (Aberth); on failure a companion-matrix
/// solve is used. On return `seed` holds the w-roots for this x.
std::vector<cplx> h_zeros(const AnalyticCurve& curve, Point2 x, std::vector<cplx>* seed = nullptr);

/// Builds a LambdaResult from a zero set.
LambdaResult lambda_from_zeros(std::span<const cplx> zeros, LambdaMethod method);

/// h(z) and its first two derivatives.
std::array<cplx, 3> h_jet(const AnalyticCurve& curve, Point2 x, cplx z);

/// Base trapezoid size 8 max(n_max, 64).
int default_quadrature(int n_max);

/// Default size raised until the nearest zero of h off the contour (at
/// distance d) gives trapezoid error below exp(-41): nq >= n_max + 41/d.
int adaptive_quadrature(int n_max, const LambdaResult& lam, double s);

/// B_n(x, s) for n = 0..n_max on the contour Im t = s (s >= 0):
///   B_n = -(1/4 pi) int_0^{2 pi} log h(t + i s) e^{int} dt.
/// B_{-n}(x, s) = conj(B_n(x, s)). s = 0 gives the plain coefficients. When s
/// equals lambda the contour passes through zeros of h; their logarithmic
/// singularities are split off and integrated exactly, using the roots in
/// `lam`. Throws BranchJump if the unwrapped logarithm does not close.
std::vector<cplx> b_coefficients(const AnalyticCurve& curve, Point2 x, double s, int n_max,
                                 const LambdaResult* lam = nullptr, int quad_nodes = 0);

/// Single coefficient B_n(x, s) (negative n by conjugation).
cplx b_coefficient(const AnalyticCurve& curve, Point2 x, double s, int n, const LambdaResult* lam = nullptr,
                   int quad_nodes = 0);

/// Default truncation 4 sigma max|C'| + 64, capped at the density's N.
int default_field_truncation(const AnalyticCurve& curve, const DensitySpectrum& dens, double sigma);

/// u(x) = mean + sum_{0<|n|<=n_max} A_n e^{-|n| alpha lambda} B_n(x, alpha lambda).
double evaluate_field(const AnalyticCurve& curve, const DensitySpectrum& dens, Point2 x, double alpha, int n_max,
                      const LambdaResult* lam = nullptr);

struct Box {
    double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
};

/// Cell-centred grid; cell (i, j) has centre (x_min + (i + 1/2) hx, y_min + (j + 1/2) hy)
/// and index j * nx + i.
struct FieldGrid {
    Box box;
    int nx = 0, ny = 0;
    std::vector<std::uint8_t> inside;
    std::vector<std::uint8_t> unreliable;  // too close to the boundary for the shifted contour
    std::vector<double> lambda;
    std::vector<double> u;
    std::vector<std::int8_t> sign;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i); }
    Point2 center(int i, int j) const;
    double hx() const { return (box.x_max - box.x_min) / nx; }
    double hy() const { return (box.y_max - box.y_min) / ny; }
};

/// Empty grid with cell centres and the inside mask of `curve` filled in.
FieldGrid make_grid(const AnalyticCurve& curve, const Box& box, int resolution);

/// Fills sign from u (0 where u is zero, non-finite, or outside).
void finalize_signs(FieldGrid& grid);

struct FieldOptions {
    double alpha = 0.8;
    int n_max = 0;  // 0: default_field_truncation with `sigma`
    double sigma = 0.0;
};

/// One or more densities on a shared grid; lambda and the contour
/// coefficients are computed once per cell.
std::vector<FieldGrid> build_field_grids(const AnalyticCurve& curve, std::span<const DensitySpectrum> dens,
                                         std::span<const double> sigmas, const Box& box, int resolution,
                                         double alpha = 0.8);

FieldGrid build_field_grid(const AnalyticCurve& curve, const DensitySpectrum& dens, const Box& box,
                           int resolution, const FieldOptions& opts = {});

}  // namespace steklov
