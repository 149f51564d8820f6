#pragma once

#include <complex>
#include <vector>

#include "steklov/curve.hpp"

namespace steklov {

/// Truncated Taylor series about 0: sum_{k < size} c[k] z^k.
struct PowerSeries {
    std::vector<cplx> c;

    std::size_t size() const noexcept { return c.size(); }
    cplx operator[](std::size_t k) const { return k < c.size() ? c[k] : cplx{}; }
    cplx eval(cplx z) const;
};

PowerSeries series_multiply(const PowerSeries& a, const PowerSeries& b, std::size_t order);
PowerSeries series_derivative(const PowerSeries& a);
/// Term-wise antiderivative with constant term `c0`.
PowerSeries series_integral(const PowerSeries& a, cplx c0);
/// 1/a through `order` terms; a[0] must be nonzero.
PowerSeries series_reciprocal(const PowerSeries& a, std::size_t order);
/// Principal log a(0) + integral of a'/a.
PowerSeries series_log(const PowerSeries& a, std::size_t order);
PowerSeries series_exp(const PowerSeries& a, std::size_t order);

/// Map f(z) = f0 + integral_0^z p(w)^2 dw with polynomial p.
struct PolynomialConformalMap {
    std::vector<cplx> p_coeffs;
    cplx f0{};
    bool certified = false;
    std::vector<cplx> roots;  // roots of p (filled by certification)

    /// Coefficients of f (index k <-> z^k), f[0] = f0.
    std::vector<cplx> map_coeffs() const;
    /// Coefficients of f' = p^2.
    std::vector<cplx> derivative_coeffs() const;
};

/// Fourier coefficients a_m of |f'(e^{i theta})| = |p(e^{i theta})|^2.
struct BandCoefficients {
    std::vector<cplx> a;  // a[m] for m = 0..m0; a_{-m} = conj(a_m)
    int m0 = 0;

    cplx operator()(int m) const;
    double a0() const { return a.empty() ? 0.0 : a[0].real(); }
    /// sum_m a_m e^{i m theta}
    double eval(double theta) const;
    double max_value(int samples = 1024) const;
};

cplx map_eval(const PolynomialConformalMap& map, cplx z);
BandCoefficients band_coefficients(const PolynomialConformalMap& map);

/// Taylor series w with w^2 = g + O(z^{N+1}), w(0) the principal sqrt of g(0),
/// computed as exp(log(g)/2) in series arithmetic.
PowerSeries sqrt_series(const PowerSeries& g, int N);

/// Root-certification margin: roots must satisfy |alpha| > 1 + kRootMargin.
inline constexpr double kRootMargin = 1e-9;

/// p = degree-N truncation of w; throws RootInsideDiskError unless every root
/// of p lies outside the closed unit disk by the certification margin.
PolynomialConformalMap truncate_and_certify(const PowerSeries& w, int N, cplx f0);

/// If |p| is constant on the circle, add delta * |top coeff| z^{deg+1} and
/// re-certify, so that the map is non-constant band limited.
PolynomialConformalMap ensure_nonconstant_modulus(PolynomialConformalMap map, double delta = 1e-3);

/// Exact image curve f(e^{it}) as a finite Fourier series.
AnalyticCurve boundary_curve(const PolynomialConformalMap& map);

/// f(z) = (z - a)/(conj(a) z - 1): Taylor coefficients through `order` terms.
PowerSeries mobius_series(cplx a, std::size_t order);
/// The truncated square-root approximant i sqrt(1-|a|^2) sum_{j<=N} (conj(a) z)^j
/// with f0 = a, certified.
PolynomialConformalMap mobius_approximant(cplx a, int N);

/// Image of the unit circle under a power series map, as an analytic curve.
AnalyticCurve series_boundary_curve(const PowerSeries& f);

struct OffsetProfile {
    std::vector<double> theta;
    std::vector<double> s;      // signed offset along the target's outward normal
    std::vector<double> omega;  // approximant parameter hit by the normal line
    double sup_s = 0.0;
    double sup_ds = 0.0;  // max |s'| by central differences
};

/// Signed distance from target(theta) along its outward normal to the
/// approximant curve, on `samples` equispaced theta.
OffsetProfile boundary_offset(const AnalyticCurve& target, const AnalyticCurve& approx, int samples = 512);

}  // namespace steklov
