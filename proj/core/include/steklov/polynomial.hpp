#pragma once

#include <complex>
#include <span>
#include <vector>

namespace steklov {

using cplx = std::complex<double>;

/// Horner evaluation of sum_k c[k] z^k.
cplx poly_eval(std::span<const cplx> coeffs, cplx z);

/// Drops trailing (highest-order) coefficients with |c| <= tol * max|c|.
std::vector<cplx> poly_trim(std::span<const cplx> coeffs, double tol = 0.0);

/// All roots of sum_k c[k] z^k as eigenvalues of the companion matrix.
/// Zero leading coefficients are trimmed first; roots at z = 0 from zero
/// low-order coefficients are kept.
std::vector<cplx> poly_roots(std::span<const cplx> coeffs);

/// Refines approximate roots with Aberth-Ehrlich iterations. Returns false if
/// the iteration did not converge within `max_iter` sweeps.
bool poly_polish_roots(std::span<const cplx> coeffs, std::vector<cplx>& roots, int max_iter = 50);

/// Coefficients of p(z)^2 (full convolution).
std::vector<cplx> poly_square(std::span<const cplx> coeffs);

}  // namespace steklov
