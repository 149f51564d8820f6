#include "steklov/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "steklov/error.hpp"

namespace steklov {

cplx poly_eval(std::span<const cplx> coeffs, cplx z) {
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::vector<cplx> poly_trim(std::span<const cplx> coeffs, double tol) {
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    std::size_t n = coeffs.size();
    while (n > 0 && std::abs(coeffs[n - 1]) <= tol * scale) --n;
    return {coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<cplx> poly_roots(std::span<const cplx> coeffs) {
    const auto c = poly_trim(coeffs);
    if (c.empty()) throw Error(ErrorKind::InvalidArgument, "roots of the zero polynomial");
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg == 0) return {};
    if (deg == 1) return {-c[0] / c[1]};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorKind::LapackFailure, "companion eigenvalue iteration failed");
    }
    std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
    // One Newton step per root tightens the companion result.
    std::vector<cplx> dc(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) dc[k - 1] = static_cast<double>(k) * c[k];
    for (auto& r : roots) {
        const cplx d = poly_eval(dc, r);
        if (std::abs(d) > 0) {
            const cplx step = poly_eval(c, r) / d;
            if (std::abs(step) < 1e-6 * (1.0 + std::abs(r))) r -= step;
        }
    }
    return roots;
}

bool poly_polish_roots(std::span<const cplx> coeffs, std::vector<cplx>& roots, int max_iter) {
    const auto c = poly_trim(coeffs);
    const std::size_t n = roots.size();
    if (n + 1 != c.size()) return false;
    std::vector<cplx> dc(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) dc[k - 1] = static_cast<double>(k) * c[k];
    for (int it = 0; it < max_iter; ++it) {
        double max_rel = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx z = roots[i];
            const cplx p = poly_eval(c, z);
            if (p == 0.0) continue;
            const cplx ratio = poly_eval(dc, z) / p;
            cplx sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) sum += 1.0 / (z - roots[j]);
            }
            const cplx w = 1.0 / (ratio - sum);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
            roots[i] = z - w;
            max_rel = std::max(max_rel, std::abs(w) / (1.0 + std::abs(z)));
        }
        if (max_rel < 1e-14) return true;
    }
    return false;
}

std::vector<cplx> poly_square(std::span<const cplx> coeffs) {
    if (coeffs.empty()) return {};
    std::vector<cplx> out(2 * coeffs.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        for (std::size_t j = 0; j < coeffs.size(); ++j) out[i + j] += coeffs[i] * coeffs[j];
    }
    return out;
}

}  // namespace steklov
