#include "steklov/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "steklov/error.hpp"
#include "steklov/fft.hpp"

namespace steklov {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_pm_pi(double a) {
    a = std::fmod(a + kPi, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a - kPi;
}

// Largest n s kept in e^{ns}: keeps the shifted coefficients finite.
constexpr double kMaxGrowth = 600.0;

// Trapezoid error decays like exp(-d (nq - n_max)) for a singularity at
// distance d from the contour; kQuadDecay targets ~1e-18 of that.
constexpr double kQuadDecay = 41.0;
constexpr int kMaxQuad = 1 << 18;

// Distance from the contour Im t = s to the nearest zero of h not removed
// analytically: the conjugate row or the next row up when the upper row is
// subtracted.
double singularity_distance(const LambdaResult& lam, double s) {
    if (!std::isfinite(lam.lambda)) return std::numeric_limits<double>::infinity();
    const bool singular = s > 0 && s >= lam.lambda * (1.0 - 1e-12);
    if (!singular) return lam.lambda - s;
    return std::min(lam.lambda + s, lam.next_height - s);
}

}  // namespace

DensitySpectrum fourier_density(std::span<const double> density, const AnalyticCurve& curve) {
    const std::size_t n = density.size();
    if (n < 2 || n % 2 != 0) throw Error(ErrorKind::InvalidArgument, "density needs an even number of samples");
    std::vector<double> speed(n);
    double total = 0.0, weighted = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        speed[j] = curve.speed(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
        total += speed[j];
        weighted += speed[j] * density[j];
    }
    DensitySpectrum out;
    out.mean = weighted / total;
    out.N = static_cast<int>(n / 2);
    std::vector<cplx> g(n), X(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = (density[j] - out.mean) * speed[j];
    fft_forward(g, X);
    out.A.assign(n + 1, 0.0);
    const double inv = 1.0 / static_cast<double>(n);
    for (int k = -out.N + 1; k < out.N; ++k) {
        out.A[static_cast<std::size_t>(k + out.N)] = X[static_cast<std::size_t>((k + static_cast<int>(n)) % static_cast<int>(n))] * inv;
    }
    const cplx nyq = X[static_cast<std::size_t>(out.N)] * (0.5 * inv);
    out.A.front() = nyq;
    out.A.back() = nyq;
    return out;
}

int default_quadrature(int n_max) { return 8 * std::max(n_max, 64); }

int adaptive_quadrature(int n_max, const LambdaResult& lam, double s) {
    const double d = singularity_distance(lam, s);
    int nq = default_quadrature(n_max);
    if (d > 0 && std::isfinite(d)) {
        const double need = n_max + kQuadDecay / d;
        while (nq < need && nq < kMaxQuad) nq *= 2;
    }
    return nq;
}

std::vector<cplx> b_coefficients(const AnalyticCurve& curve, Point2 x, double s, int n_max, const LambdaResult* lam,
                                 int quad_nodes) {
    if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be nonnegative");
    if (s < 0) throw Error(ErrorKind::InvalidArgument, "contour shift must be nonnegative");
    LambdaResult local;
    if (lam == nullptr && (s > 0 || quad_nodes <= 0)) {
        local = lambda_of(curve, x);
        lam = &local;
    }
    const int nq = quad_nodes > 0 ? quad_nodes : adaptive_quadrature(n_max, *lam, s);
    if (nq <= 2 * n_max) throw Error(ErrorKind::InvalidArgument, "quadrature too small for n_max");

    bool singular = false;
    if (s > 0) {
        if (s > lam->lambda * (1.0 + 1e-12)) {
            throw Error(ErrorKind::BranchJump, "contour shift exceeds lambda(x); log h is not single valued");
        }
        singular = std::isfinite(lam->lambda) && s >= lam->lambda * (1.0 - 1e-12) && !lam->upper_roots.empty();
    }
    std::vector<double> tk;
    if (singular) {
        for (const auto& r : lam->upper_roots) tk.push_back(r.real());
    }

    const std::size_t n = static_cast<std::size_t>(nq);
    const double h = kTwoPi / nq;
    std::vector<cplx> g(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = h * static_cast<double>(j);
        if (!singular) {
            g[j] = h_jet(curve, x, cplx(t, s))[0];
            continue;
        }
        cplx num = 1.0, den = 1.0;
        bool near = false;
        for (std::size_t k = 0; k < tk.size(); ++k) {
            const double d = wrap_pm_pi(t - tk[k]);
            if (std::abs(d) < 1e-6) {
                // h(z_k + d) / q(d) to second order.
                const auto hj = h_jet(curve, x, cplx(tk[k], s));
                num *= hj[1] + 0.5 * hj[2] * d;
                den *= cplx(0.5 * d, 1.0);
                near = true;
            } else {
                den *= 1.0 - std::exp(cplx(0, -d));
            }
        }
        if (!near) num = h_jet(curve, x, cplx(t, s))[0];
        g[j] = num / den;
    }

    std::vector<cplx> v(n);
    double phase = std::arg(g[0]);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(std::abs(g[j]) > 0) || !std::isfinite(std::abs(g[j]))) {
            throw Error(ErrorKind::BranchJump, "log h is singular on the contour");
        }
        if (j > 0) phase += std::arg(g[j] / g[j - 1]);
        v[j] = cplx(std::log(std::abs(g[j])), phase);
    }
    const double closure = phase + std::arg(g[0] / g[n - 1]) - std::arg(g[0]);
    if (std::abs(closure) > 1e-6) {
        throw Error(ErrorKind::BranchJump, "unwrapped log h does not close over one period (winding " +
                                               std::to_string(closure / kTwoPi) + ")");
    }

    std::vector<cplx> V(n);
    fft_backward(v, V);
    std::vector<cplx> B(static_cast<std::size_t>(n_max) + 1);
    const double scale = -1.0 / (2.0 * nq);
    for (int k = 0; k <= n_max; ++k) {
        cplx b = V[static_cast<std::size_t>(k)] * scale;
        if (singular && k > 0) {
            for (double t0 : tk) b += std::exp(cplx(0, k * t0)) / (2.0 * k);
        }
        B[static_cast<std::size_t>(k)] = b;
    }
    return B;
}

cplx b_coefficient(const AnalyticCurve& curve, Point2 x, double s, int n, const LambdaResult* lam, int quad_nodes) {
    const int an = std::abs(n);
    const auto B = b_coefficients(curve, x, s, an, lam,
                                  quad_nodes > 0 ? quad_nodes : default_quadrature(an));
    return n >= 0 ? B[static_cast<std::size_t>(an)] : std::conj(B[static_cast<std::size_t>(an)]);
}

int default_field_truncation(const AnalyticCurve& curve, const DensitySpectrum& dens, double sigma) {
    const double n = std::ceil(4.0 * sigma * curve.max_speed()) + 64.0;
    return n >= dens.N ? dens.N : static_cast<int>(n);
}

namespace {

double contour_shift(double alpha, double lambda, int n_max) {
    if (alpha == 0.0 || n_max == 0) return 0.0;
    const double cap = kMaxGrowth / n_max;
    return std::isfinite(lambda) ? std::min(alpha * lambda, cap) : cap;
}

double sum_field(const DensitySpectrum& dens, const std::vector<cplx>& B, double s, int n_max) {
    double acc = 0.0;
    for (int k = 1; k <= n_max; ++k) {
        acc += (dens(k) * B[static_cast<std::size_t>(k)]).real() * std::exp(-k * s);
    }
    return dens.mean + 2.0 * acc;
}

}  // namespace

double evaluate_field(const AnalyticCurve& curve, const DensitySpectrum& dens, Point2 x, double alpha, int n_max,
                      const LambdaResult* lam) {
    if (std::abs(alpha) > 1.0) throw Error(ErrorKind::InvalidArgument, "alpha must satisfy |alpha| <= 1");
    alpha = std::abs(alpha);
    n_max = std::min(n_max, dens.N);
    LambdaResult local;
    if (alpha > 0 && lam == nullptr) {
        local = lambda_of(curve, x);
        lam = &local;
    }
    const double s = alpha > 0 ? contour_shift(alpha, lam->lambda, n_max) : 0.0;
    const auto B = b_coefficients(curve, x, s, n_max, lam);
    return sum_field(dens, B, s, n_max);
}

Point2 FieldGrid::center(int i, int j) const {
    return {box.x_min + (i + 0.5) * hx(), box.y_min + (j + 0.5) * hy()};
}

FieldGrid make_grid(const AnalyticCurve& curve, const Box& box, int resolution) {
    if (resolution < 16) throw Error(ErrorKind::InvalidArgument, "grid resolution must be at least 16");
    if (!(box.x_max > box.x_min) || !(box.y_max > box.y_min)) throw Error(ErrorKind::InvalidArgument, "empty box");
    FieldGrid g;
    g.box = box;
    g.nx = g.ny = resolution;
    const std::size_t cells = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
    g.inside.assign(cells, 0);
    g.unreliable.assign(cells, 0);
    g.lambda.assign(cells, std::numeric_limits<double>::quiet_NaN());
    g.u.assign(cells, std::numeric_limits<double>::quiet_NaN());
    g.sign.assign(cells, 0);

    const int m = std::max(4096, 64 * curve.degree());
    const auto poly = sample_curve(curve, m);
    std::vector<double> xs;
    for (int j = 0; j < g.ny; ++j) {
        const double y = g.center(0, j).x2;
        xs.clear();
        for (int k = 0; k < m; ++k) {
            const Point2 a = poly[static_cast<std::size_t>(k)];
            const Point2 b = poly[static_cast<std::size_t>((k + 1) % m)];
            if ((a.x2 <= y) != (b.x2 <= y)) xs.push_back(a.x1 + (y - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t p = 0; p + 1 < xs.size(); p += 2) {
            for (int i = 0; i < g.nx; ++i) {
                const double x = g.center(i, j).x1;
                if (x > xs[p] && x < xs[p + 1]) g.inside[g.index(i, j)] = 1;
            }
        }
    }
    return g;
}

void finalize_signs(FieldGrid& grid) {
    for (std::size_t c = 0; c < grid.u.size(); ++c) {
        const double v = grid.u[c];
        grid.sign[c] = (!grid.inside[c] || !std::isfinite(v) || v == 0.0) ? 0 : (v > 0 ? 1 : -1);
    }
}

namespace {

std::vector<FieldGrid> build_grids_impl(const AnalyticCurve& curve, std::span<const DensitySpectrum> dens,
                                        const std::vector<int>& nmax, const Box& box, int resolution, double alpha) {
    FieldGrid base = make_grid(curve, box, resolution);
    int n_all = 1;
    for (int v : nmax) n_all = std::max(n_all, v);
    const bool closed_form = curve.shape().kind == CurveKind::Circle || curve.shape().kind == CurveKind::Ellipse;
    std::vector<FieldGrid> out(dens.size(), base);

    std::vector<cplx> seed, row_seed;
    for (int j = 0; j < base.ny; ++j) {
        seed = row_seed;
        bool first_in_row = true;
        for (int i = 0; i < base.nx; ++i) {
            const std::size_t c = base.index(i, j);
            if (!base.inside[c]) continue;
            const Point2 x = base.center(i, j);
            try {
                LambdaResult lam = lambda_from_zeros(h_zeros(curve, x, &seed), LambdaMethod::Roots);
                if (first_in_row) {
                    row_seed = seed;
                    first_in_row = false;
                }
                if (closed_form) lam.lambda = lambda_ellipse(curve.shape().a, curve.shape().b, x);
                const double s = contour_shift(alpha, lam.lambda, n_all);
                const int nq = adaptive_quadrature(n_all, lam, s);
                const auto B = b_coefficients(curve, x, s, n_all, &lam, nq);
                const bool weak = (nq - n_all) * singularity_distance(lam, s) < kQuadDecay;
                for (std::size_t k = 0; k < dens.size(); ++k) {
                    out[k].lambda[c] = lam.lambda;
                    out[k].unreliable[c] = weak ? 1 : 0;
                    out[k].u[c] = sum_field(dens[k], B, s, nmax[k]);
                }
            } catch (const Error&) {
                for (auto& g : out) {
                    g.unreliable[c] = 1;
                    g.u[c] = std::numeric_limits<double>::quiet_NaN();
                }
            }
        }
    }
    for (auto& g : out) finalize_signs(g);
    return out;
}

}  // namespace

std::vector<FieldGrid> build_field_grids(const AnalyticCurve& curve, std::span<const DensitySpectrum> dens,
                                         std::span<const double> sigmas, const Box& box, int resolution,
                                         double alpha) {
    if (dens.size() != sigmas.size()) throw Error(ErrorKind::InvalidArgument, "one sigma per density required");
    std::vector<int> nmax(dens.size());
    for (std::size_t k = 0; k < dens.size(); ++k) {
        nmax[k] = std::max(1, default_field_truncation(curve, dens[k], sigmas[k]));
    }
    return build_grids_impl(curve, dens, nmax, box, resolution, alpha);
}

FieldGrid build_field_grid(const AnalyticCurve& curve, const DensitySpectrum& dens, const Box& box, int resolution,
                           const FieldOptions& opts) {
    const int n = opts.n_max > 0 ? std::min(opts.n_max, dens.N)
                                 : std::max(1, default_field_truncation(curve, dens, opts.sigma));
    return build_grids_impl(curve, std::span<const DensitySpectrum>(&dens, 1), {n}, box, resolution, opts.alpha)
        .front();
}

}  // namespace steklov
