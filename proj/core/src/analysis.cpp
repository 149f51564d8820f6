#include "steklov/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "steklov/error.hpp"
#include "steklov/polynomial.hpp"

namespace steklov {

namespace {

double window_mass(const FourierVector& u, int m, int m0) {
    double s = 0.0;
    for (int l = m - m0; l <= m + m0; ++l) s += std::norm(u(l));
    return std::sqrt(s);
}

FourierVector rotate_pair(const FourierVector& a, const FourierVector& b, double ang) {
    FourierVector out = a;
    const double c = std::cos(ang), s = std::sin(ang);
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = c * a.c[i] + s * b.c[i];
    return out;
}

}  // namespace

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return 0.0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

TunnelingEntry tunneling_constants(const FourierVector& u, double sigma, int m, int m0, double K) {
    TunnelingEntry e;
    e.sigma = sigma;
    e.m = m;
    e.K = K;
    e.A_m = window_mass(u, m, m0);
    e.C_low = lower_bound_rate(u, sigma, m, m0);
    const int kmax = static_cast<int>(std::floor(K * sigma));
    std::vector<double> xs, ys;
    for (int k = -kmax; k <= kmax; ++k) {
        const double a = std::abs(u(k));
        if (k != m && a > 0) {
            xs.push_back(std::abs(k - m));
            ys.push_back(std::log(a));
        }
    }
    e.decay_slope = ls_slope(xs, ys);
    if (e.A_m <= kZeroMass) return e;
    double c0 = 1.0;
    for (int k = -kmax; k <= kmax; ++k) {
        if (k == m) continue;
        const double a = std::abs(u(k));
        if (a == 0.0) continue;
        c0 = std::max(c0, std::pow(a / e.A_m, 1.0 / std::abs(k - m)));
    }
    e.C0 = c0;
    return e;
}

double lower_bound_rate(const FourierVector& u, double sigma, int m, int m0) {
    const double a = window_mass(u, m, m0);
    if (a <= kZeroMass) return std::numeric_limits<double>::infinity();
    if (sigma <= 0) return 0.0;
    return -std::log(a) / sigma;
}

TunnelingEntry tunneling_worst_over_pair(const FourierVector& u1, const FourierVector& u2, double sigma, int m,
                                         int m0, double K) {
    TunnelingEntry worst;
    bool first = true;
    for (int i = 0; i < 32; ++i) {
        const auto v = rotate_pair(u1, u2, std::numbers::pi * i / 32.0);
        const auto e = tunneling_constants(v, sigma, m, m0, K);
        if (first) {
            worst = e;
            first = false;
            continue;
        }
        if (e.C0 > worst.C0) {
            worst.C0 = e.C0;
            worst.decay_slope = e.decay_slope;
        }
        if (e.C_low > worst.C_low) {
            worst.C_low = e.C_low;
            worst.A_m = e.A_m;
        }
    }
    return worst;
}

RemainderEntry remainder_ratio(const FourierVector& u, double sigma, double delta, int m, int N, int m0) {
    if (!(delta > 0 && delta < 1)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
    if (m <= m0) throw Error(ErrorKind::InvalidArgument, "m must exceed m0");
    if (N < 0 || N > 2) throw Error(ErrorKind::InvalidArgument, "N must be 0, 1 or 2");
    RemainderEntry e;
    e.sigma = sigma;
    e.delta = delta;
    e.m = m;
    e.N = N;
    const double ld = std::log(delta);
    double den = 0.0;
    for (int k = -u.N; k <= u.N; ++k) {
        const double a = std::abs(u(k));
        if (a == 0.0) continue;
        const int ak = std::abs(k);
        den += a * a * 2.0 * std::numbers::pi * std::exp((2.0 * ak + 2.0) * ld) / (2.0 * ak + 2.0);
        if (ak >= m) e.numerator += a * std::pow(static_cast<double>(ak), N) * std::exp((ak - N) * ld);
    }
    e.denominator = std::sqrt(den);
    e.ratio = e.denominator > 0 ? e.numerator / e.denominator : 0.0;
    return e;
}

RemainderFit fit_remainder_bound(std::vector<RemainderEntry>& entries, int m0) {
    RemainderFit best;
    double best_misfit = std::numeric_limits<double>::infinity();
    auto shape = [&](const RemainderEntry& e, double c) {
        return std::pow(e.delta, e.m - e.N - m0 - 1) + std::exp(-c * e.sigma);
    };
    for (int g = 0; g <= 200; ++g) {
        const double c = 1e-3 * std::pow(1e4, g / 200.0);
        std::vector<double> lc;
        for (const auto& e : entries) {
            if (e.ratio > 0) lc.push_back(std::log(e.ratio) - std::log(shape(e, c)));
        }
        if (lc.empty()) break;
        double mean = 0;
        for (double v : lc) mean += v;
        mean /= static_cast<double>(lc.size());
        double mis = 0;
        for (double v : lc) mis += (v - mean) * (v - mean);
        if (mis < best_misfit) {
            best_misfit = mis;
            best.c = c;
        }
    }
    for (const auto& e : entries) best.C_N = std::max(best.C_N, e.ratio / shape(e, best.c));
    for (auto& e : entries) e.bound = best.C_N * shape(e, best.c);
    return best;
}

namespace {

// Squared Euclidean distance transform along one line (Felzenszwalb-Huttenlocher).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);
    const double inf = std::numeric_limits<double>::infinity();
    const double h2 = h * h;
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (!std::isfinite(f[static_cast<std::size_t>(q)])) continue;
        while (k >= 0) {
            const int p = v[static_cast<std::size_t>(k)];
            const double s = ((f[static_cast<std::size_t>(q)] + h2 * q * q) - (f[static_cast<std::size_t>(p)] + h2 * p * p)) /
                             (2.0 * h2 * (q - p));
            if (s <= z[static_cast<std::size_t>(k)]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = k == 0 ? -inf
                                                : ((f[static_cast<std::size_t>(q)] + h2 * q * q) -
                                                   (f[static_cast<std::size_t>(v[static_cast<std::size_t>(k - 1)])] +
                                                    h2 * v[static_cast<std::size_t>(k - 1)] * v[static_cast<std::size_t>(k - 1)])) /
                                                      (2.0 * h2 * (q - v[static_cast<std::size_t>(k - 1)]));
        z[static_cast<std::size_t>(k) + 1] = inf;
    }
    d.assign(static_cast<std::size_t>(n), inf);
    if (k < 0) return;
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
        const int p = v[static_cast<std::size_t>(j)];
        d[static_cast<std::size_t>(q)] = h2 * (q - p) * (q - p) + f[static_cast<std::size_t>(p)];
    }
}

std::vector<double> distance_to_obstacles(const FieldGrid& g, const std::vector<std::uint8_t>& obstacle) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> tmp(obstacle.size());
    std::vector<double> f, d;
    for (int j = 0; j < g.ny; ++j) {
        f.assign(static_cast<std::size_t>(g.nx), inf);
        for (int i = 0; i < g.nx; ++i) {
            if (obstacle[g.index(i, j)]) f[static_cast<std::size_t>(i)] = 0.0;
        }
        edt_1d(f, d, g.hx());
        for (int i = 0; i < g.nx; ++i) tmp[g.index(i, j)] = d[static_cast<std::size_t>(i)];
    }
    std::vector<double> out(obstacle.size());
    for (int i = 0; i < g.nx; ++i) {
        f.resize(static_cast<std::size_t>(g.ny));
        for (int j = 0; j < g.ny; ++j) f[static_cast<std::size_t>(j)] = tmp[g.index(i, j)];
        edt_1d(f, d, g.hy());
        for (int j = 0; j < g.ny; ++j) out[g.index(i, j)] = std::sqrt(d[static_cast<std::size_t>(j)]);
    }
    return out;
}

}  // namespace

NonvanishingBall nonvanishing_ball(const FieldGrid& field, Point2 x0, double r0) {
    NonvanishingBall best;
    best.x0 = x0;
    best.r0 = r0;
    best.r1 = 0.0;
    const double half = 0.5 * std::max(field.hx(), field.hy());
    bool any = false;
    for (int sgn : {1, -1}) {
        std::vector<std::uint8_t> obstacle(field.sign.size());
        for (std::size_t c = 0; c < obstacle.size(); ++c) obstacle[c] = field.sign[c] != sgn ? 1 : 0;
        const auto dist = distance_to_obstacles(field, obstacle);
        for (int j = 0; j < field.ny; ++j) {
            for (int i = 0; i < field.nx; ++i) {
                const std::size_t c = field.index(i, j);
                if (field.sign[c] != sgn) continue;
                const Point2 p = field.center(i, j);
                const double off = norm(p - x0);
                if (off > r0) continue;
                any = true;
                const double r = std::min(dist[c] - half, r0 - off);
                if (r > best.r1) {
                    best.r1 = r;
                    best.center = p;
                    best.sign = sgn;
                }
            }
        }
    }
    if (!any || best.r1 <= 0.0) {
        throw Error(ErrorKind::NoSignConstantCell, "no sign-constant disk resolved inside the region");
    }
    best.min_abs_u = std::numeric_limits<double>::infinity();
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            if (norm(field.center(i, j) - best.center) <= best.r1) {
                best.min_abs_u = std::min(best.min_abs_u, std::abs(field.u[field.index(i, j)]));
            }
        }
    }
    return best;
}

std::vector<Polyline> nodal_extract(const FieldGrid& field) {
    const int nx = field.nx, ny = field.ny;
    auto ok = [&](int i, int j) {
        const std::size_t c = field.index(i, j);
        return field.inside[c] && std::isfinite(field.u[c]);
    };
    auto val = [&](int i, int j) { return field.u[field.index(i, j)]; };
    // Edge ids: 2*cell (horizontal to i+1), 2*cell+1 (vertical to j+1).
    auto hedge = [&](int i, int j) { return 2 * (static_cast<long>(j) * nx + i); };
    auto vedge = [&](int i, int j) { return 2 * (static_cast<long>(j) * nx + i) + 1; };
    std::unordered_map<long, Point2> pts;
    auto crossing = [&](long id) {
        auto it = pts.find(id);
        if (it != pts.end()) return;
        const long cell = id / 2;
        const int i = static_cast<int>(cell % nx), j = static_cast<int>(cell / nx);
        const int i2 = (id % 2 == 0) ? i + 1 : i, j2 = (id % 2 == 0) ? j : j + 1;
        const double a = val(i, j), b = val(i2, j2);
        const double t = a / (a - b);
        const Point2 p = field.center(i, j), q = field.center(i2, j2);
        pts[id] = p + t * (q - p);
    };
    std::unordered_map<long, std::vector<long>> adj;
    auto link = [&](long e1, long e2) {
        crossing(e1);
        crossing(e2);
        adj[e1].push_back(e2);
        adj[e2].push_back(e1);
    };
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            if (!ok(i, j) || !ok(i + 1, j) || !ok(i + 1, j + 1) || !ok(i, j + 1)) continue;
            const double v0 = val(i, j), v1 = val(i + 1, j), v2 = val(i + 1, j + 1), v3 = val(i, j + 1);
            const bool p0 = v0 >= 0, p1 = v1 >= 0, p2 = v2 >= 0, p3 = v3 >= 0;
            const long eb = hedge(i, j), er = vedge(i + 1, j), et = hedge(i, j + 1), el = vedge(i, j);
            std::vector<long> cut;
            if (p0 != p1) cut.push_back(eb);
            if (p1 != p2) cut.push_back(er);
            if (p2 != p3) cut.push_back(et);
            if (p3 != p0) cut.push_back(el);
            if (cut.size() == 2) {
                link(cut[0], cut[1]);
            } else if (cut.size() == 4) {
                const bool centre = 0.25 * (v0 + v1 + v2 + v3) >= 0;
                if (centre == p0) {
                    link(eb, er);
                    link(et, el);
                } else {
                    link(eb, el);
                    link(er, et);
                }
            }
        }
    }
    std::vector<Polyline> out;
    std::map<long, bool> used;
    auto walk = [&](long start) {
        Polyline line{pts[start]};
        used[start] = true;
        long cur = start;
        for (;;) {
            long next = -1;
            for (long nb : adj[cur]) {
                if (!used[nb]) {
                    next = nb;
                    break;
                }
            }
            if (next < 0) {
                // Close the loop if we returned next to the start.
                for (long nb : adj[cur]) {
                    if (nb == start && line.size() > 2) line.push_back(pts[start]);
                }
                break;
            }
            used[next] = true;
            line.push_back(pts[next]);
            cur = next;
        }
        out.push_back(std::move(line));
    };
    std::vector<long> keys;
    keys.reserve(adj.size());
    for (const auto& kv : adj) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    for (long k : keys) {
        if (!used[k] && adj[k].size() == 1) walk(k);
    }
    for (long k : keys) {
        if (!used[k]) walk(k);
    }
    return out;
}

FieldGrid sample_field(const AnalyticCurve& curve, const Box& box, int resolution,
                       const std::function<double(Point2)>& u) {
    FieldGrid g = make_grid(curve, box, resolution);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t c = g.index(i, j);
            if (g.inside[c]) g.u[c] = u(g.center(i, j));
        }
    }
    finalize_signs(g);
    return g;
}

std::optional<cplx> map_inverse(const PolynomialConformalMap& map, cplx w, cplx guess) {
    const auto f = map.map_coeffs();
    const auto df = map.derivative_coeffs();
    cplx z = guess;
    for (int it = 0; it < 60; ++it) {
        const cplx d = poly_eval(df, z);
        if (d == 0.0) return std::nullopt;
        const cplx step = (poly_eval(f, z) - w) / d;
        z -= step;
        if (!std::isfinite(z.real()) || std::abs(z) > 2.0) return std::nullopt;
        if (std::abs(step) < 1e-14) return std::abs(z) <= 1.0 + 1e-9 ? std::optional<cplx>(z) : std::nullopt;
    }
    return std::nullopt;
}

FieldGrid map_field_grid(const PolynomialConformalMap& map, const FourierVector& u, const Box& box, int resolution) {
    const AnalyticCurve curve = boundary_curve(map);
    FieldGrid g = make_grid(curve, box, resolution);
    const auto f = map.map_coeffs();
    // Coarse polar table for cold starts.
    std::vector<std::pair<cplx, cplx>> table;
    for (int a = 1; a <= 48; ++a) {
        for (int b = 0; b < 256; ++b) {
            const cplx z = std::polar(a / 48.0 * 0.999, 2.0 * std::numbers::pi * b / 256.0);
            table.emplace_back(z, poly_eval(f, z));
        }
    }
    table.emplace_back(0.0, map.f0);
    auto cold = [&](cplx w) {
        double best = std::numeric_limits<double>::infinity();
        cplx z0 = 0.0;
        for (const auto& [z, fz] : table) {
            const double d = std::abs(fz - w);
            if (d < best) {
                best = d;
                z0 = z;
            }
        }
        return z0;
    };
    std::optional<cplx> prev;
    for (int j = 0; j < g.ny; ++j) {
        prev.reset();
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t c = g.index(i, j);
            if (!g.inside[c]) {
                prev.reset();
                continue;
            }
            const Point2 x = g.center(i, j);
            const cplx w(x.x1, x.x2);
            std::optional<cplx> z;
            if (prev) z = map_inverse(map, w, *prev);
            if (!z) z = map_inverse(map, w, cold(w));
            if (z) {
                g.u[c] = u.extend(*z);
            } else {
                g.unreliable[c] = 1;
            }
            prev = z;
        }
    }
    finalize_signs(g);
    return g;
}

}  // namespace steklov
