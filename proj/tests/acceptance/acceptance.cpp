// Acceptance suite. `acceptance <k>` runs criterion k (1..10), `acceptance 3x`
// runs only the cross-solver agreement part of criterion 3, no argument runs
// everything. Each criterion prints one PASS/FAIL line; the exit status is
// nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "steklov/analysis.hpp"
#include "steklov/bie.hpp"
#include "steklov/conformal.hpp"
#include "steklov/disk.hpp"
#include "steklov/error.hpp"
#include "steklov/reconstruction.hpp"

using namespace steklov;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

using Criterion = std::function<void(Outcome&)>;

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// r:fe: the degree-20 Mobius approximant with a = 0.8.
const PolynomialConformalMap& rfe_map() {
    static const PolynomialConformalMap m = mobius_approximant(0.8, 20);
    return m;
}

const DiskSpectrum& rfe_disk() {
    static const DiskSpectrum s = solve_disk(band_coefficients(rfe_map()), 384, 64);
    return s;
}

double radical_inverse(int i, int base) {
    double f = 1.0, r = 0.0;
    for (; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

// Interior points from the 2-3 Halton sequence over the bounding box,
// at least `margin` from the boundary.
std::vector<Point2> halton_points(const AnalyticCurve& c, const Box& box, int count, double margin) {
    std::vector<Point2> out;
    for (int i = 1; static_cast<int>(out.size()) < count; ++i) {
        const Point2 x{box.x_min + (box.x_max - box.x_min) * radical_inverse(i, 2),
                       box.y_min + (box.y_max - box.y_min) * radical_inverse(i, 3)};
        if (!point_in_domain(c, x) || project_to_boundary(c, x).distance < margin) continue;
        out.push_back(x);
    }
    return out;
}

// Worst-case tunneling entry, pairing eigenvalues that agree to 1e-8.
std::vector<TunnelingEntry> tunneling_table(const DiskSpectrum& d, int last, int m0) {
    std::vector<TunnelingEntry> out;
    const auto paired = [&](int j, int k) {
        return k >= 1 && k <= last && std::abs(d.sigma[k] - d.sigma[j]) <= 1e-8 * (1.0 + d.sigma[j]);
    };
    for (int j = 1; j <= last; ++j) {
        if (paired(j, j + 1) || paired(j, j - 1)) {
            const int k = paired(j, j + 1) ? j + 1 : j - 1;
            out.push_back(tunneling_worst_over_pair(d.vectors[std::min(j, k)], d.vectors[std::max(j, k)], d.sigma[j], 0, m0));
        } else {
            out.push_back(tunneling_constants(d.vectors[j], d.sigma[j], 0, m0));
        }
    }
    return out;
}

void c1(Outcome& o) {
    const auto sys = assemble(AnalyticCurve::circle(1.0), 256);
    const auto sp = solve_steklov(sys, Formulation::Regularized, 31);
    double err = 0.0;
    for (int j = 0; j <= 30; ++j) err = std::max(err, std::abs(sp.sigma[j] - std::ceil(j / 2.0)));
    o.detail << "max |sigma_j - ceil(j/2)| over j <= 30 = " << fmt(err) << " ";
    o.check(err < 1e-8, "error < 1e-8");
}

void c2(Outcome& o) {
    const auto sys = assemble(AnalyticCurve::ellipse(1.0, 1.01), 256);
    const auto sp = solve_steklov(sys, Formulation::Regularized, 31);
    o.detail << "sigma_20 = " << fmt(sp.sigma[20], 9) << ", sigma_30 = " << fmt(sp.sigma[30], 9) << " ";
    o.check(std::abs(sp.sigma[20] - 9.9502) <= 5e-4, "sigma_20 = 9.9502 +- 5e-4");
    o.check(std::abs(sp.sigma[30] - 14.9253) <= 5e-4, "sigma_30 = 14.9253 +- 5e-4");
}

// Cross-solver agreement on r:fe; returns the BIE spectrum for the regression.
SteklovSpectrum c3_agreement(Outcome& o) {
    const auto curve = boundary_curve(rfe_map());
    const auto sp = solve_steklov(assemble(curve, 1024), Formulation::Regularized, 64);
    const auto& d = rfe_disk();
    double diff = 0.0;
    const int last = std::min({d.j_max, static_cast<int>(sp.sigma.size()) - 1});
    for (int j = 0; j <= last; ++j) diff = std::max(diff, std::abs(sp.sigma[j] - d.sigma[j]));
    o.detail << "trusted j <= " << last << ", max |BIE - disk| = " << fmt(diff) << " ";
    o.check(last >= 60, "disk trusted prefix reaches j = 60");
    o.check(diff < 1e-8, "solvers agree to 1e-8");
    return sp;
}

void c3x(Outcome& o) { c3_agreement(o); }

void c3(Outcome& o) {
    const auto sp = c3_agreement(o);
    const auto& d = rfe_disk();
    const std::pair<int, double> ref[] = {{16, 7.9642}, {40, 19.8173}, {60, 29.8197}};
    for (auto [j, want] : ref) {
        o.detail << "sigma_" << j << " bie " << fmt(sp.sigma[j], 11) << " disk " << fmt(d.sigma[j], 11) << " (ref "
                 << want << ") ";
        o.check(std::abs(sp.sigma[j] - want) <= 5e-4, "BIE sigma_" + std::to_string(j) + " within 5e-4");
        o.check(std::abs(d.sigma[j] - want) <= 5e-4, "disk sigma_" + std::to_string(j) + " within 5e-4");
    }
}

void c4(Outcome& o) {
    struct Case {
        const char* name;
        AnalyticCurve curve;
        Box box;
    };
    const Case cases[] = {{"ellipse(2,1)", AnalyticCurve::ellipse(2.0, 1.0), {-2, 2, -1, 1}},
                          {"kite", AnalyticCurve::kite(), {-2, 1.2, -1.6, 1.6}}};
    for (const auto& c : cases) {
        int used = 0;
        double worst_rel = 0.0, plain_lo = 1.0, plain_hi = 0.0, shifted_200 = 0.0;
        bool blocks_decay = true;
        for (const auto& x : halton_points(c.curve, c.box, 400, 0.02)) {
            if (used == 5) break;
            const auto lam = lambda_of(c.curve, x);
            if (lam.lambda < 0.3 || lam.lambda > 0.48) continue;
            ++used;
            const double s = 0.8 * lam.lambda;
            const auto B0 = b_coefficients(c.curve, x, 0.0, 200);
            const auto Bs = b_coefficients(c.curve, x, s, 200, &lam);
            std::vector<double> shifted(201);
            for (int n = 1; n <= 200; ++n) {
                const double p = std::abs(B0[n]);
                const cplx q = std::exp(-n * s) * Bs[n];
                shifted[n] = std::abs(q);
                if (n <= 30 && p > 1e-12) worst_rel = std::max(worst_rel, std::abs(B0[n] - q) / p);
                if (n >= 100) plain_lo = std::min(plain_lo, p), plain_hi = std::max(plain_hi, p);
            }
            shifted_200 = std::max(shifted_200, shifted[200]);
            const double m1 = *std::max_element(shifted.begin() + 100, shifted.begin() + 150);
            const double m2 = *std::max_element(shifted.begin() + 150, shifted.end());
            blocks_decay = blocks_decay && m2 < m1;
        }
        o.detail << c.name << ": rel err(n<=30) " << fmt(worst_rel) << ", plain(n>=100) in [" << fmt(plain_lo, 2) << ", "
                 << fmt(plain_hi, 2) << "], shifted(200) <= " << fmt(shifted_200, 2) << "; ";
        o.check(used == 5, std::string(c.name) + ": 5 points with lambda in [0.3, 0.48]");
        o.check(worst_rel < 1e-9, std::string(c.name) + ": relative error < 1e-9");
        o.check(plain_lo > 1e-20 && plain_hi < 1e-14, std::string(c.name) + ": plain floor within [1e-20, 1e-14]");
        o.check(shifted_200 < 1e-24 && blocks_decay, std::string(c.name) + ": shifted decays below 1e-24");
    }
}

void c5(Outcome& o) {
    const auto circ = AnalyticCurve::circle(1.0);
    const auto ell = AnalyticCurve::ellipse(2.0, 1.0);
    double e1 = 0.0, e2 = 0.0;
    for (const auto& x : halton_points(circ, {-1, 1, -1, 1}, 100, 1e-3)) {
        e1 = std::max(e1, std::abs(lambda_of(circ, x, LambdaMethod::Newton).lambda + std::log(norm(x))));
    }
    for (const auto& x : halton_points(ell, {-2, 2, -1, 1}, 100, 1e-3)) {
        e2 = std::max(e2, std::abs(lambda_of(ell, x, LambdaMethod::Newton).lambda - lambda_ellipse(2.0, 1.0, x)));
    }
    o.detail << "circle max err " << fmt(e1) << ", ellipse(2,1) max err " << fmt(e2) << " ";
    o.check(e1 < 1e-11, "circle within 1e-11");
    o.check(e2 < 1e-11, "ellipse within 1e-11");
}

void c6(Outcome& o) {
    const auto ell = AnalyticCurve::ellipse(2.0, 1.0);
    for (Point2 x : {Point2{0.3, 0.2}, Point2{-0.7, 0.4}, Point2{1.2, -0.3}}) {
        const auto lam = lambda_of(ell, x);
        const int nq = adaptive_quadrature(200, lam, lam.lambda);
        const auto B1 = b_coefficients(ell, x, lam.lambda, 200, &lam, nq);
        const auto B2 = b_coefficients(ell, x, lam.lambda, 200, &lam, 2 * nq);
        double s1 = 0.0, s2 = 0.0;
        std::vector<double> v;
        for (int n = 1; n <= 200; ++n) {
            v.push_back(n * std::abs(B1[n]));
            s1 = std::max(s1, v.back());
            s2 = std::max(s2, n * std::abs(B2[n]));
        }
        std::vector<double> sorted = v;
        std::nth_element(sorted.begin(), sorted.begin() + 100, sorted.end());
        const double median = sorted[100];
        double weakest = 1e300;
        for (int k = 0; k <= 7; ++k) {
            double m = 0.0;
            for (int n = 1 << k; n <= std::min(2 << k, 200); ++n) m = std::max(m, v[n - 1]);
            weakest = std::min(weakest, m / median);
        }
        const double drift = std::abs(s1 - s2) / s1;
        o.detail << "(" << x.x1 << "," << x.x2 << "): sup " << fmt(s1) << " drift " << fmt(drift, 2) << " min block/median "
                 << fmt(weakest, 3) << "; ";
        o.check(std::isfinite(s1) && drift <= 0.01, "sup stable to 1% under doubling");
        o.check(weakest > 0.1, "every dyadic block above 10% of the median");
    }
}

void c7(Outcome& o) {
    const auto& d = rfe_disk();
    const int m0 = band_coefficients(rfe_map()).m0;
    int last = 0;
    while (last + 1 <= d.j_max && d.sigma[last + 1] <= 30.5) ++last;
    const auto tab = tunneling_table(d, last, m0);
    bool finite = true;
    double c_low = 0.0;
    std::vector<double> block_max(8, 0.0);
    for (const auto& e : tab) {
        finite = finite && std::isfinite(e.C0);
        c_low = std::max(c_low, e.C_low);
        const int k = std::clamp(static_cast<int>(std::floor(std::log2(e.sigma))), 0, 7);
        block_max[k] = std::max(block_max[k], e.C0);
    }
    o.detail << "j <= " << last << " (sigma <= " << fmt(d.sigma[last], 6) << "), C0 block maxima:";
    int seen = 0;
    bool monotone = true;
    double prev = 0.0;
    for (int k = 0; k < 8; ++k) {
        if (block_max[k] == 0.0) continue;
        o.detail << " [" << (1 << k) << "," << (2 << k) << "):" << fmt(block_max[k], 5);
        // The first block is exempt: compare from the third nonempty one on.
        if (++seen >= 3 && block_max[k] > prev) monotone = false;
        prev = block_max[k];
    }
    o.detail << ", max C_low " << fmt(c_low) << "; ";
    o.check(last >= 58, "trusted range reaches sigma ~ 30");
    o.check(finite, "C0 finite for every trusted pair");
    o.check(monotone, "block maxima non-increasing after the first block");
    o.check(std::isfinite(c_low) && c_low < 1.0, "C_low uniformly bounded");

    const BandCoefficients disk_band{{1.0}, 0};
    const auto dd = solve_disk(disk_band, 96, 64);
    const auto ctl = tunneling_table(dd, std::min(dd.j_max, 60), 0);
    const bool all_inf = std::all_of(ctl.begin(), ctl.end(), [](const TunnelingEntry& e) { return std::isinf(e.C0); });
    o.detail << "disk control: C0 = " << (all_inf ? "inf" : "finite") << " for all " << ctl.size() << " modes ";
    o.check(all_inf, "disk control reports C0 = inf");
}

void c8(Outcome& o) {
    const auto& d = rfe_disk();
    const int m0 = band_coefficients(rfe_map()).m0;
    for (int j : {16, 24, 32, 40, 48}) {
        std::vector<double> ms, ls;
        for (int m = m0 + 2; m <= m0 + 8; ++m) {
            const auto e = remainder_ratio(d.vectors[j], d.sigma[j], 0.1, m, 0, m0);
            ms.push_back(m);
            ls.push_back(std::log10(e.ratio));
        }
        const double slope = ls_slope(ms, ls);
        o.detail << "j=" << j << " slope " << fmt(slope, 4) << "; ";
        o.check(j <= d.j_max, "j = " + std::to_string(j) + " trusted");
        o.check(std::abs(slope + 1.0) <= 0.15, "slope within 0.15 of -1 at j = " + std::to_string(j));
    }
}

void c9(Outcome& o) {
    const auto& d = rfe_disk();
    const Box box{0.65, 0.95, -0.15, 0.15};
    double r_min = 1e300;
    for (int j : {16, 40, 60}) {
        const auto g = map_field_grid(rfe_map(), d.vectors[j], box, 512);
        const auto b = nonvanishing_ball(g, {0.8, 0.0}, 0.15);
        o.detail << "r1(sigma_" << j << ") = " << fmt(b.r1) << "; ";
        r_min = std::min(r_min, b.r1);
    }
    o.check(r_min > 0.02, "min r1 > 0.02");

    // Disk control: modes of frequency n, largest sign-constant disk in B(0, 1/2).
    const PolynomialConformalMap id{{1.0}, 0.0, true, {}};
    const auto dd = solve_disk(BandCoefficients{{1.0}, 0}, 96, 70);
    std::vector<double> ls, lr;
    o.detail << "disk control r1:";
    for (int n : {4, 8, 16, 32}) {
        const auto g = map_field_grid(id, dd.vectors[2 * n - 1], Box{-0.5, 0.5, -0.5, 0.5}, 512);
        const auto b = nonvanishing_ball(g, {0.0, 0.0}, 0.5);
        o.detail << " " << fmt(b.r1);
        ls.push_back(std::log(dd.sigma[2 * n - 1]));
        lr.push_back(std::log(b.r1));
    }
    const double slope = ls_slope(ls, lr);
    o.detail << ", log-log slope " << fmt(slope, 4) << " ";
    o.check(std::abs(slope + 1.0) <= 0.15, "disk control r1 ~ 1/sigma");
}

void c10(Outcome& o) {
    const auto circ = AnalyticCurve::circle(1.0);
    std::vector<double> sup;
    double root_err = 0.0;
    for (int N : {5, 10, 20}) {
        const auto map = mobius_approximant(0.8, N);
        for (const auto& r : map.roots) root_err = std::max(root_err, std::abs(std::abs(r) - 1.25));
        o.check(static_cast<int>(map.roots.size()) == N && map.certified, "N = " + std::to_string(N) + " certified");
        sup.push_back(boundary_offset(circ, boundary_curve(map), 512).sup_s);
    }
    const double r1 = std::pow(sup[1] / sup[0], 1.0 / 5.0), r2 = std::pow(sup[2] / sup[1], 1.0 / 10.0);
    o.detail << "sup|s| = " << fmt(sup[0]) << ", " << fmt(sup[1]) << ", " << fmt(sup[2]) << "; per-order ratios "
             << fmt(r1) << ", " << fmt(r2) << "; max ||root| - 1.25| = " << fmt(root_err, 2) << " ";
    o.check(sup[1] < sup[0] && sup[2] < sup[1], "sup|s| decreases");
    o.check(r1 >= 0.7 && r1 <= 0.9 && r2 >= 0.7 && r2 <= 0.9, "ratios in [0.7, 0.9]");
    o.check(root_err <= 1e-9, "roots of modulus 1.25");
}

struct Entry {
    std::string id;
    Criterion run;
    double limit_s;
};

bool run_one(const Entry& e) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        e.run(o);
    } catch (const std::exception& ex) {
        o.check(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < e.limit_s, "runtime < " + fmt(e.limit_s) + " s");
    std::printf("criterion %s: %s %s(%.2f s)\n", e.id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.str().c_str(), secs);
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Entry> all = {{"1", c1, 10},  {"2", c2, 60},  {"3", c3, 120},  {"3x", c3x, 120},
                                    {"4", c4, 60},  {"5", c5, 30},  {"6", c6, 60},   {"7", c7, 120},
                                    {"8", c8, 60},  {"9", c9, 120}, {"10", c10, 30}};
    bool ok = true;
    if (argc < 2) {
        for (const auto& e : all)
            if (e.id != "3x") ok = run_one(e) && ok;
        return ok ? 0 : 1;
    }
    for (int i = 1; i < argc; ++i) {
        const auto it = std::find_if(all.begin(), all.end(), [&](const Entry& e) { return e.id == argv[i]; });
        if (it == all.end()) {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
            return 2;
        }
        ok = run_one(*it) && ok;
    }
    return ok ? 0 : 1;
}
