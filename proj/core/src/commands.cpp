#include "steklov/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "steklov/analysis.hpp"
#include "steklov/error.hpp"
#include "steklov/io.hpp"
#include "steklov/reconstruction.hpp"

namespace steklov {
namespace {

constexpr double kPi = std::numbers::pi;

// Weyl estimate sigma_j ~ pi j / L, padded.
double sigma_estimate(double length, int n_keep) { return 1.1 * kPi * n_keep / length + 4.0; }

Box default_box(const AnalyticCurve& curve) {
    const auto pts = sample_curve(curve, 2048);
    Box b{pts[0].x1, pts[0].x1, pts[0].x2, pts[0].x2};
    for (const auto& p : pts) {
        b.x_min = std::min(b.x_min, p.x1);
        b.x_max = std::max(b.x_max, p.x1);
        b.y_min = std::min(b.y_min, p.x2);
        b.y_max = std::max(b.y_max, p.x2);
    }
    const double pad = 0.02 * std::max(b.x_max - b.x_min, b.y_max - b.y_min);
    return {b.x_min - pad, b.x_max + pad, b.y_min - pad, b.y_max + pad};
}

const PolynomialConformalMap& require_map(const Domain& d) {
    if (!d.map) throw Error(ErrorKind::ConfigError, "this command needs a conformal map domain");
    return *d.map;
}

RunConfig with_disk_solver(RunConfig cfg) {
    cfg.solver = SolverChoice::Disk;
    return cfg;
}

}  // namespace

const Artifact* CommandOutput::find(const std::string& name) const {
    for (const auto& a : files)
        if (a.name == name) return &a;
    return nullptr;
}

void write_artifacts(const std::string& dir, const CommandOutput& out) {
    for (const auto& a : out.files) write_atomic(std::filesystem::path(dir) / a.name, a.content);
}

int auto_nodes(const AnalyticCurve& curve, int n_keep) {
    const double s = sigma_estimate(curve.length(), n_keep);
    const int n = 32 * static_cast<int>(std::ceil(2.8 * s * curve.max_speed() / 32.0));
    return std::max(256, n);
}

int auto_truncation(const BandCoefficients& band, double length, int n_keep) {
    return default_truncation(band, sigma_estimate(length, n_keep));
}

ComputedSpectrum compute_spectrum(const RunConfig& cfg) {
    ComputedSpectrum out{resolve_domain(cfg.domain), std::nullopt, std::nullopt, {}, std::nullopt, std::nullopt};
    const AnalyticCurve& curve = out.domain.curve;

    if (cfg.solver != SolverChoice::Disk) {
        const int n = cfg.n_nodes > 0 ? cfg.n_nodes : auto_nodes(curve, cfg.n_keep);
        out.system = assemble(curve, n);
        out.bie = solve_steklov(*out.system, cfg.formulation, cfg.n_keep);
        out.bie_trusted.assign(out.bie->size(), true);
        if (cfg.verify) {
            int n2 = n + n / 2;
            n2 += n2 % 2;
            const auto fine = solve_steklov(assemble(curve, n2), cfg.formulation, cfg.n_keep);
            for (std::size_t j = 0; j < out.bie->size(); ++j) {
                const double s = out.bie->sigma[j];
                out.bie_trusted[j] = j < fine.size() && std::abs(fine.sigma[j] - s) <= 1e-9 * (1.0 + s);
            }
        }
    }
    if (cfg.solver != SolverChoice::Bie) {
        const auto& map = require_map(out.domain);
        out.band = band_coefficients(map);
        const int N_tr = cfg.N_tr > 0 ? cfg.N_tr : auto_truncation(*out.band, curve.length(), cfg.n_keep);
        out.disk = solve_disk(*out.band, N_tr, cfg.n_keep);
    }
    return out;
}

CommandOutput run_spectrum(const RunConfig& cfg) {
    const ComputedSpectrum spec = compute_spectrum(cfg);
    CommandOutput out;
    const bool both = cfg.solver == SolverChoice::Both;
    std::vector<std::string> header{"j", "sigma", "residual", "trusted"};
    if (both) {
        header.emplace_back("sigma_disk");
        header.emplace_back("abs_diff");
    }
    CsvWriter csv(header);
    std::vector<double> listed;

    if (spec.bie) {
        const auto& b = *spec.bie;
        std::size_t rows = b.size();
        if (both) rows = std::min(rows, spec.disk->sigma.size());
        double max_diff = 0.0;
        for (std::size_t j = 0; j < rows; ++j) {
            bool trusted = spec.bie_trusted[j];
            csv.row().cell(static_cast<long long>(j)).cell(b.sigma[j]).cell(b.residual[j]);
            if (both) {
                const double sd = spec.disk->sigma[j];
                trusted = trusted && spec.disk->trusted[j];
                csv.cell(trusted).cell(sd).cell(std::abs(sd - b.sigma[j]));
                if (trusted) max_diff = std::max(max_diff, std::abs(sd - b.sigma[j]));
            } else {
                csv.cell(trusted);
            }
            listed.push_back(b.sigma[j]);
        }
        if (both) out.notes.push_back("max |sigma_bie - sigma_disk| over trusted rows: " + format_double(max_diff));

        // Node values of the eigen-densities, one column per j.
        std::vector<std::string> dh{"t"};
        for (std::size_t j = 0; j < b.size(); ++j) dh.push_back("phi_" + std::to_string(j));
        CsvWriter dens(dh);
        for (int i = 0; i < spec.system->n_nodes; ++i) {
            dens.row().cell(spec.system->t[static_cast<std::size_t>(i)]);
            for (std::size_t j = 0; j < b.size(); ++j) dens.cell(b.densities(i, static_cast<Eigen::Index>(j)));
        }
        out.files.push_back({"densities.csv", dens.str()});
    } else {
        const auto& d = *spec.disk;
        for (std::size_t j = 0; j < d.sigma.size(); ++j) {
            csv.row().cell(static_cast<long long>(j)).cell(d.sigma[j]).cell(d.residual[j]).cell(
                static_cast<bool>(d.trusted[j]));
            listed.push_back(d.sigma[j]);
        }
    }
    if (spec.disk) {
        CsvWriter vec({"j", "k", "re", "im"});
        const auto& d = *spec.disk;
        for (std::size_t j = 0; j < d.vectors.size(); ++j) {
            const auto& u = d.vectors[j];
            for (int k = -u.N; k <= u.N; ++k)
                vec.row().cell(static_cast<long long>(j)).cell(k).cell(u(k).real()).cell(u(k).imag());
        }
        out.files.push_back({"disk_vectors.csv", vec.str()});
        out.notes.push_back("disk solver: N_tr = " + std::to_string(d.N_tr) + ", trusted through j = " +
                            std::to_string(d.j_max));
    }
    out.files.insert(out.files.begin(), {"spectrum.csv", csv.str()});

    // Index reconciliation: show the computed neighbours of each expected value.
    for (const auto& e : cfg.expect) {
        std::ostringstream os;
        os << "expected sigma_" << e.j << " = " << format_double(e.sigma) << "; computed:";
        for (int j = e.j - 1; j <= e.j + 1; ++j) {
            if (j < 0 || j >= static_cast<int>(listed.size())) continue;
            os << " sigma_" << j << " = " << format_double(listed[static_cast<std::size_t>(j)]);
        }
        out.notes.push_back(os.str());
    }
    return out;
}

CommandOutput run_cauchy_table(const RunConfig& cfg) {
    const Domain dom = resolve_domain(cfg.domain);
    const AnalyticCurve& curve = dom.curve;
    Point2 x = cfg.point.value_or(dom.map ? Point2{dom.map->f0.real(), dom.map->f0.imag()} : Point2{0.0, 0.0});
    std::vector<int> ns = cfg.n_list;
    if (ns.empty()) ns = {1, 2, 3, 5, 10, 15, 20, 25, 30, 50, 100, 120, 140, 160, 180, 200};
    const int n_max = *std::max_element(ns.begin(), ns.end());

    const LambdaResult lam = lambda_of(curve, x);
    double s = cfg.alpha * lam.lambda;
    if (!std::isfinite(s) || n_max * s > 600.0) s = 600.0 / std::max(n_max, 1);
    const auto plain = b_coefficients(curve, x, 0.0, n_max);
    const auto shifted = b_coefficients(curve, x, s, n_max, &lam);

    CsvWriter csv({"n", "plain", "shifted", "abs_error", "rel_error"});
    for (int n : ns) {
        const cplx p = plain[static_cast<std::size_t>(n)];
        const cplx q = std::exp(-n * s) * shifted[static_cast<std::size_t>(n)];
        const double err = std::abs(p - q);
        csv.row().cell(n).cell(std::abs(p)).cell(std::abs(q)).cell(err).cell(err / std::abs(p));
    }
    CommandOutput out;
    out.files.push_back({"cauchy.csv", csv.str()});
    out.notes.push_back("lambda(x) = " + format_double(lam.lambda) + ", contour shift s = " + format_double(s));
    return out;
}

CommandOutput run_render(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    cfg.n_keep = std::max(cfg.n_keep, cfg.render_index + 2);
    if (cfg.solver == SolverChoice::Both) cfg.solver = SolverChoice::Disk;
    const ComputedSpectrum spec = compute_spectrum(cfg);
    const AnalyticCurve& curve = spec.domain.curve;
    const Box box = cfg.box.value_or(default_box(curve));
    const auto j = static_cast<std::size_t>(cfg.render_index);

    FieldGrid grid;
    double sigma = 0.0;
    if (spec.bie) {
        if (j >= spec.bie->size()) throw Error(ErrorKind::TooFewConverged, "render index beyond the computed spectrum");
        sigma = spec.bie->sigma[j];
        const Eigen::VectorXd phi = spec.bie->density(j);
        const DensitySpectrum dens = fourier_density({phi.data(), static_cast<std::size_t>(phi.size())}, curve);
        grid = build_field_grid(curve, dens, box, cfg.resolution, FieldOptions{cfg.alpha, 0, sigma});
    } else {
        if (j >= spec.disk->sigma.size()) throw Error(ErrorKind::TooFewConverged, "render index beyond the computed spectrum");
        sigma = spec.disk->sigma[j];
        grid = map_field_grid(*spec.domain.map, spec.disk->vectors[j], box, cfg.resolution);
    }

    CommandOutput out;
    out.files.push_back({"sign.pgm", pgm_sign_map(grid)});
    out.files.push_back({"nodal.svg", svg_polylines(nodal_extract(grid), box)});
    out.files.push_back({"field.csv", field_csv(grid)});
    if (cfg.ball_center) {
        const auto ball = nonvanishing_ball(grid, *cfg.ball_center, cfg.ball_r0);
        CsvWriter csv({"sigma", "cx", "cy", "r1"});
        csv.row().cell(sigma).cell(ball.center.x1).cell(ball.center.x2).cell(ball.r1);
        out.files.push_back({"balls.csv", csv.str()});
    }
    out.notes.push_back("rendered sigma_" + std::to_string(j) + " = " + format_double(sigma));
    return out;
}

CommandOutput run_approximate(const RunConfig& cfg) {
    const ApproximationTarget& tg = cfg.target;
    if (!tg.mobius && tg.series.empty()) throw Error(ErrorKind::ConfigError, "approximate: no target map given");
    const int N_top = cfg.N_list.empty() ? 0 : *std::max_element(cfg.N_list.begin(), cfg.N_list.end());

    // A disk automorphism maps the circle to itself; otherwise the target
    // boundary is built on first use so that uncertifiable rows can still be
    // reported for targets whose boundary is not a simple curve.
    const PowerSeries f = tg.mobius ? mobius_series(*tg.mobius, static_cast<std::size_t>(N_top) + 2) : PowerSeries{tg.series};
    const PowerSeries g = series_derivative(f);
    if (g.c.empty() || g.c[0] == 0.0) throw Error(ErrorKind::ZeroAtOrigin, "approximate: f'(0) = 0");
    std::optional<AnalyticCurve> target;
    if (tg.mobius) target = AnalyticCurve::circle(1.0);

    CsvWriter csv({"N", "sup_s", "max_ds", "certified"});
    CommandOutput out;
    for (int N : cfg.N_list) {
        const PowerSeries w = sqrt_series(g, N);
        try {
            const auto map = truncate_and_certify(w, N, f[0]);
            if (!target) target = series_boundary_curve(f);
            const auto prof = boundary_offset(*target, boundary_curve(map), cfg.offset_samples);
            csv.row().cell(N).cell(prof.sup_s).cell(prof.sup_ds).cell(true);
        } catch (const RootInsideDiskError& e) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            csv.row().cell(N).cell(nan).cell(nan).cell(false);
            out.notes.push_back("N = " + std::to_string(N) + ": " + e.what());
        }
    }
    out.files.push_back({"approximate.csv", csv.str()});
    return out;
}

CommandOutput run_tunneling(const RunConfig& cfg) {
    const ComputedSpectrum spec = compute_spectrum(with_disk_solver(cfg));
    const auto& d = *spec.disk;
    CsvWriter csv({"j", "sigma", "A_0", "C0", "C_low"});
    const int n = std::min(d.j_max + 1, static_cast<int>(d.sigma.size()));
    const auto at = [&](int j) { return static_cast<std::size_t>(j); };
    // Eigenvalues within 1e-8 form a 2D eigenspace; both members report the
    // worst vector of the rotation sweep.
    const auto paired = [&](int j, int k) {
        return k >= 0 && k < n && std::abs(d.sigma[at(j)] - d.sigma[at(k)]) <= 1e-8 * (1.0 + d.sigma[at(j)]);
    };
    CommandOutput out;
    int clusters = 0;
    for (int j = 0; j < n; ++j) {
        TunnelingEntry e;
        if (paired(j, j + 1) || paired(j, j - 1)) {
            const int k = paired(j, j + 1) ? j + 1 : j - 1;
            const int a = std::min(j, k), b = std::max(j, k);
            e = tunneling_worst_over_pair(d.vectors[at(a)], d.vectors[at(b)], d.sigma[at(j)], cfg.m_tunnel,
                                          spec.band->m0, cfg.K);
            if (j == a) ++clusters;
        } else {
            e = tunneling_constants(d.vectors[at(j)], d.sigma[at(j)], cfg.m_tunnel, spec.band->m0, cfg.K);
        }
        csv.row().cell(j).cell(e.sigma).cell(e.A_m).cell(e.C0).cell(e.C_low);
    }
    if (clusters > 0) out.notes.push_back(std::to_string(clusters) + " eigenvalue pair(s) reported as worst case over a 32-angle rotation");
    out.files.push_back({"tunneling.csv", csv.str()});
    return out;
}

CommandOutput run_remainder(const RunConfig& cfg) {
    const ComputedSpectrum spec = compute_spectrum(with_disk_solver(cfg));
    const auto& d = *spec.disk;
    const int m0 = spec.band->m0;
    std::vector<int> ms = cfg.m_list;
    if (ms.empty())
        for (int m = m0 + 2; m <= m0 + 8; ++m) ms.push_back(m);

    CommandOutput out;
    CsvWriter csv({"sigma", "delta", "m", "N", "ratio", "bound"});
    for (double delta : cfg.delta) {
        std::vector<RemainderEntry> entries;
        for (int j = 1; j <= d.j_max && j < static_cast<int>(d.sigma.size()); ++j)
            for (int m : ms)
                entries.push_back(
                    remainder_ratio(d.vectors[static_cast<std::size_t>(j)], d.sigma[static_cast<std::size_t>(j)], delta, m, cfg.N, m0));
        if (entries.empty()) continue;
        const auto fit = fit_remainder_bound(entries, m0);
        for (const auto& e : entries) csv.row().cell(e.sigma).cell(e.delta).cell(e.m).cell(e.N).cell(e.ratio).cell(e.bound);
        out.notes.push_back("delta = " + format_double(delta) + ": C_N = " + format_double(fit.C_N) +
                            ", c = " + format_double(fit.c));
    }
    out.files.push_back({"remainder.csv", csv.str()});
    return out;
}

}  // namespace steklov
