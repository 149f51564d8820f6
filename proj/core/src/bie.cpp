#include "steklov/bie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lapack_wrap.hpp"
#include "steklov/error.hpp"

namespace steklov {

namespace {

constexpr double kPi = std::numbers::pi;

// Quadrature weights for integral log(4 sin^2((t - tau)/2)) phi(tau) dtau,
// indexed by the node difference k = i - j (mod n).
std::vector<double> log_weights(int n) {
    const int N = n / 2;
    std::vector<double> R(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double tk = 2.0 * kPi * k / n;
        double acc = 0.0;
        for (int m = 1; m < N; ++m) acc += std::cos(m * tk) / m;
        R[static_cast<std::size_t>(k)] = -(2.0 * kPi / N) * acc - (kPi / (double(N) * N)) * std::cos(N * tk);
    }
    return R;
}

void orthonormalize(Eigen::MatrixXd& V, Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index j = begin; j < end; ++j) {
        for (Eigen::Index k = begin; k < j; ++k) V.col(j) -= V.col(k).dot(V.col(j)) * V.col(k);
        const double nrm = V.col(j).norm();
        if (nrm > 0) V.col(j) /= nrm;
    }
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    const double mx = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-3 * mx) {
            if (v(i) < 0) v = -v;
            return;
        }
    }
}

}  // namespace

NystromSystem assemble(const AnalyticCurve& curve, int n_nodes) {
    if (n_nodes < 16 || n_nodes % 2 != 0) {
        throw Error(ErrorKind::InvalidArgument, "n_nodes must be even and at least 16");
    }
    const std::size_t n = static_cast<std::size_t>(n_nodes);
    NystromSystem sys{curve, n_nodes, {}, {}, {}, {}, {}, {}};
    sys.t.resize(n);
    sys.points.resize(n);
    sys.speed.resize(n);
    std::vector<Point2> d1(n), d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        sys.t[i] = 2.0 * kPi * static_cast<double>(i) / n_nodes;
        const auto jet = curve.jet(sys.t[i]);
        sys.points[i] = {jet[0].c1.real(), jet[0].c2.real()};
        d1[i] = {jet[1].c1.real(), jet[1].c2.real()};
        d2[i] = {jet[2].c1.real(), jet[2].c2.real()};
        sys.speed[i] = norm(d1[i]);
        if (!(sys.speed[i] > 1e-14 * curve.max_speed())) {
            throw Error(ErrorKind::DegenerateCurve, "curve speed vanishes at a quadrature node");
        }
    }

    const auto R = log_weights(n_nodes);
    const double h = 2.0 * kPi / n_nodes;
    sys.S.resize(n_nodes, n_nodes);
    sys.T.resize(n_nodes, n_nodes);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 nu{d1[i].x2 / sys.speed[i], -d1[i].x1 / sys.speed[i]};
        for (std::size_t j = 0; j < n; ++j) {
            const Eigen::Index ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            const double rw = R[(i + n - j) % n];
            if (i == j) {
                const double L = std::log(sys.speed[i] * sys.speed[i]);
                sys.S(ii, jj) = -(rw + h * L) * sys.speed[j] / (4.0 * kPi);
                sys.T(ii, jj) = dot(d2[i], nu) / (4.0 * kPi * sys.speed[i]) * h;
            } else {
                const Point2 diff = sys.points[i] - sys.points[j];
                const double r2 = dot(diff, diff);
                const double sn = std::sin(0.5 * (sys.t[i] - sys.t[j]));
                const double L = std::log(r2 / (4.0 * sn * sn));
                sys.S(ii, jj) = -(rw + h * L) * sys.speed[j] / (4.0 * kPi);
                sys.T(ii, jj) = -dot(diff, nu) / (2.0 * kPi * r2) * sys.speed[j] * h;
            }
        }
    }
    double total = 0.0;
    for (double s : sys.speed) total += s;
    Eigen::RowVectorXd w(n_nodes);
    for (std::size_t j = 0; j < n; ++j) w(static_cast<Eigen::Index>(j)) = sys.speed[j] / total;
    sys.W = Eigen::VectorXd::Ones(n_nodes) * w;
    return sys;
}

Eigen::MatrixXd pencil_lhs(const NystromSystem& sys, Formulation form) {
    const Eigen::Index n = sys.n_nodes;
    Eigen::MatrixXd L = sys.T;
    L.diagonal().array() += 0.5;
    if (form == Formulation::Regularized) {
        // (1/2 I + T)(I - W) with W = 1 w^T
        const Eigen::RowVectorXd w = sys.W.row(0);
        const Eigen::VectorXd L1 = L * Eigen::VectorXd::Ones(n);
        L -= L1 * w;
    }
    return L;
}

Eigen::MatrixXd pencil_rhs(const NystromSystem& sys, Formulation form) {
    const Eigen::Index n = sys.n_nodes;
    Eigen::MatrixXd R = sys.S;
    if (form == Formulation::Regularized) {
        const Eigen::RowVectorXd w = sys.W.row(0);
        const Eigen::VectorXd S1 = sys.S * Eigen::VectorXd::Ones(n);
        R += (Eigen::VectorXd::Ones(n) - S1) * w;
    }
    return R;
}

SteklovSpectrum solve_steklov(const NystromSystem& sys, Formulation form, int n_keep, const SolveOptions& opts) {
    if (n_keep < 1 || n_keep > sys.n_nodes) throw Error(ErrorKind::InvalidArgument, "n_keep out of range");
    const Eigen::Index n = sys.n_nodes;
    const Eigen::MatrixXd L = pencil_lhs(sys, form);
    const Eigen::MatrixXd R = pencil_rhs(sys, form);

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(R);
    if (form == Formulation::Naive && !(lu.rcond() > 1e-12)) {
        throw Error(ErrorKind::SingularRHS, "single-layer matrix is numerically singular (capacity-one curve?)");
    }
    Eigen::MatrixXd M = lu.solve(L);

    std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
    Eigen::MatrixXd vr(n, n);
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), M.data(),
                                          static_cast<lapack_int>(n), wr.data(), wi.data(), nullptr, 1,
                                          vr.data(), static_cast<lapack_int>(n));
    if (info != 0) throw Error(ErrorKind::LapackFailure, "dgeev failed with info " + std::to_string(info));

    struct Candidate {
        double sigma;
        Eigen::Index col;
        bool imag_part;
    };
    std::vector<Candidate> cand;
    for (Eigen::Index j = 0; j < n; ++j) {
        const std::size_t uj = static_cast<std::size_t>(j);
        const double s = wr[uj];
        if (wi[uj] == 0.0) {
            cand.push_back({s, j, false});
            continue;
        }
        if (std::abs(wi[uj]) <= opts.tau_im * (1.0 + std::abs(s))) {
            // Near-real pair: Re and Im parts of the complex eigenvector span
            // the (numerically split) real eigenspace.
            cand.push_back({s, j, false});
            cand.push_back({s, j, true});
        }
        ++j;
    }
    std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.sigma < b.sigma; });

    const double normL = L.norm(), normR = R.norm();
    SteklovSpectrum out;
    out.formulation = form;
    out.densities.resize(n, n_keep);
    Eigen::Index kept = 0;
    for (const auto& c : cand) {
        if (kept == n_keep) break;
        if (c.sigma < -opts.tau_im) continue;
        Eigen::VectorXd v = c.imag_part ? vr.col(c.col + 1) : vr.col(c.col);
        const double vn = v.norm();
        if (!(vn > 0)) continue;
        v /= vn;
        const double res = (L * v - c.sigma * (R * v)).norm() / (normL + std::abs(c.sigma) * normR);
        if (!(res <= opts.tau_res)) continue;
        out.sigma.push_back(c.sigma);
        out.residual.push_back(res);
        out.densities.col(kept++) = v;
    }
    if (kept < n_keep) {
        throw Error(ErrorKind::TooFewConverged, "only " + std::to_string(kept) + " of " + std::to_string(n_keep) +
                                                    " eigenpairs passed the filters");
    }

    out.cluster.assign(out.sigma.size(), 0);
    Eigen::Index begin = 0;
    int id = 0;
    for (Eigen::Index j = 1; j <= n_keep; ++j) {
        const bool split = j == n_keep || std::abs(out.sigma[static_cast<std::size_t>(j)] -
                                                   out.sigma[static_cast<std::size_t>(j - 1)]) >
                                              opts.cluster_tol * (1.0 + std::abs(out.sigma[static_cast<std::size_t>(j)]));
        if (split) {
            orthonormalize(out.densities, begin, j);
            for (Eigen::Index k = begin; k < j; ++k) {
                out.cluster[static_cast<std::size_t>(k)] = id;
                fix_sign(out.densities.col(k));
            }
            ++id;
            begin = j;
        }
    }
    return out;
}

Eigen::VectorXd boundary_trace(const NystromSystem& sys, const Eigen::VectorXd& density, Formulation form) {
    if (form == Formulation::Naive) return sys.S * density;
    const Eigen::VectorXd mean = sys.W * density;
    return sys.S * (density - mean) + mean;
}

double interior_eval_direct(const NystromSystem& sys, std::span<const double> density, Point2 x) {
    if (density.size() != sys.points.size()) throw Error(ErrorKind::InvalidArgument, "density size mismatch");
    if (!point_in_domain(sys.curve, x)) throw Error(ErrorKind::OutsideDomain, "evaluation point outside the domain");
    const std::size_t n = density.size();
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += sys.W(0, static_cast<Eigen::Index>(j)) * density[j];
    const double h = 2.0 * kPi / sys.n_nodes;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const Point2 d = x - sys.points[j];
        acc += std::log(dot(d, d)) * (density[j] - mean) * sys.speed[j];
    }
    return mean - acc * h / (4.0 * kPi);
}

}  // namespace steklov
