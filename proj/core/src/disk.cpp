#include "steklov/disk.hpp"

#include <algorithm>
#include <cmath>

#include "lapack_wrap.hpp"
#include "steklov/error.hpp"

namespace steklov {

double FourierVector::norm() const {
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    return std::sqrt(s);
}

double FourierVector::extend(cplx z) const {
    // sum_k c(k) r^{|k|} e^{ik theta} = c(0) + sum_{k>0} c(k) z^k + c(-k) conj(z)^k
    cplx acc_pos = 0.0, acc_neg = 0.0;
    const cplx zb = std::conj(z);
    for (int k = N; k >= 1; --k) {
        acc_pos = (acc_pos + (*this)(k)) * z;
        acc_neg = (acc_neg + (*this)(-k)) * zb;
    }
    return ((*this)(0) + acc_pos + acc_neg).real();
}

Eigen::MatrixXcd DiskPencil::dense_A() const {
    const Eigen::Index n = dim();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = std::max<Eigen::Index>(0, j - m0); i <= j; ++i) {
            A(i, j) = ab(m0 + i - j, j);
            A(j, i) = std::conj(A(i, j));
        }
    }
    return A;
}

DiskPencil assemble_pencil(const BandCoefficients& a, int N_tr) {
    if (!(a.a0() > 0.0)) throw Error(ErrorKind::InvalidArgument, "band coefficient a0 must be positive");
    if (N_tr <= 4 * a.m0) throw Error(ErrorKind::InvalidArgument, "truncation must exceed 4 m0");
    DiskPencil P;
    P.N_tr = N_tr;
    P.m0 = a.m0;
    const Eigen::Index n = 2 * N_tr + 1;
    P.d.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) P.d(i) = std::abs(static_cast<double>(i - N_tr));
    P.ab = Eigen::MatrixXcd::Zero(a.m0 + 1, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = std::max<Eigen::Index>(0, j - a.m0); i <= j; ++i) {
            P.ab(a.m0 + i - j, j) = a(static_cast<int>(i - j));
        }
    }
    Eigen::MatrixXcd chol = P.ab;
    const lapack_int info = LAPACKE_zpbtrf(LAPACK_COL_MAJOR, 'U', static_cast<lapack_int>(n),
                                           static_cast<lapack_int>(a.m0), chol.data(),
                                           static_cast<lapack_int>(a.m0 + 1));
    if (info != 0) throw Error(ErrorKind::NotPositiveDefinite, "band Toeplitz matrix is not positive definite");
    return P;
}

namespace {

struct RawSolve {
    std::vector<double> w;
    Eigen::MatrixXcd z;
};

RawSolve banded_solve(const DiskPencil& P, int n_keep, bool vectors) {
    const lapack_int n = static_cast<lapack_int>(P.dim());
    const lapack_int k = static_cast<lapack_int>(P.m0);
    const lapack_int keep = n_keep <= 0 ? n : std::min<lapack_int>(n_keep, n);
    Eigen::MatrixXcd dab = Eigen::MatrixXcd::Zero(k + 1, n);
    dab.row(k) = P.d.cast<cplx>().transpose();
    Eigen::MatrixXcd bb = P.ab;
    RawSolve out;
    out.w.resize(static_cast<std::size_t>(n));
    if (vectors) out.z.resize(n, keep);
    Eigen::MatrixXcd q(vectors ? n : 1, vectors ? n : 1);
    std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
    lapack_int m = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info = LAPACKE_zhbgvx(
        LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'I', 'U', n, k, k, dab.data(), k + 1, bb.data(), k + 1, q.data(),
        vectors ? n : 1, 0.0, 0.0, 1, keep, abstol, &m, out.w.data(), vectors ? out.z.data() : nullptr,
        vectors ? n : 1, ifail.data());
    if (info != 0) throw Error(ErrorKind::LapackFailure, "zhbgvx failed with info " + std::to_string(info));
    out.w.resize(static_cast<std::size_t>(m));
    if (vectors) out.z.conservativeResize(n, m);
    return out;
}

// J v(k) = conj(v(-k)) in storage order.
Eigen::VectorXcd reflect(const Eigen::VectorXcd& v) {
    const Eigen::Index n = v.size();
    Eigen::VectorXcd r(n);
    for (Eigen::Index i = 0; i < n; ++i) r(i) = std::conj(v(n - 1 - i));
    return r;
}

// Replaces a cluster of eigenvectors by an orthonormal basis of vectors with
// u(-k) = conj(u(k)) spanning the same space.
void realify(Eigen::MatrixXcd& Z, Eigen::Index begin, Eigen::Index end) {
    std::vector<Eigen::VectorXcd> cands;
    for (Eigen::Index j = begin; j < end; ++j) {
        const Eigen::VectorXcd v = Z.col(j);
        const Eigen::VectorXcd jv = reflect(v);
        cands.push_back(v + jv);
        cands.push_back(cplx(0, 1) * (v - jv));
    }
    std::vector<Eigen::VectorXcd> basis;
    while (static_cast<Eigen::Index>(basis.size()) < end - begin) {
        double best = -1.0;
        std::size_t bi = 0;
        for (std::size_t c = 0; c < cands.size(); ++c) {
            Eigen::VectorXcd r = cands[c];
            for (const auto& b : basis) r -= b.dot(r) * b;
            if (r.norm() > best) {
                best = r.norm();
                bi = c;
            }
        }
        Eigen::VectorXcd r = cands[bi];
        for (const auto& b : basis) r -= b.dot(r) * b;
        r /= r.norm();
        basis.push_back(r);
    }
    for (Eigen::Index j = begin; j < end; ++j) {
        Eigen::VectorXcd v = basis[static_cast<std::size_t>(j - begin)];
        // Enforce exact symmetry and fix the overall sign.
        v = 0.5 * (v + reflect(v));
        v /= v.norm();
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        const cplx piv = v(imax);
        const double sgn = std::abs(piv.real()) >= 1e-3 * std::abs(piv) ? (piv.real() < 0 ? -1.0 : 1.0)
                                                                          : (piv.imag() < 0 ? -1.0 : 1.0);
        Z.col(j) = sgn * v;
    }
}

}  // namespace

std::vector<double> disk_eigenvalues(const BandCoefficients& a, int N_tr, int n_keep) {
    return banded_solve(assemble_pencil(a, N_tr), n_keep, false).w;
}

DiskSpectrum solve_disk(const BandCoefficients& a, int N_tr, int n_keep) {
    const DiskPencil P = assemble_pencil(a, N_tr);
    RawSolve raw = banded_solve(P, n_keep, true);
    const Eigen::Index m = static_cast<Eigen::Index>(raw.w.size());

    Eigen::Index begin = 0;
    for (Eigen::Index j = 1; j <= m; ++j) {
        const bool split = j == m || std::abs(raw.w[static_cast<std::size_t>(j)] - raw.w[static_cast<std::size_t>(j - 1)]) >
                                         1e-8 * (1.0 + std::abs(raw.w[static_cast<std::size_t>(j)]));
        if (split) {
            realify(raw.z, begin, j);
            begin = j;
        }
    }

    const Eigen::MatrixXcd A = P.dense_A();
    DiskSpectrum out;
    out.N_tr = N_tr;
    out.sigma = raw.w;
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXcd v = raw.z.col(j);
        FourierVector fv = FourierVector::zeros(N_tr);
        for (Eigen::Index i = 0; i < v.size(); ++i) fv.c[static_cast<std::size_t>(i)] = v(i);
        out.vectors.push_back(std::move(fv));
        const Eigen::VectorXcd r = P.d.cast<cplx>().cwiseProduct(v) - raw.w[static_cast<std::size_t>(j)] * (A * v);
        out.residual.push_back(r.norm());
    }

    const auto fine = disk_eigenvalues(a, 2 * N_tr, static_cast<int>(m));
    out.trusted.assign(static_cast<std::size_t>(m), false);
    for (std::size_t j = 0; j < out.sigma.size() && j < fine.size(); ++j) {
        out.trusted[j] = std::abs(out.sigma[j] - fine[j]) < 1e-10;
    }
    out.j_max = -1;
    while (out.j_max + 1 < static_cast<int>(m) && out.trusted[static_cast<std::size_t>(out.j_max + 1)]) ++out.j_max;
    return out;
}

int default_truncation(const BandCoefficients& a, double sigma_target) {
    const double top = a.max_value(1024);
    const int n = static_cast<int>(std::ceil(2.0 * sigma_target * top)) + 64;
    return std::max({n, 4 * a.m0 + 1, 256});
}

PullbackView pullback_fourier(const DiskSpectrum& spectrum, std::size_t j) {
    return {spectrum.vectors.at(j)};
}

}  // namespace steklov
