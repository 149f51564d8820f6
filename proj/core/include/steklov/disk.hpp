#pragma once

#include <vector>

#include <Eigen/Dense>

#include "steklov/conformal.hpp"

namespace steklov {

/// Coefficients c(k) for k = -N..N, stored at position k + N.
struct FourierVector {
    int N = 0;
    std::vector<cplx> c;

    static FourierVector zeros(int N) { return {N, std::vector<cplx>(static_cast<std::size_t>(2 * N + 1), 0.0)}; }
    cplx operator()(int k) const {
        return (k < -N || k > N) ? cplx{} : c[static_cast<std::size_t>(k + N)];
    }
    cplx& at(int k) { return c.at(static_cast<std::size_t>(k + N)); }
    double norm() const;
    /// Harmonic extension sum_k c(k) r^{|k|} e^{ik theta} at z = r e^{i theta}.
    double extend(cplx z) const;
};

// D u = sigma A u with D = diag(|n|), A_{n,k} = a_{n-k}, n, k = -N_tr..N_tr.
struct DiskPencil {
    int N_tr = 0;
    int m0 = 0;
    Eigen::VectorXd d;
    // LAPACK upper band storage of A: ab(m0 + i - j, j) = A(i, j), max(0, j-m0) <= i <= j.
    Eigen::MatrixXcd ab;

    Eigen::Index dim() const noexcept { return d.size(); }
    Eigen::MatrixXcd dense_A() const;
};

/// Throws InvalidArgument unless a0 > 0 and N_tr > 4 m0; NotPositiveDefinite
/// if the Cholesky factorization of A fails.
DiskPencil assemble_pencil(const BandCoefficients& a, int N_tr);

struct DiskSpectrum {
    int N_tr = 0;
    std::vector<double> sigma;
    std::vector<FourierVector> vectors;  // unit l2, u(-k) = conj(u(k))
    std::vector<double> residual;        // ||D u - sigma A u||
    std::vector<bool> trusted;
    int j_max = -1;  // last index of the trusted prefix
};

/// Smallest n_keep eigenpairs (all if n_keep <= 0). Trust is decided by a
/// second eigenvalue-only solve at 2 N_tr.
DiskSpectrum solve_disk(const BandCoefficients& a, int N_tr, int n_keep = 0);

/// Eigenvalues only (ascending), first n_keep.
std::vector<double> disk_eigenvalues(const BandCoefficients& a, int N_tr, int n_keep);

/// Default truncation for resolving sigma up to sigma_target.
int default_truncation(const BandCoefficients& a, double sigma_target);

/// The boundary Fourier coefficients are the eigenvector entries.
struct PullbackView {
    FourierVector coeffs;
    double operator()(cplx z) const { return coeffs.extend(z); }
};
PullbackView pullback_fourier(const DiskSpectrum& spectrum, std::size_t j);

}  // namespace steklov
