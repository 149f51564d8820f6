#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "steklov/curve.hpp"

namespace steklov {

/// Nystrom discretization of the single-layer operator S and of the normal
/// derivative operator T on n equispaced parameter nodes.
struct NystromSystem {
    AnalyticCurve curve;
    int n_nodes = 0;
    std::vector<double> t;       // nodes 2 pi i / n
    std::vector<Point2> points;  // C(t_i)
    std::vector<double> speed;   // |C'(t_i)|
    Eigen::MatrixXd S;
    Eigen::MatrixXd T;
    Eigen::MatrixXd W;  // arclength-weighted mean projector (rank one)
};

enum class Formulation { Regularized, Naive };

struct SteklovSpectrum {
    Formulation formulation = Formulation::Regularized;
    std::vector<double> sigma;      // ascending
    Eigen::MatrixXd densities;      // column j: unit-l2 density of sigma_j
    std::vector<double> residual;   // relative pencil residual
    std::vector<int> cluster;       // cluster id; equal ids share an eigenspace

    std::size_t size() const noexcept { return sigma.size(); }
    Eigen::VectorXd density(std::size_t j) const { return densities.col(static_cast<Eigen::Index>(j)); }
};

/// Throws InvalidArgument unless n_nodes is even and >= 16, DegenerateCurve
/// if the speed vanishes at a node.
NystromSystem assemble(const AnalyticCurve& curve, int n_nodes);

/// Left and right operators of the pencil L phi = sigma R phi.
Eigen::MatrixXd pencil_lhs(const NystromSystem& sys, Formulation form);
Eigen::MatrixXd pencil_rhs(const NystromSystem& sys, Formulation form);

struct SolveOptions {
    double tau_im = 1e-8;    // scaled by (1 + |sigma|)
    double tau_res = 1e-8;
    double cluster_tol = 1e-8;
};

SteklovSpectrum solve_steklov(const NystromSystem& sys, Formulation form, int n_keep,
                              const SolveOptions& opts = {});

/// Boundary values of the eigenfunction generated by a density (R phi).
Eigen::VectorXd boundary_trace(const NystromSystem& sys, const Eigen::VectorXd& density,
                               Formulation form = Formulation::Regularized);

/// Mean-corrected single-layer potential
///   u(x) = mean + integral G(x, y) (phi - mean) ds(y)
/// by the trapezoid rule. Loses relative accuracy where |u| is near roundoff
/// or x approaches the boundary. Throws OutsideDomain for exterior points.
double interior_eval_direct(const NystromSystem& sys, std::span<const double> density, Point2 x);

}  // namespace steklov
