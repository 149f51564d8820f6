#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "steklov/bie.hpp"
#include "steklov/conformal.hpp"
#include "steklov/reconstruction.hpp"

namespace steklov {

enum class SolverChoice { Bie, Disk, Both };

// Exactly one of the three forms is populated.
struct DomainSpec {
    std::string preset;  // "circle(r)", "ellipse(a,b)", "kite", "mobius(a,N)", "rfe", "disk"
    std::vector<cplx> coeffs_x, coeffs_y;  // custom Fourier curve, indices -d..d
    std::optional<PolynomialConformalMap> map;
};

struct Domain {
    std::string label;
    AnalyticCurve curve;
    std::optional<PolynomialConformalMap> map;
};

Domain resolve_domain(const DomainSpec& spec);

struct ExpectedEigenvalue {
    int j = 0;
    double sigma = 0.0;
};

struct ApproximationTarget {
    std::optional<cplx> mobius;  // closed-form Mobius target
    std::vector<cplx> series;    // otherwise Taylor coefficients of f
};

struct RunConfig {
    DomainSpec domain;
    SolverChoice solver = SolverChoice::Bie;
    Formulation formulation = Formulation::Regularized;
    int n_nodes = 0;  // 0: automatic
    int N_tr = 0;     // 0: automatic
    int n_keep = 31;
    bool verify = true;  // BIE trust by re-solving on a finer grid
    double alpha = 0.8;

    std::optional<Box> box;  // default: curve bounding box
    int resolution = 256;
    int render_index = 1;
    std::optional<Point2> ball_center;
    double ball_r0 = 0.15;

    std::optional<Point2> point;  // cauchy-table evaluation point
    std::vector<int> n_list;

    std::vector<double> delta{0.1};
    std::vector<int> m_list;  // remainder sweep; empty: m0+2 .. m0+8
    int N = 0;
    double K = 2.0;
    int m_tunnel = 0;

    ApproximationTarget target;
    std::vector<int> N_list{5, 10, 20};
    int offset_samples = 512;

    std::vector<ExpectedEigenvalue> expect;
    std::string output_dir = ".";
};

/// Parses a JSON document. Unknown keys are rejected with ConfigError.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

/// Checks the cross-field invariants (one domain form, disk needs a map, ...).
void validate_config(const RunConfig& cfg);

SolverChoice parse_solver(std::string_view s);
Formulation parse_formulation(std::string_view s);

}  // namespace steklov
