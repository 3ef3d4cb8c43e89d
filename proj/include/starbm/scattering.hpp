#pragma once

#include "starbm/graph.hpp"

#include <Eigen/Dense>

#include <complex>

// Vertex boundary matrices, the generic on-shell scattering matrix, the
// closed-form S-matrices of all four process kinds, bound-state / time-delay
// diagnostics, and parameter recovery from S-matrix samples.

namespace starbm {

// Boundary conditions A F + B F' = 0 at the vertex. The n x 2n block (A, B)
// must have maximal rank.
struct VertexBoundaryMatrices {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

bool has_maximal_rank(const VertexBoundaryMatrices& m, double rel_tol = 1e-10);

struct SMatrix {
    Eigen::MatrixXcd entries;
    // Probabilistic parametrization lambda > 0 corresponds to E = -2 lambda,
    // i.e. kappa = sqrt(2 lambda); quantum regime uses kappa = i sqrt(E).
    double lambda = 0.0;
};

// S_{A,B} = -(A + kappa B)^{-1} (A - kappa B). Throws when A + kappa B is
// singular (condition number guard 1e12, no pseudo-inverse fallback).
SMatrix s_matrix_generic(const VertexBoundaryMatrices& m, std::complex<double> kappa);

// Concrete (A, B) pairs realizing the boundary conditions of each kind.
// Sticky and general kinds are built from the closed-form S at the reference
// lambda0 via A = -(S+1)/2, B = -(S-1)/(2 sqrt(2 lambda0)).
VertexBoundaryMatrices boundary_matrices(const BoundaryParams& params,
                                         double lambda0 = 0.5);

// Closed forms S_{km} = 2 kappa_factor(lambda) w_m - delta_{km} with
// kappa_factor = 1 (Walsh), sqrt(2l)/(beta+sqrt(2l)) (elastic),
// sqrt(2l)/(sqrt(2l)+gamma l) (sticky), sqrt(2l) rho(l) (general).
SMatrix s_closed_form(const BoundaryParams& params, double lambda);

// Probabilistic-regime S(lambda) recovered from the vertex boundary
// matrices. Walsh and elastic matrices hold lambda-independently at
// kappa = sqrt(2 lambda). The sticky template matrices reproduce the closed
// form on the reflected branch, S(lambda) = -S_{A,B}(-sqrt(2 lambda)), for
// every lambda. The general kind admits no lambda-independent (A, B) pair
// (its closed form is quadratic over quadratic in kappa entrywise, while
// S_{A,B} of this rank-one family is Moebius), so its template is rebuilt at
// lambda0 = lambda before the same reflected-branch evaluation.
SMatrix s_from_boundary(const BoundaryParams& params, double lambda);

struct WalshSMatrixReport {
    double involution_error;  // ||S S - I||_inf
    double det;
    double det_expected;      // (-1)^{n+1}
    bool pass;
};

WalshSMatrixReport s_walsh_properties(const BoundaryParams& params,
                                      double tol = 1e-12);

struct RecoveredParams {
    std::vector<double> w;
    double beta;            // large-energy (diagonal) route
    double beta_threshold;  // small-lambda threshold route; 0 when divergent
    bool routes_agree;
};

// Recovers (w, beta) of an elastic-kind S-matrix from samples at large and
// small lambda. Throws when the two beta routes disagree beyond tolerance.
RecoveredParams recover_params_from_s(
    const std::function<Eigen::MatrixXd(double)>& sample, int n,
    double tol = 1e-6);

struct BoundState {
    double energy;         // -4 / gamma^2
    double norm_constant;  // 2 / sqrt(n gamma)
    double gamma;

    double wavefunction(const GraphPoint& xi) const;
};

BoundState bound_state(double gamma, int n);

struct TimeDelayMatrix {
    Eigen::MatrixXd entries;
    double k;
};

// Closed-form time delay of the equal-weight sticky vertex:
// (-2 gamma / (k (4 + k^2 gamma^2))) P_n.
TimeDelayMatrix time_delay(double gamma, int n, double k);

// (2ik)^{-1} S(k)^{-1} d/dk S(k) by central differences on the generic
// S-matrix built from the sticky boundary matrices.
TimeDelayMatrix time_delay_numeric(double gamma, int n, double k, double h = 1e-5);

}  // namespace starbm
