#include "starbm/scattering.hpp"

#include <cmath>
#include <stdexcept>

namespace starbm {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using std::complex;

MatrixXd projector_pn(int n) {
    return MatrixXd::Constant(n, n, 1.0 / n);
}

// Continuity chain rows 2..n: f(v_k) = f(v_{k+1}).
void fill_continuity_rows(MatrixXd& A) {
    const auto n = A.rows();
    for (Eigen::Index i = 1; i < n; ++i) {
        A(i, i - 1) = 1.0;
        A(i, i) = -1.0;
    }
}

}  // namespace

bool has_maximal_rank(const VertexBoundaryMatrices& m, double rel_tol) {
    const auto n = m.A.rows();
    MatrixXd block(n, 2 * n);
    block << m.A, m.B;
    Eigen::JacobiSVD<MatrixXd> svd(block);
    auto sv = svd.singularValues();
    return sv(n - 1) > rel_tol * sv(0);
}

SMatrix s_matrix_generic(const VertexBoundaryMatrices& m, complex<double> kappa) {
    const auto n = m.A.rows();
    if (m.B.rows() != n || m.A.cols() != n || m.B.cols() != n)
        throw std::invalid_argument("boundary matrices must be square and matching");
    MatrixXcd plus = m.A.cast<complex<double>>() + kappa * m.B.cast<complex<double>>();
    MatrixXcd minus = m.A.cast<complex<double>>() - kappa * m.B.cast<complex<double>>();

    Eigen::JacobiSVD<MatrixXcd> svd(plus, Eigen::ComputeThinU | Eigen::ComputeThinV);
    auto sv = svd.singularValues();
    if (sv(n - 1) <= 0.0 || sv(0) / sv(n - 1) > 1e12)
        throw std::runtime_error("A + kappa B is singular or ill-conditioned");

    SMatrix out;
    out.entries = -plus.partialPivLu().solve(minus);
    return out;
}

VertexBoundaryMatrices boundary_matrices(const BoundaryParams& params,
                                         double lambda0) {
    const int n = params.n();
    VertexBoundaryMatrices m;
    m.A = MatrixXd::Zero(n, n);
    m.B = MatrixXd::Zero(n, n);

    switch (params.kind) {
        case ProcessKind::Walsh:
            fill_continuity_rows(m.A);
            for (int j = 0; j < n; ++j) m.B(0, j) = params.w[static_cast<std::size_t>(j)];
            break;
        case ProcessKind::Elastic:
            fill_continuity_rows(m.A);
            m.A(0, n - 1) = params.beta;
            for (int j = 0; j < n; ++j) m.B(0, j) = params.w[static_cast<std::size_t>(j)];
            break;
        case ProcessKind::Sticky:
        case ProcessKind::General: {
            double kappa0 = std::sqrt(2.0 * lambda0);
            if (!(kappa0 + params.gamma * lambda0 > 0.0))
                throw std::invalid_argument("degenerate reference lambda0");
            MatrixXd s0 = s_closed_form(params, lambda0).entries.real();
            MatrixXd id = MatrixXd::Identity(n, n);
            m.A = -0.5 * (s0 + id);
            m.B = -(s0 - id) / (2.0 * kappa0);
            break;
        }
        case ProcessKind::StoppedKilled:
            // Dirichlet-type vertex: F = 0 on every edge.
            m.A = MatrixXd::Identity(n, n);
            break;
    }
    return m;
}

SMatrix s_closed_form(const BoundaryParams& params, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
    const int n = params.n();
    double s = std::sqrt(2.0 * lambda);
    double factor;
    switch (params.kind) {
        case ProcessKind::Walsh: factor = 1.0; break;
        case ProcessKind::Elastic: factor = s / (params.beta + s); break;
        case ProcessKind::Sticky: factor = s / (s + params.gamma * lambda); break;
        case ProcessKind::General:
            factor = s / (params.beta + s + params.gamma * lambda);
            break;
        default:
            throw std::invalid_argument("no closed-form S-matrix for this kind");
    }
    SMatrix out;
    out.lambda = lambda;
    out.entries = MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k)
        for (int mcol = 0; mcol < n; ++mcol)
            out.entries(k, mcol) =
                2.0 * factor * params.w[static_cast<std::size_t>(mcol)] -
                (k == mcol ? 1.0 : 0.0);
    return out;
}

SMatrix s_from_boundary(const BoundaryParams& params, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
    double kappa = std::sqrt(2.0 * lambda);
    SMatrix out;
    out.lambda = lambda;
    switch (params.kind) {
        case ProcessKind::Walsh:
        case ProcessKind::Elastic:
            out.entries = s_matrix_generic(boundary_matrices(params), kappa).entries;
            break;
        case ProcessKind::Sticky:
            out.entries =
                -s_matrix_generic(boundary_matrices(params), -kappa).entries;
            break;
        case ProcessKind::General:
            out.entries =
                -s_matrix_generic(boundary_matrices(params, lambda), -kappa).entries;
            break;
        default:
            throw std::invalid_argument("no S-matrix for this kind");
    }
    return out;
}

WalshSMatrixReport s_walsh_properties(const BoundaryParams& params, double tol) {
    if (params.kind != ProcessKind::Walsh)
        throw std::invalid_argument("Walsh kind required");
    const int n = params.n();
    MatrixXd s = s_closed_form(params, 1.0).entries.real();
    WalshSMatrixReport r;
    r.involution_error = (s * s - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    r.det = s.determinant();
    r.det_expected = (n % 2 == 0) ? -1.0 : 1.0;
    r.pass = r.involution_error <= tol && std::abs(r.det - r.det_expected) <= tol;
    return r;
}

RecoveredParams recover_params_from_s(
    const std::function<Eigen::MatrixXd(double)>& sample, int n, double tol) {
    const double lambda_hi = 1e4, lambda_mid = 1e3;
    const double lambda_lo1 = 1e-6, lambda_lo2 = 1e-8;

    MatrixXd s_hi = sample(lambda_hi);
    MatrixXd s_mid = sample(lambda_mid);
    double kappa_hi = std::sqrt(2.0 * lambda_hi);
    double kappa_mid = std::sqrt(2.0 * lambda_mid);

    // The per-entry recovery display 2 kappa w_m / (beta + kappa) =
    // S_{km} + delta_{km} summed over m eliminates w (sum w = 1), giving beta
    // directly from any row sum; w_m then follows from the large-energy
    // samples with the (beta + kappa) / kappa correction. Exact for exact
    // samples — no iteration needed.
    auto beta_from_row = [&](const MatrixXd& s, double kappa) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += (s.row(k).sum() + 1.0) / (2.0 * kappa);
        double mean = acc / n;  // 1 / (beta + kappa)
        return 1.0 / mean - kappa;
    };
    double beta = beta_from_row(s_mid, kappa_mid);
    if (std::abs(beta) < 1e-9) beta = 0.0;
    double b2 = beta_from_row(s_hi, kappa_hi);
    if (std::abs(b2 - beta) > tol * std::max(1.0, std::abs(beta)))
        throw std::runtime_error("beta recovery inconsistent across energies");
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        double acc_w = 0.0;
        for (int k = 0; k < n; ++k)
            acc_w += 0.5 * ((k == m ? 1.0 : 0.0) + s_hi(k, m));
        w[static_cast<std::size_t>(m)] = (acc_w / n) * (beta + kappa_hi) / kappa_hi;
    }

    // Threshold route: 1/(beta + kappa) extrapolated linearly to kappa = 0.
    MatrixXd s_lo1 = sample(lambda_lo1);
    MatrixXd s_lo2 = sample(lambda_lo2);
    auto inv_beta_at = [&](const MatrixXd& s, double lambda) {
        double kappa = std::sqrt(2.0 * lambda);
        double row = s.row(0).sum() + 1.0;
        return row / (2.0 * kappa);
    };
    double f1 = inv_beta_at(s_lo1, lambda_lo1);  // at kappa1
    double f2 = inv_beta_at(s_lo2, lambda_lo2);  // at kappa2 < kappa1
    double kappa1 = std::sqrt(2.0 * lambda_lo1);
    double kappa2 = std::sqrt(2.0 * lambda_lo2);
    double f0 = f2 + (f1 - f2) * (0.0 - kappa2) / (kappa1 - kappa2);

    RecoveredParams out;
    out.w = w;
    out.beta = beta;
    if (beta < 1e-6) {
        // Walsh limit: the threshold route diverges.
        out.beta = 0.0;
        out.beta_threshold = 0.0;
        out.routes_agree = true;
        return out;
    }
    out.beta_threshold = 1.0 / f0;
    out.routes_agree = std::abs(out.beta_threshold - out.beta) <=
                       tol * std::max(1.0, std::abs(out.beta));
    if (!out.routes_agree)
        throw std::runtime_error("beta recovery routes disagree beyond tolerance");
    return out;
}

double BoundState::wavefunction(const GraphPoint& xi) const {
    return norm_constant * std::exp(-2.0 * xi.dist_to_vertex() / gamma);
}

BoundState bound_state(double gamma, int n) {
    if (!(gamma > 0.0)) throw std::domain_error("bound state needs gamma > 0");
    if (n < 1) throw std::domain_error("n >= 1");
    BoundState b;
    b.gamma = gamma;
    b.energy = -4.0 / (gamma * gamma);
    b.norm_constant = 2.0 / std::sqrt(static_cast<double>(n) * gamma);
    return b;
}

TimeDelayMatrix time_delay(double gamma, int n, double k) {
    if (!(k > 0.0)) throw std::domain_error("k must be > 0");
    TimeDelayMatrix t;
    t.k = k;
    double eig = -2.0 * gamma / (k * (4.0 + k * k * gamma * gamma));
    t.entries = eig * projector_pn(n);
    return t;
}

TimeDelayMatrix time_delay_numeric(double gamma, int n, double k, double h) {
    if (!(k > h && h > 0.0)) throw std::domain_error("need k > h > 0");
    std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
    BoundaryParams params = params_from_simulator(w, 0.0, gamma);
    auto m = boundary_matrices(params);  // Walsh matrices when gamma = 0
    // kappa = -ik picks the branch whose delay matches the closed form; the
    // opposite branch flips the sign.
    const complex<double> i_unit(0.0, 1.0);
    auto s_at = [&](double kk) { return s_matrix_generic(m, -i_unit * kk).entries; };
    MatrixXcd ds = (s_at(k + h) - s_at(k - h)) / (2.0 * h);
    MatrixXcd t = s_at(k).partialPivLu().solve(ds) / (2.0 * i_unit * k);
    TimeDelayMatrix out;
    out.k = k;
    out.entries = t.real();
    return out;
}

}  // namespace starbm
