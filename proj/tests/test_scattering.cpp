#include <doctest.h>

#include "starbm/scattering.hpp"

#include <cmath>
#include <complex>

using namespace starbm;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

namespace {

BoundaryParams walsh(std::vector<double> w) {
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
    return derive_params(0.0, 0.0, std::move(w));
}

double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("scattering") {

TEST_CASE("generic S-matrix on canonical boundary conditions") {
    // Dirichlet A=I, B=0 -> S = -I; Neumann A=0, B=I -> S = +I.
    int n = 3;
    VertexBoundaryMatrices dir{MatrixXd::Identity(n, n), MatrixXd::Zero(n, n)};
    VertexBoundaryMatrices neu{MatrixXd::Zero(n, n), MatrixXd::Identity(n, n)};
    CHECK(has_maximal_rank(dir));
    CHECK(has_maximal_rank(neu));
    CHECK(max_abs(s_matrix_generic(dir, 1.0).entries + MatrixXcd::Identity(n, n)) < 1e-14);
    CHECK(max_abs(s_matrix_generic(neu, 1.0).entries - MatrixXcd::Identity(n, n)) < 1e-14);

    VertexBoundaryMatrices degenerate{MatrixXd::Zero(n, n), MatrixXd::Zero(n, n)};
    CHECK_FALSE(has_maximal_rank(degenerate));
}

TEST_CASE("walsh S-matrix: closed form, involution, determinant") {
    auto p = walsh({0.5, 0.5});
    MatrixXd s = s_closed_form(p, 1.0).entries.real();
    CHECK(s(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s(1, 1) == doctest::Approx(0.0).epsilon(1e-15));

    for (int n : {1, 2, 3, 5}) {
        std::vector<double> w(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = 1.0 + 0.3 * k;
        auto r = s_walsh_properties(walsh(w));
        CHECK(r.pass);
        CHECK(r.det_expected == ((n % 2 == 0) ? -1.0 : 1.0));
    }

    // kappa-independence of the Walsh boundary-matrix evaluation
    auto m = boundary_matrices(p);
    MatrixXcd s1 = s_matrix_generic(m, 1.0).entries;
    MatrixXcd s2 = s_matrix_generic(m, 7.5).entries;
    CHECK(max_abs(s1 - s2) < 1e-12);
}

TEST_CASE("elastic and general closed forms at frozen points") {
    // beta=1, lambda=0.5, w=(0.6,0.4): factor 1/2
    auto e = params_from_simulator({0.6, 0.4}, 1.0, 0.0);
    MatrixXd s = s_closed_form(e, 0.5).entries.real();
    CHECK(s(0, 0) == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(s(0, 1) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(s(1, 0) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(s(1, 1) == doctest::Approx(-0.6).epsilon(1e-14));

    // beta=1, gamma=2, equal weights, lambda=0.5: factor 1/3
    auto g = params_from_simulator({0.5, 0.5}, 1.0, 2.0);
    MatrixXd sg = s_closed_form(g, 0.5).entries.real();
    CHECK(sg(0, 0) == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
    CHECK(sg(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("boundary-matrix evaluation reproduces the closed forms") {
    auto kinds = {params_from_simulator({0.6, 0.4}, 0.0, 0.0),
                  params_from_simulator({0.6, 0.4}, 1.0, 0.0),
                  params_from_simulator({0.5, 0.5}, 0.0, 2.0),
                  params_from_simulator({0.5, 0.5}, 1.0, 2.0)};
    for (const auto& p : kinds) {
        for (double lambda : {0.25, 0.5, 1.0, 4.0}) {
            MatrixXcd a = s_closed_form(p, lambda).entries;
            MatrixXcd b = s_from_boundary(p, lambda).entries;
            CHECK(max_abs(a - b) < 1e-10);
        }
    }
}

TEST_CASE("row scaling of (A, B) leaves S invariant") {
    auto p = walsh({0.6, 0.4});
    auto m = boundary_matrices(p);
    VertexBoundaryMatrices scaled = m;
    MatrixXd c(2, 2);
    c << 2.0, 1.0, 0.0, -3.0;  // nonsingular row mixing
    scaled.A = c * m.A;
    scaled.B = c * m.B;
    CHECK(max_abs(s_matrix_generic(m, 1.3).entries -
                  s_matrix_generic(scaled, 1.3).entries) < 1e-12);
}

TEST_CASE("probabilistic S-matrices are contractions") {
    // Equal weights: contraction holds in the Euclidean norm directly.
    auto eq = params_from_simulator({0.5, 0.5}, 1.0, 2.0);
    for (double lambda : {0.25, 1.0, 4.0}) {
        MatrixXd s = s_closed_form(eq, lambda).entries.real();
        Eigen::JacobiSVD<MatrixXd> svd(s);
        CHECK(svd.singularValues()(0) <= 1.0 + 1e-12);
    }
    // Unequal weights: contraction in the w-weighted inner product, i.e. the
    // similar symmetric matrix D^{1/2} S D^{-1/2} with D = diag(w), whose
    // entries are 2 f sqrt(w_k w_m) - delta, has singular values <= 1.
    auto g = params_from_simulator({0.3, 0.7}, 1.0, 2.0);
    MatrixXd d_half = MatrixXd::Zero(2, 2), d_ihalf = MatrixXd::Zero(2, 2);
    for (int k = 0; k < 2; ++k) {
        d_half(k, k) = std::sqrt(g.w[static_cast<std::size_t>(k)]);
        d_ihalf(k, k) = 1.0 / d_half(k, k);
    }
    for (double lambda : {0.25, 1.0, 4.0}) {
        MatrixXd s = s_closed_form(g, lambda).entries.real();
        Eigen::JacobiSVD<MatrixXd> svd(MatrixXd(d_half * s * d_ihalf));
        CHECK(svd.singularValues()(0) <= 1.0 + 1e-12);
    }
}

TEST_CASE("quantum unitarity of the sticky S-matrix") {
    auto p = params_from_simulator({0.5, 0.5}, 0.0, 2.0);
    auto m = boundary_matrices(p);
    for (double E : {0.5, 1.0, 4.0}) {
        std::complex<double> kappa(0.0, std::sqrt(E));
        MatrixXcd s = s_matrix_generic(m, kappa).entries;
        CHECK(max_abs(s.adjoint() * s - MatrixXcd::Identity(2, 2)) < 1e-12);
    }
}

TEST_CASE("parameter recovery from S-matrix samples") {
    for (double beta : {1.0, 5.0}) {
        auto p = params_from_simulator({0.25, 0.35, 0.4}, beta, 0.0);
        auto sampler = [&](double lambda) {
            return MatrixXd(s_closed_form(p, lambda).entries.real());
        };
        auto r = recover_params_from_s(sampler, 3);
        CHECK(r.beta == doctest::Approx(beta).epsilon(1e-6));
        CHECK(r.routes_agree);
        CHECK(r.beta_threshold == doctest::Approx(beta).epsilon(1e-6));
        for (int m = 0; m < 3; ++m)
            CHECK(r.w[static_cast<std::size_t>(m)] ==
                  doctest::Approx(p.w[static_cast<std::size_t>(m)]).epsilon(1e-6));
    }

    // Walsh limit: the threshold route is flagged divergent, beta = 0.
    auto w = walsh({0.25, 0.35, 0.4});
    auto sampler = [&](double lambda) {
        return MatrixXd(s_closed_form(w, lambda).entries.real());
    };
    auto r = recover_params_from_s(sampler, 3);
    CHECK(r.beta == 0.0);
    CHECK(r.beta_threshold == 0.0);
    CHECK(r.routes_agree);
}

TEST_CASE("bound state of the sticky vertex") {
    auto b = bound_state(2.0, 2);
    CHECK(b.energy == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(b.norm_constant == doctest::Approx(1.0).epsilon(1e-15));
    // normalization: n * c^2 * gamma / 4 = 1
    double mass = 2.0 * b.norm_constant * b.norm_constant * b.gamma / 4.0;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b.wavefunction(GraphPoint::vertex()) == doctest::Approx(b.norm_constant));
    CHECK(b.wavefunction(GraphPoint::interior(1, 1.0)) ==
          doctest::Approx(b.norm_constant * std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS(bound_state(0.0, 2));
}

TEST_CASE("time delay: closed form vs numeric derivative, decay at high k") {
    for (double k : {0.5, 1.0, 3.0}) {
        auto closed = time_delay(2.0, 2, k);
        auto numeric = time_delay_numeric(2.0, 2, k);
        CHECK((closed.entries - numeric.entries).cwiseAbs().maxCoeff() < 1e-6);
    }
    auto far = time_delay(2.0, 2, 100.0);
    CHECK(far.entries.cwiseAbs().maxCoeff() < 1e-6);
    // gamma -> 0 collapse: no delay
    CHECK(time_delay(0.0, 2, 1.0).entries.cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
