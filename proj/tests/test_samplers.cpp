#include <doctest.h>

#include "starbm/samplers.hpp"
#include "starbm/resolvents.hpp"
#include "starbm/validation.hpp"

#include <cmath>
#include <vector>

using namespace starbm;

namespace {

constexpr std::size_t kN = 200000;

struct MeanSe {
    double mean;
    double se;
};

template <typename Draw>
MeanSe monte_carlo(std::size_t n, std::uint64_t seed, Draw draw) {
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        RandomStream rs(seed, i);
        double v = draw(rs);
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / static_cast<double>(n);
    double var = sum2 / static_cast<double>(n) - mean * mean;
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TEST_SUITE("samplers") {

TEST_CASE("random streams are reproducible and fork independently") {
    RandomStream a(7, 3), b(7, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

    RandomStream c(7, 4);
    bool all_equal = true;
    RandomStream a2(7, 3);
    for (int i = 0; i < 100; ++i)
        if (a2.uniform() != c.uniform()) all_equal = false;
    CHECK_FALSE(all_equal);

    RandomStream base(9, 0);
    auto f1 = base.fork(1);
    auto f2 = base.fork(2);
    CHECK(f1.uniform() != f2.uniform());

    RandomStream u(11, 0);
    for (int i = 0; i < 1000; ++i) {
        double x = u.uniform();
        CHECK(x > 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("first hit time: Laplace transform and distribution") {
    auto ms = monte_carlo(kN, 101, [](RandomStream& rs) {
        return std::exp(-0.5 * draw_first_hit_time(1.0, rs));
    });
    CHECK(std::abs(ms.mean - std::exp(-1.0)) <= 3.0 * ms.se);

    std::vector<double> h(kN);
    for (std::size_t i = 0; i < kN; ++i) {
        RandomStream rs(102, i);
        h[i] = draw_first_hit_time(1.0, rs);
    }
    auto r = ks_compare("first-hit", std::move(h), [](double t) {
        return t > 0.0 ? std::erfc(1.0 / std::sqrt(2.0 * t)) : 0.0;
    });
    CHECK(r.pass);
}

TEST_CASE("conditioned position matches the normalized dirichlet law") {
    const double x = 1.0, t = 1.0;
    double mass = std::erf(x / std::sqrt(2.0 * t));
    std::vector<double> ys(kN);
    for (std::size_t i = 0; i < kN; ++i) {
        RandomStream rs(103, i);
        ys[i] = draw_conditioned_position(x, t, rs);
    }
    // CDF of the normalized dirichlet kernel:
    // (Phi(y-x) - Phi(y+x)) / mass + 1, vanishing at 0, tending to 1.
    auto cdf = [&](double y) {
        if (y <= 0.0) return 0.0;
        return (phi_cdf(y - x) - phi_cdf(y + x)) / mass + 1.0;
    };
    auto r = ks_compare("conditioned-position", std::move(ys), cdf);
    CHECK(r.pass);
}

TEST_CASE("vertex joint draw: Maxwell total, uniform split, edge weights") {
    const std::vector<double> w{0.3, 0.7};
    std::vector<double> s(kN);
    double ex = 0.0, ey = 0.0, edge1 = 0.0;
    for (std::size_t i = 0; i < kN; ++i) {
        RandomStream rs(104, i);
        auto d = draw_vertex_joint(1.0, w, rs);
        s[i] = d.x + d.y;
        ex += d.x;
        ey += d.y;
        if (d.edge == 1) edge1 += 1.0;
    }
    double n = static_cast<double>(kN);
    double target = std::sqrt(2.0 / 3.14159265358979323846);  // E x = E y = E s / 2
    CHECK(ex / n == doctest::Approx(target).epsilon(0.01));
    CHECK(ey / n == doctest::Approx(target).epsilon(0.01));
    double sigma_edge = std::sqrt(0.3 * 0.7 / n);
    CHECK(std::abs(edge1 / n - 0.3) <= 3.0 * sigma_edge);

    // s = x + y is chi-3 (Maxwell) with scale sqrt(t)
    auto cdf = [](double v) {
        if (v <= 0.0) return 0.0;
        return std::erf(v / std::sqrt(2.0)) -
               std::sqrt(2.0 / 3.14159265358979323846) * v * std::exp(-v * v / 2.0);
    };
    auto r = ks_compare("maxwell-total", std::move(s), cdf);
    CHECK(r.pass);
}

TEST_CASE("inverse local time: Laplace functional and drift support") {
    for (double gamma : {0.0, 2.0}) {
        auto ms = monte_carlo(kN, 105, [&](RandomStream& rs) {
            return std::exp(-0.5 * draw_inverse_local_time(1.0, gamma, rs));
        });
        double target = std::exp(-(1.0 + gamma * 0.5));
        CHECK(std::abs(ms.mean - target) <= 3.0 * ms.se);
    }
    for (std::size_t i = 0; i < 1000; ++i) {
        RandomStream rs(106, i);
        CHECK(draw_inverse_local_time(1.5, 2.0, rs) > 3.0);  // K_r >= gamma r
    }
}

TEST_CASE("lifetime draw: Laplace transform beta rho and Exp(beta) level") {
    for (double gamma : {0.0, 2.0}) {
        auto ms = monte_carlo(kN, 107, [&](RandomStream& rs) {
            return std::exp(-0.5 * draw_lifetime(1.0, gamma, rs).first);
        });
        double target = 1.0 * rho(0.5, 1.0, gamma);
        CHECK(std::abs(ms.mean - target) <= 3.0 * ms.se);
    }
    auto level = monte_carlo(kN, 108, [](RandomStream& rs) {
        return draw_lifetime(2.0, 1.0, rs).second;
    });
    CHECK(std::abs(level.mean - 0.5) <= 3.0 * level.se);
}

TEST_CASE("bridge crossing probability") {
    CHECK(bridge_crossing_prob(1.0, 1.0, 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(bridge_crossing_prob(0.0, 2.0, 0.5) == 1.0);
    CHECK(bridge_crossing_prob(2.0, 0.0, 0.5) == 1.0);
    CHECK(bridge_crossing_prob(3.0, 3.0, 0.1) < 1e-70);
}

}  // TEST_SUITE
