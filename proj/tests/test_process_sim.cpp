#include <doctest.h>

#include "starbm/kernels.hpp"
#include "starbm/process_sim.hpp"

#include <cmath>

using namespace starbm;

namespace {

BoundaryParams walsh_w(std::vector<double> w) {
    return params_from_simulator(std::move(w), 0.0, 0.0);
}

}  // namespace

TEST_SUITE("process_sim") {

TEST_CASE("walsh endpoint: edge selection and mean local time from the vertex") {
    auto p = walsh_w({0.3, 0.7});
    SimConfig cfg;
    cfg.seed = 201;
    cfg.n_paths = 100000;
    auto samples = sample_endpoints(p, GraphPoint::vertex(), 1.0, cfg);

    double n = static_cast<double>(cfg.n_paths);
    double edge1 = 0.0, lsum = 0.0, lsum2 = 0.0;
    for (const auto& s : samples) {
        REQUIRE(s.survived);
        REQUIRE(s.exact);
        if (s.position.is_interior() && s.position.edge() == 1) edge1 += 1.0;
        lsum += s.local_time;
        lsum2 += s.local_time * s.local_time;
    }
    double sigma_edge = std::sqrt(0.3 * 0.7 / n);
    CHECK(std::abs(edge1 / n - 0.3) <= 3.0 * sigma_edge);

    double lmean = lsum / n;
    double lse = std::sqrt((lsum2 / n - lmean * lmean) / n);
    CHECK(std::abs(lmean - std::sqrt(2.0 / 3.14159265358979323846)) <= 3.0 * lse);
}

TEST_CASE("elastic endpoint with beta = 0 reproduces the walsh draw exactly") {
    auto walsh = walsh_w({0.5, 0.5});
    BoundaryParams elastic = walsh;
    elastic.kind = ProcessKind::Elastic;  // same data, elastic code path
    for (std::size_t i = 0; i < 2000; ++i) {
        RandomStream r1(202, i), r2(202, i);
        auto a = endpoint_walsh(walsh, GraphPoint::interior(1, 0.5), 1.0, r1);
        auto b = endpoint_elastic(elastic, GraphPoint::interior(1, 0.5), 1.0, r2);
        CHECK(a.position == b.position);
        CHECK(a.local_time == b.local_time);
        CHECK(b.survived);
    }
}

TEST_CASE("elastic survival matches the kernel defect") {
    auto p = params_from_simulator({0.5, 0.5}, 1.0, 0.0);
    SimConfig cfg;
    cfg.seed = 203;
    cfg.n_paths = 100000;
    auto samples = sample_endpoints(p, GraphPoint::vertex(), 1.0, cfg);
    double alive = 0.0;
    for (const auto& s : samples)
        if (s.survived) alive += 1.0;
    double emp = alive / static_cast<double>(cfg.n_paths);
    double target = 1.0 - transition_kernel(
                              p, KernelQuery{1.0, GraphPoint::vertex(),
                                             GraphPoint::vertex(), true})
                              .defect;
    double sigma = std::sqrt(target * (1.0 - target) / static_cast<double>(cfg.n_paths));
    CHECK(std::abs(emp - target) <= 3.0 * sigma);
}

TEST_CASE("stopped-killed endpoint: vertex atom at beta = 0 and beta = 1") {
    SimConfig cfg;
    cfg.n_paths = 100000;
    double n = static_cast<double>(cfg.n_paths);
    struct Case {
        double beta;
        double atom;  // frozen analytic values at x = 1, t = 1
    } cases[] = {{0.0, 0.31731050786291410}, {1.0, 0.20318697632820264}};
    for (const auto& c : cases) {
        auto p = c.beta == 0.0 ? derive_params(0.0, 1.0, {0.0})
                               : derive_params(0.5, 0.5, {0.0});
        double at_v = 0.0;
        for (std::size_t i = 0; i < cfg.n_paths; ++i) {
            RandomStream rs(204, i);
            auto s = endpoint_stopped_killed(p, GraphPoint::interior(1, 1.0), 1.0, rs);
            if (s.position.is_vertex()) at_v += 1.0;
        }
        double sigma = std::sqrt(c.atom * (1.0 - c.atom) / n);
        CHECK(std::abs(at_v / n - c.atom) <= 3.0 * sigma);
    }
}

TEST_CASE("skeleton invariants: time change, monotonicity, local time") {
    auto p = params_from_simulator({0.5, 0.5}, 0.0, 2.0);
    SimConfig cfg;
    cfg.max_step = 1e-2;
    cfg.horizon = 2.0;
    for (std::size_t i = 0; i < 200; ++i) {
        RandomStream rs(205, i);
        auto sk = skeleton_simulate(p, GraphPoint::vertex(), cfg, rs);
        REQUIRE(sk.points.size() >= 2);
        for (std::size_t j = 0; j + 1 < sk.points.size(); ++j) {
            const auto& a = sk.points[j];
            const auto& b = sk.points[j + 1];
            CHECK(b.u >= a.u);
            CHECK(b.h >= a.h);
            CHECK(b.local_time >= a.local_time);
            // h = u + gamma L exactly at every breakpoint
            CHECK(b.h == doctest::Approx(b.u + p.gamma * b.local_time).epsilon(1e-12));
            // local time accrues only across segments that touch the vertex
            if (a.position.is_interior() && b.position.is_interior() &&
                a.position.edge() == b.position.edge())
                CHECK(b.local_time == a.local_time);
        }
    }
}

TEST_CASE("sticky endpoint occupation vs the kernel atom (quick)") {
    auto p = params_from_simulator({0.5, 0.5}, 0.0, 2.0);
    SimConfig cfg;
    cfg.seed = 206;
    cfg.n_paths = 20000;
    cfg.max_step = 1e-3;
    auto samples = sample_endpoints(p, GraphPoint::vertex(), 1.0, cfg);
    double at_v = 0.0;
    for (const auto& s : samples)
        if (s.position.is_vertex()) at_v += 1.0;
    double emp = at_v / static_cast<double>(cfg.n_paths);
    const double atom = 0.52315658373024674;
    double sigma = std::sqrt(atom * (1.0 - atom) / static_cast<double>(cfg.n_paths));
    CHECK(std::abs(emp - atom) <= 3.0 * sigma + 5e-3);
}

TEST_CASE("hitting moments: walsh mean epsilon^2, exponential local time") {
    auto p = walsh_w({0.5, 0.5});
    auto rep = mc_hitting_time_moments(p, 0.1, 20000, 207);
    CHECK(std::abs(rep.mean_h_kind - 0.01) <= 3.0 * rep.se_h_kind + 2e-5);
    CHECK(std::abs(rep.mean_local_time - 0.1) <= 3.0 * rep.se_local_time + 2e-5);
}

TEST_CASE("sampling is reproducible across calls") {
    auto p = params_from_simulator({0.5, 0.5}, 0.0, 2.0);
    SimConfig cfg;
    cfg.seed = 208;
    cfg.n_paths = 500;
    cfg.max_step = 1e-2;
    auto a = sample_endpoints(p, GraphPoint::vertex(), 1.0, cfg);
    auto b = sample_endpoints(p, GraphPoint::vertex(), 1.0, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position == b[i].position);
        CHECK(a[i].local_time == b[i].local_time);
        CHECK(a[i].survived == b[i].survived);
    }
}

}  // TEST_SUITE
