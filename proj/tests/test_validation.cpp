#include <doctest.h>

#include "starbm/random.hpp"
#include "starbm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace starbm;

TEST_SUITE("validation") {

TEST_CASE("ks_pvalue matches the classical critical point and is monotone") {
    // Kolmogorov distribution: P(K > 1.358) ~ 0.05
    std::size_t n = 10000;
    double scale = std::sqrt(static_cast<double>(n)) + 0.12 +
                   0.11 / std::sqrt(static_cast<double>(n));
    CHECK(ks_pvalue(1.358 / scale, n) == doctest::Approx(0.05).epsilon(0.02));
    CHECK(ks_pvalue(0.5 / scale, n) > ks_pvalue(1.0 / scale, n));
    CHECK(ks_pvalue(1.0 / scale, n) > ks_pvalue(2.0 / scale, n));
    CHECK(ks_pvalue(0.0, n) == doctest::Approx(1.0));
}

TEST_CASE("ks statistic: exact on a tiny hand-computed sample") {
    // samples {0.2, 0.6} against U(0,1): D = max(|0-0.2|,|.5-.2|,|.5-.6|,|1-.6|)
    double d = ks_statistic({0.2, 0.6}, [](double x) { return x; });
    CHECK(d == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("ks null calibration: uniform samples give moderate p-values") {
    std::vector<double> pvals;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        RandomStream rs(300, rep);
        std::vector<double> u(2000);
        for (auto& x : u) x = rs.uniform();
        double d = ks_statistic(std::move(u), [](double x) { return x; });
        pvals.push_back(ks_pvalue(d, 2000));
    }
    std::sort(pvals.begin(), pvals.end());
    double median = pvals[50];
    CHECK(median > 0.2);
    CHECK(median < 0.8);
    // no catastrophic rejections under the null
    CHECK(pvals.front() > 1e-6);
}

TEST_CASE("ks power: a shifted alternative is rejected decisively") {
    RandomStream rs(301, 0);
    std::vector<double> u(100000);
    for (auto& x : u) x = std::min(1.0, rs.uniform() * 0.9 + 0.1);
    double d = ks_statistic(std::move(u), [](double x) { return x; });
    CHECK(ks_pvalue(d, 100000) < 1e-12);
}

TEST_CASE("single-point consistency checks pass") {
    auto walsh = params_from_simulator({0.5, 0.5}, 0.0, 0.0);
    auto lap = laplace_consistency(walsh, 0.5, GraphPoint::interior(1, 1.0),
                                   GraphPoint::interior(2, 1.0));
    CHECK(lap.pass);

    auto ck = chapman_kolmogorov(walsh, 0.5, 0.5, GraphPoint::interior(1, 1.0),
                                 GraphPoint::interior(1, 1.0), 1e-6);
    CHECK(ck.pass);

    GraphFunction f;
    f.edges = {[](double x) { return std::exp(-x); },
               [](double x) { return std::exp(-x); }};
    f.vertex_value = 1.0;
    f.continuous_at_vertex = true;
    auto br = boundary_residual(walsh, 0.5, f);
    CHECK(br.pass);
}

TEST_CASE("report plumbing: all_pass, formatting, suite filter") {
    ComparisonReport good{"x/a", 0.1, 0.2, true, 10, 1};
    ComparisonReport bad{"x/b", 0.3, 0.2, false, 10, 1};
    CHECK(all_pass({good}));
    CHECK_FALSE(all_pass({good, bad}));

    auto text = format_reports({good, bad});
    CHECK(text.find("x/a") != std::string::npos);
    CHECK(text.find("FAIL") != std::string::npos);
    CHECK(text.find("pass") != std::string::npos);

    SuiteConfig cfg;
    cfg.quick = true;
    cfg.only = "limits";
    auto reports = run_suite(cfg);
    CHECK_FALSE(reports.empty());
    CHECK(all_pass(reports));
}

TEST_CASE("fault injection is caught by the laplace suite") {
    SuiteConfig cfg;
    cfg.quick = true;
    cfg.only = "laplace";
    cfg.inject_fault = true;
    auto reports = run_suite(cfg);
    CHECK_FALSE(all_pass(reports));
}

}  // TEST_SUITE
