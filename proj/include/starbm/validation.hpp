#pragma once

#include "starbm/graph.hpp"
#include "starbm/process_sim.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Statistical and numerical consistency harness binding the analytic and
// Monte Carlo halves: Kolmogorov-Smirnov tests, Laplace (kernel <-> resolvent)
// consistency, vertex boundary-condition residuals, Chapman-Kolmogorov
// composition, and the assembled validation suite.

namespace starbm {

struct ComparisonReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::size_t n = 0;        // sample size or grid size
    std::uint64_t seed = 0;   // 0 for deterministic (seed-free) checks
};

// Two-sided KS statistic of sorted-in-place samples against a CDF.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Asymptotic two-sided p-value with the small-sample correction
// lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) * d.
double ks_pvalue(double d, std::size_t n);

// Pass iff the asymptotic p-value exceeds p_threshold. The statistic field
// reports the p-value.
ComparisonReport ks_compare(const std::string& name, std::vector<double> samples,
                            const std::function<double(double)>& cdf,
                            double p_threshold = 1e-3, std::uint64_t seed = 0);

// Numeric int_0^inf e^{-lambda t} * kernel channel dt (t = z^2 substitution
// near 0, analytic-envelope tail cut) against the resolvent kernel channel.
// Statistic: absolute error.
ComparisonReport laplace_consistency(const BoundaryParams& params, double lambda,
                                     const GraphPoint& from, const GraphPoint& to,
                                     double tol = 1e-6);

// Relative residual of a u(v) + (c/2) u''(v) - sum_k b_k u'(v_k) for
// u = R_lambda f, one-sided second-order finite differences with step h.
// The b = 0 kind uses the vertex identity (lambda + beta) u(v) = f(v).
ComparisonReport boundary_residual(const BoundaryParams& params, double lambda,
                                   const GraphFunction& f, double tol = 1e-3,
                                   double h = 1e-4);

// Composition of the kernels at s and t (edge quadratures plus atom x atom
// and atom x density cross terms) against the kernel at s + t, on the channel
// selected by `to`. Statistic: relative error.
ComparisonReport chapman_kolmogorov(const BoundaryParams& params, double s,
                                    double t, const GraphPoint& from,
                                    const GraphPoint& to, double tol = 1e-5);

// Per-edge stratified KS of simulated endpoint laws against the analytic
// kernel, with Bonferroni correction across strata, plus 3-sigma checks of
// the per-category masses (edges, vertex atom, cemetery).
std::vector<ComparisonReport> endpoint_law_vs_kernel(
    const BoundaryParams& params, const GraphPoint& xi, double t,
    const SimConfig& config, double p_threshold = 1e-3);

struct SuiteConfig {
    std::uint64_t seed = 42;
    bool quick = false;        // reduced sample sizes for smoke runs
    std::string only;          // substring filter on report names; empty = all
    bool inject_fault = false; // deliberately corrupt a kernel term (self-test)
};

std::vector<ComparisonReport> suite_laplace(const SuiteConfig& config);
std::vector<ComparisonReport> suite_chapman(const SuiteConfig& config);
std::vector<ComparisonReport> suite_boundary(const SuiteConfig& config);
std::vector<ComparisonReport> suite_scattering(const SuiteConfig& config);
std::vector<ComparisonReport> suite_samplers(const SuiteConfig& config);
std::vector<ComparisonReport> suite_simulator(const SuiteConfig& config);
std::vector<ComparisonReport> suite_limits(const SuiteConfig& config);

// Full suite, name-filtered by config.only, sorted by report name.
std::vector<ComparisonReport> run_suite(const SuiteConfig& config);

bool all_pass(const std::vector<ComparisonReport>& reports);

// One record per line: name statistic threshold pass seed n.
std::string format_reports(const std::vector<ComparisonReport>& reports);

}  // namespace starbm
