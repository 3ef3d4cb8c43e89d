// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is backed by one suite of the validation harness;
// failing reports are echoed for diagnosis.

#include "starbm/validation.hpp"

#include <cstdio>
#include <vector>

int main() {
    using namespace starbm;

    struct Criterion {
        const char* label;
        std::vector<ComparisonReport> (*suite)(const SuiteConfig&);
    };
    const Criterion criteria[] = {
        {"1 laplace consistency (kernel vs resolvent, all kinds)", suite_laplace},
        {"2 chapman-kolmogorov composition", suite_chapman},
        {"3 vertex boundary-condition residuals", suite_boundary},
        {"4 scattering algebra and parameter recovery", suite_scattering},
        {"5 exact-sampler statistics", suite_samplers},
        {"6 sticky/general simulator convergence", suite_simulator},
        {"7 limit degeneracies and kind collapses", suite_limits},
    };

    SuiteConfig config;
    bool ok = true;
    for (const auto& c : criteria) {
        std::vector<ComparisonReport> reports;
        bool threw = false;
        try {
            reports = c.suite(config);
        } catch (const std::exception& e) {
            threw = true;
            std::fprintf(stderr, "criterion %s raised: %s\n", c.label, e.what());
        }
        bool pass = !threw && !reports.empty() && all_pass(reports);
        std::printf("CRITERION %-55s %s (%zu checks)\n", c.label,
                    pass ? "PASS" : "FAIL", reports.size());
        if (!pass) {
            ok = false;
            for (const auto& r : reports)
                if (!r.pass) std::fputs(format_reports({r}).c_str(), stderr);
        }
    }
    return ok ? 0 : 1;
}
