#include "starbm/validation.hpp"

#include "starbm/kernels.hpp"
#include "starbm/quadrature.hpp"
#include "starbm/resolvents.hpp"
#include "starbm/samplers.hpp"
#include "starbm/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace starbm {

namespace {

double channel_of(const KernelValue& k, const GraphPoint& to) {
    return to.is_vertex() ? k.atom : k.density;
}

double channel_of(const ResolventValue& r, const GraphPoint& to) {
    return to.is_vertex() ? r.atom : r.density;
}

// Integral over [0, inf) with the integrand split at interior kink points.
double integrate_with_splits(const std::function<double(double)>& f,
                             std::vector<double> splits, double abs_tol,
                             double t_cut) {
    std::sort(splits.begin(), splits.end());
    splits.erase(std::remove_if(splits.begin(), splits.end(),
                                [&](double s) { return s <= 0.0 || s >= t_cut; }),
                 splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
    double per = abs_tol / static_cast<double>(splits.size() + 1);
    double a = 0.0, total = 0.0;
    for (double s : splits) {
        total += integrate(f, a, s, per);
        a = s;
    }
    double base = a;
    total += integrate_half_line([&, base](double y) { return f(base + y); }, per,
                                 t_cut);
    return total;
}

double ks_from_sorted(const std::vector<double>& sorted,
                      const std::vector<double>& cdf_values) {
    auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(cdf_values[i] - lo, hi - cdf_values[i]));
    }
    return d;
}

// Cumulative integrals of `density` at the sorted points, split additionally
// at the kink locations, normalized by `norm`. Per-gap tolerance 1e-10 keeps
// the accumulated CDF error orders of magnitude below KS resolution.
std::vector<double> cdf_at_sorted(const std::vector<double>& sorted,
                                  const std::function<double(double)>& density,
                                  double norm, std::vector<double> kinks,
                                  double offset = 0.0) {
    std::sort(kinks.begin(), kinks.end());
    std::vector<double> out(sorted.size());
    double cum = offset;
    double prev = 0.0;
    std::size_t ki = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double x = sorted[i];
        while (ki < kinks.size() && kinks[ki] <= prev) ++ki;
        double a = prev;
        for (std::size_t k = ki; k < kinks.size() && kinks[k] < x; ++k) {
            cum += integrate(density, a, kinks[k], 1e-10);
            a = kinks[k];
        }
        if (x > a) cum += integrate(density, a, x, 1e-10);
        out[i] = cum / norm;
        prev = x;
    }
    return out;
}

const char* kind_tag(ProcessKind k) {
    switch (k) {
        case ProcessKind::Walsh: return "walsh";
        case ProcessKind::Elastic: return "elastic";
        case ProcessKind::Sticky: return "sticky";
        case ProcessKind::General: return "general";
        case ProcessKind::StoppedKilled: return "stopped-killed";
    }
    return "?";
}

BoundaryParams kind_params(ProcessKind kind, int n) {
    std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
    switch (kind) {
        case ProcessKind::Walsh: return params_from_simulator(w, 0.0, 0.0);
        case ProcessKind::Elastic: return params_from_simulator(w, 1.0, 0.0);
        case ProcessKind::Sticky: return params_from_simulator(w, 0.0, 2.0);
        case ProcessKind::General: return params_from_simulator(w, 1.0, 2.0);
        case ProcessKind::StoppedKilled:
            return derive_params(0.5, 0.5, std::vector<double>(static_cast<std::size_t>(n), 0.0));
    }
    throw std::logic_error("unreachable");
}

const ProcessKind kAllKinds[] = {ProcessKind::Walsh, ProcessKind::Elastic,
                                 ProcessKind::Sticky, ProcessKind::General,
                                 ProcessKind::StoppedKilled};

ComparisonReport laplace_impl(const BoundaryParams& params, double lambda,
                              const GraphPoint& from, const GraphPoint& to,
                              double tol, bool drop_image_term) {
    auto channel = [&](double t) {
        KernelQuery q{t, from, to, false};
        double v = channel_of(transition_kernel(params, q), to);
        if (drop_image_term && from.is_interior() && to.is_interior() &&
            from.edge() == to.edge())
            v += gauss(t, from.x() + to.x());
        return v;
    };
    // Envelope kernel <= g(t,0) + 1 gives the tail bound
    // e^{-lambda T} (0.4/sqrt(T) + 1)/lambda < 1e-10 for this T.
    double T = std::log(2e10 / lambda) / lambda;
    double numeric =
        integrate([&](double z) { return 2.0 * z * std::exp(-lambda * z * z) *
                                         channel(z * z); },
                  0.0, 1.0, tol / 20.0) +
        integrate([&](double t) { return std::exp(-lambda * t) * channel(t); },
                  1.0, T, tol / 20.0);
    ResolventQuery rq{lambda, from, to};
    double analytic = channel_of(resolvent_kernel(params, rq), to);

    ComparisonReport r;
    r.statistic = std::abs(numeric - analytic);
    r.threshold = tol;
    r.pass = r.statistic < tol;
    return r;
}

std::string point_tag(const GraphPoint& p) {
    return p.is_vertex() ? std::string("v") : p.to_string();
}

}  // namespace

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("empty sample");
    std::sort(samples.begin(), samples.end());
    std::vector<double> cv(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) cv[i] = cdf(samples[i]);
    return ks_from_sorted(samples, cv);
}

double ks_pvalue(double d, std::size_t n) {
    double sn = std::sqrt(static_cast<double>(n));
    double lam = (sn + 0.12 + 0.11 / sn) * d;
    // Below the support of the Kolmogorov law the alternating series needs
    // more than 100 terms; the p-value there is 1 to machine precision.
    if (lam <= 0.06) return 1.0;
    double p = 0.0;
    for (int j = 1; j <= 100; ++j) {
        double term = 2.0 * (j % 2 == 1 ? 1.0 : -1.0) *
                      std::exp(-2.0 * j * j * lam * lam);
        p += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::min(1.0, std::max(0.0, p));
}

ComparisonReport ks_compare(const std::string& name, std::vector<double> samples,
                            const std::function<double(double)>& cdf,
                            double p_threshold, std::uint64_t seed) {
    std::size_t n = samples.size();
    double d = ks_statistic(std::move(samples), cdf);
    ComparisonReport r;
    r.name = name;
    r.statistic = ks_pvalue(d, n);
    r.threshold = p_threshold;
    r.pass = r.statistic > p_threshold;
    r.n = n;
    r.seed = seed;
    return r;
}

ComparisonReport laplace_consistency(const BoundaryParams& params, double lambda,
                                     const GraphPoint& from, const GraphPoint& to,
                                     double tol) {
    ComparisonReport r = laplace_impl(params, lambda, from, to, tol, false);
    char buf[128];
    std::snprintf(buf, sizeof buf, "laplace/%s/n%d/lam%g/%s->%s",
                  kind_tag(params.kind), params.n(), lambda,
                  point_tag(from).c_str(), point_tag(to).c_str());
    r.name = buf;
    r.n = 1;
    return r;
}

ComparisonReport boundary_residual(const BoundaryParams& params, double lambda,
                                   const GraphFunction& f, double tol, double h) {
    if (h < 1e-6) throw std::invalid_argument("finite-difference step too small");
    EdgeQuadrature quad;
    quad.abs_tol = 1e-12;

    ComparisonReport r;
    r.threshold = tol;
    r.n = 1;
    char buf[96];

    double uv = apply_resolvent(params, lambda, f, GraphPoint::vertex(), quad);

    if (params.kind == ProcessKind::StoppedKilled) {
        // Vertex identity: (lambda + beta) u(v) = f(v); no derivatives enter.
        double res = std::abs((lambda + params.beta) * uv - f.vertex_value);
        r.statistic = res / std::max(1.0, std::abs(f.vertex_value));
        r.pass = r.statistic < tol;
        std::snprintf(buf, sizeof buf, "boundary/%s/lam%g", kind_tag(params.kind),
                      lambda);
        r.name = buf;
        return r;
    }

    const int n = params.n();
    double sum_bdu = 0.0, sum_abs_du = 0.0, upp_avg = 0.0;
    for (int k = 1; k <= n; ++k) {
        double u1 = apply_resolvent(params, lambda, f, GraphPoint::interior(k, h), quad);
        double u2 = apply_resolvent(params, lambda, f, GraphPoint::interior(k, 2 * h), quad);
        double u3 = apply_resolvent(params, lambda, f, GraphPoint::interior(k, 3 * h), quad);
        double du = (-3.0 * uv + 4.0 * u1 - u2) / (2.0 * h);
        double upp = (2.0 * uv - 5.0 * u1 + 4.0 * u2 - u3) / (h * h);
        sum_bdu += params.b[static_cast<std::size_t>(k - 1)] * du;
        sum_abs_du += std::abs(du);
        upp_avg += upp / n;
    }
    double residual = params.a * uv + 0.5 * params.c * upp_avg - sum_bdu;
    double scale = std::abs(uv) + sum_abs_du + std::abs(upp_avg);
    r.statistic = std::abs(residual) / std::max(scale, 1e-12);
    r.pass = r.statistic < tol;
    std::snprintf(buf, sizeof buf, "boundary/%s/lam%g", kind_tag(params.kind), lambda);
    r.name = buf;
    return r;
}

ComparisonReport chapman_kolmogorov(const BoundaryParams& params, double s,
                                    double t, const GraphPoint& from,
                                    const GraphPoint& to, double tol) {
    KernelQuery direct_q{s + t, from, to, false};
    double direct = channel_of(transition_kernel(params, direct_q), to);

    double composed = 0.0;
    const double t_cut = 40.0;
    for (int m = 1; m <= params.n(); ++m) {
        auto integrand = [&](double y) {
            if (y <= 0.0) return 0.0;
            GraphPoint mid = GraphPoint::interior(m, y);
            double first =
                transition_kernel(params, KernelQuery{s, from, mid, false}).density;
            double second = channel_of(
                transition_kernel(params, KernelQuery{t, mid, to, false}), to);
            return first * second;
        };
        std::vector<double> splits;
        if (from.is_interior() && from.edge() == m) splits.push_back(from.x());
        if (to.is_interior() && to.edge() == m) splits.push_back(to.x());
        composed += integrate_with_splits(integrand, splits, 1e-9, t_cut);
    }
    double atom_s =
        transition_kernel(params, KernelQuery{s, from, GraphPoint::vertex(), false})
            .atom;
    if (atom_s > 0.0) {
        double from_v = channel_of(
            transition_kernel(params,
                              KernelQuery{t, GraphPoint::vertex(), to, false}),
            to);
        composed += atom_s * from_v;
    }

    ComparisonReport r;
    r.statistic = std::abs(composed - direct) / std::max(std::abs(direct), 1e-12);
    r.threshold = tol;
    r.pass = r.statistic < tol;
    r.n = 1;
    char buf[128];
    std::snprintf(buf, sizeof buf, "chapman/%s/s%g-t%g/%s->%s",
                  kind_tag(params.kind), s, t, point_tag(from).c_str(),
                  point_tag(to).c_str());
    r.name = buf;
    return r;
}

std::vector<ComparisonReport> endpoint_law_vs_kernel(
    const BoundaryParams& params, const GraphPoint& xi, double t,
    const SimConfig& config, double p_threshold) {
    const int n = params.n();
    const auto N = static_cast<double>(config.n_paths);
    auto samples = sample_endpoints(params, xi, t, config);

    std::vector<std::vector<double>> per_edge(static_cast<std::size_t>(n));
    std::size_t n_vertex = 0, n_dead = 0;
    for (const auto& s : samples) {
        if (!s.survived) {
            ++n_dead;
        } else if (s.position.is_vertex()) {
            ++n_vertex;
        } else {
            per_edge[static_cast<std::size_t>(s.position.edge() - 1)].push_back(
                s.position.x());
        }
    }

    auto density_on = [&](int m, double y) {
        KernelQuery q{t, xi, GraphPoint::interior(m, y), false};
        return transition_kernel(params, q).density;
    };
    std::vector<double> mass(static_cast<std::size_t>(n));
    double atom =
        transition_kernel(params, KernelQuery{t, xi, GraphPoint::vertex(), false})
            .atom;
    double mass_total = atom;
    for (int m = 1; m <= n; ++m) {
        std::vector<double> splits;
        if (xi.is_interior() && xi.edge() == m) splits.push_back(xi.x());
        mass[static_cast<std::size_t>(m - 1)] = integrate_with_splits(
            [&](double y) { return y > 0.0 ? density_on(m, y) : 0.0; }, splits,
            1e-9, 40.0);
        mass_total += mass[static_cast<std::size_t>(m - 1)];
    }
    double defect = std::max(0.0, 1.0 - mass_total);

    std::vector<ComparisonReport> out;
    int strata = 0;
    for (int m = 1; m <= n; ++m)
        if (mass[static_cast<std::size_t>(m - 1)] > 1e-12) ++strata;
    double per_stratum = p_threshold / std::max(1, strata);

    char buf[160];
    for (int m = 1; m <= n; ++m) {
        double pm = mass[static_cast<std::size_t>(m - 1)];
        auto& xs = per_edge[static_cast<std::size_t>(m - 1)];
        std::snprintf(buf, sizeof buf, "endpoint-ks/%s/%s/t%g/edge%d",
                      kind_tag(params.kind), point_tag(xi).c_str(), t, m);
        if (pm <= 1e-12) continue;
        ComparisonReport r;
        r.name = buf;
        r.threshold = per_stratum;
        r.n = xs.size();
        r.seed = config.seed;
        if (xs.empty()) {
            // empty stratum with positive analytic mass
            r.statistic = 0.0;
            r.pass = pm * N < 20.0;
            out.push_back(r);
            continue;
        }
        std::sort(xs.begin(), xs.end());
        std::vector<double> kinks;
        if (xi.is_interior() && xi.edge() == m) kinks.push_back(xi.x());
        auto cv = cdf_at_sorted(xs, [&](double y) { return density_on(m, y); }, pm,
                                kinks);
        double d = ks_from_sorted(xs, cv);
        r.statistic = ks_pvalue(d, xs.size());
        r.pass = r.statistic > per_stratum;
        out.push_back(r);
    }

    // Per-category mass z-checks (3 sigma binomial).
    auto mass_check = [&](const char* what, double expected, double count) {
        ComparisonReport r;
        std::snprintf(buf, sizeof buf, "endpoint-mass/%s/%s/t%g/%s",
                      kind_tag(params.kind), point_tag(xi).c_str(), t, what);
        r.name = buf;
        double sigma =
            std::sqrt(std::max(expected * (1.0 - expected), 1e-12) / N);
        r.statistic = std::abs(count / N - expected);
        r.threshold = 3.0 * sigma + 1e-9;
        r.pass = r.statistic <= r.threshold;
        r.n = config.n_paths;
        r.seed = config.seed;
        out.push_back(r);
    };
    for (int m = 1; m <= n; ++m)
        mass_check(("edge" + std::to_string(m) + "-mass").c_str(),
                   mass[static_cast<std::size_t>(m - 1)],
                   static_cast<double>(per_edge[static_cast<std::size_t>(m - 1)].size()));
    mass_check("atom", atom, static_cast<double>(n_vertex));
    mass_check("defect", defect, static_cast<double>(n_dead));
    return out;
}

std::vector<ComparisonReport> suite_laplace(const SuiteConfig& config) {
    std::vector<ComparisonReport> out;
    std::vector<int> ns = config.quick ? std::vector<int>{2} : std::vector<int>{1, 2, 3};
    std::vector<double> lambdas =
        config.quick ? std::vector<double>{0.5} : std::vector<double>{0.25, 0.5, 1.0, 2.0};
    for (ProcessKind kind : kAllKinds) {
        for (int n : ns) {
            BoundaryParams params = kind_params(kind, n);
            std::vector<GraphPoint> froms = {GraphPoint::interior(1, 1.0),
                                             GraphPoint::vertex()};
            std::vector<GraphPoint> tos = {
                GraphPoint::interior(1, 0.7),
                n >= 2 ? GraphPoint::interior(2, 1.0) : GraphPoint::interior(1, 1.5),
                GraphPoint::vertex()};
            for (double lambda : lambdas)
                for (const auto& from : froms)
                    for (const auto& to : tos) {
                        ComparisonReport r = laplace_impl(
                            params, lambda, from, to, 1e-6, config.inject_fault);
                        char buf[128];
                        std::snprintf(buf, sizeof buf, "laplace/%s/n%d/lam%g/%s->%s",
                                      kind_tag(kind), n, lambda,
                                      point_tag(from).c_str(), point_tag(to).c_str());
                        r.name = buf;
                        r.n = 1;
                        out.push_back(r);
                    }
        }
    }
    return out;
}

std::vector<ComparisonReport> suite_chapman(const SuiteConfig& config) {
    std::vector<ComparisonReport> out;
    std::vector<std::pair<double, double>> times = {{0.5, 0.5}, {0.3, 0.7}};
    if (config.quick) times = {{0.5, 0.5}};
    for (ProcessKind kind : kAllKinds) {
        BoundaryParams params = kind_params(kind, 2);
        double tol = kind == ProcessKind::Walsh ? 1e-6 : 1e-5;
        for (auto [s, t] : times) {
            out.push_back(chapman_kolmogorov(params, s, t, GraphPoint::interior(1, 1.0),
                                             GraphPoint::interior(1, 1.0), tol));
            out.push_back(chapman_kolmogorov(params, s, t, GraphPoint::interior(1, 1.0),
                                             GraphPoint::interior(2, 1.0), tol));
            GraphPoint to = kind == ProcessKind::Walsh || kind == ProcessKind::Elastic
                                ? GraphPoint::interior(1, 0.5)
                                : GraphPoint::vertex();
            out.push_back(
                chapman_kolmogorov(params, s, t, GraphPoint::vertex(), to, tol));
        }
    }
    return out;
}

std::vector<ComparisonReport> suite_boundary(const SuiteConfig& config) {
    std::vector<ComparisonReport> out;
    std::vector<double> lambdas = config.quick ? std::vector<double>{0.5}
                                               : std::vector<double>{0.5, 2.0};

    auto make_f = [](int which) {
        GraphFunction f;
        f.continuous_at_vertex = true;
        switch (which) {
            case 0:
                f.edges = {[](double x) { return std::exp(-x * x); },
                           [](double x) { return std::exp(-x * x); }};
                f.vertex_value = 1.0;
                break;
            case 1:
                f.edges = {[](double x) { return std::cos(x) * std::exp(-x); },
                           [](double x) { return std::exp(-2.0 * x); }};
                f.vertex_value = 1.0;
                break;
            default:
                f.edges = {[](double x) { return x * std::exp(-x); },
                           [](double x) { return x * std::exp(-1.5 * x); }};
                f.vertex_value = 0.0;
        }
        return f;
    };

    for (ProcessKind kind : kAllKinds) {
        BoundaryParams params;
        if (kind == ProcessKind::StoppedKilled)
            params = derive_params(0.5, 0.5, {0.0, 0.0});
        else
            params = params_from_simulator(
                {0.6, 0.4},
                (kind == ProcessKind::Elastic || kind == ProcessKind::General) ? 1.0 : 0.0,
                (kind == ProcessKind::Sticky || kind == ProcessKind::General) ? 2.0 : 0.0);
        double tol = kind == ProcessKind::StoppedKilled ? 1e-6 : 1e-3;
        for (double lambda : lambdas)
            for (int which = 0; which < 3; ++which) {
                ComparisonReport r =
                    boundary_residual(params, lambda, make_f(which), tol);
                r.name += "/f" + std::to_string(which);
                out.push_back(r);
            }
    }
    return out;
}

std::vector<ComparisonReport> suite_scattering(const SuiteConfig& config) {
    std::vector<ComparisonReport> out;
    auto push = [&](const std::string& name, double stat, double thr) {
        ComparisonReport r;
        r.name = name;
        r.statistic = stat;
        r.threshold = thr;
        r.pass = stat <= thr;
        r.n = 1;
        out.push_back(r);
    };

    // Walsh algebra with random weights.
    for (int n : {1, 2, 3, 5}) {
        RandomStream rs(config.seed, 1000 + static_cast<std::uint64_t>(n));
        std::vector<double> w(static_cast<std::size_t>(n));
        double tot = 0.0;
        for (auto& x : w) { x = rs.uniform(); tot += x; }
        for (auto& x : w) x /= tot;
        auto params = params_from_simulator(w, 0.0, 0.0);
        auto rep = s_walsh_properties(params);
        push("scattering/walsh-involution/n" + std::to_string(n),
             rep.involution_error, 1e-12);
        push("scattering/walsh-det/n" + std::to_string(n),
             std::abs(rep.det - rep.det_expected), 1e-12);
    }

    // Closed forms vs the generic evaluation on a lambda grid.
    for (ProcessKind kind : {ProcessKind::Walsh, ProcessKind::Elastic,
                             ProcessKind::Sticky, ProcessKind::General}) {
        BoundaryParams params = params_from_simulator(
            {0.6, 0.4},
            (kind == ProcessKind::Elastic || kind == ProcessKind::General) ? 1.0 : 0.0,
            (kind == ProcessKind::Sticky || kind == ProcessKind::General) ? 2.0 : 0.0);
        double worst = 0.0;
        for (double lambda : {0.25, 0.5, 1.0, 2.0}) {
            auto closed = s_closed_form(params, lambda).entries;
            auto generic = s_from_boundary(params, lambda).entries;
            worst = std::max(worst, (closed - generic).cwiseAbs().maxCoeff());
        }
        push(std::string("scattering/closed-vs-generic/") + kind_tag(kind), worst,
             1e-10);
    }

    // Unitarity in the quantum regime for the equal-weight sticky vertex.
    {
        BoundaryParams params = kind_params(ProcessKind::Sticky, 3);
        auto m = boundary_matrices(params);
        double worst = 0.0;
        for (double E : {0.5, 1.0, 4.0}) {
            auto S = s_matrix_generic(m, std::complex<double>(0.0, std::sqrt(E)))
                         .entries;
            worst = std::max(
                worst, (S.adjoint() * S - Eigen::MatrixXcd::Identity(3, 3))
                           .cwiseAbs()
                           .maxCoeff());
        }
        push("scattering/sticky-unitarity", worst, 1e-12);
    }

    // Elastic parameter recovery from S-matrix samples.
    {
        auto check = [&](double beta, std::vector<double> w, const char* tag) {
            auto params = params_from_simulator(w, beta, 0.0);
            auto sample = [&](double lambda) {
                return Eigen::MatrixXd(s_closed_form(params, lambda).entries.real());
            };
            auto rec = recover_params_from_s(sample, params.n());
            double err = std::abs(rec.beta - beta);
            for (int i = 0; i < params.n(); ++i)
                err = std::max(err, std::abs(rec.w[static_cast<std::size_t>(i)] -
                                             w[static_cast<std::size_t>(i)]));
            push(std::string("scattering/recovery/") + tag, err, 1e-6);
        };
        check(1.0, {0.6, 0.4}, "beta1");
        check(5.0, {1.0, 0.0}, "beta5");
        check(0.0, {0.5, 0.5}, "beta0");
    }

    // Bound state and time delay.
    {
        auto b = bound_state(2.0, 2);
        push("scattering/bound-energy", std::abs(b.energy - (-1.0)), 0.0);
        double sq = 2.0 * integrate_half_line(
                              [&](double x) {
                                  double psi = b.wavefunction(GraphPoint::interior(1, x));
                                  return psi * psi;
                              },
                              1e-12, 40.0);
        push("scattering/bound-norm", std::abs(sq - 1.0), 1e-10);

        double worst = 0.0;
        for (double k : {1.0, 3.0}) {
            auto closed = time_delay(2.0, 2, k);
            auto numeric = time_delay_numeric(2.0, 2, k);
            worst = std::max(worst,
                             (closed.entries - numeric.entries).cwiseAbs().maxCoeff());
        }
        push("scattering/time-delay", worst, 1e-6);
        push("scattering/time-delay-eig",
             std::abs(time_delay(2.0, 2, 1.0).entries.trace() - (-0.5)), 1e-12);
    }
    return out;
}

std::vector<ComparisonReport> suite_samplers(const SuiteConfig& config) {
    std::vector<ComparisonReport> out;
    const std::size_t N = config.quick ? 20000 : 200000;

    SimConfig sim;
    sim.seed = config.seed;
    sim.n_paths = N;

    auto add = [&](std::vector<ComparisonReport> rs) {
        for (auto& r : rs) out.push_back(std::move(r));
    };
    add(endpoint_law_vs_kernel(kind_params(ProcessKind::Walsh, 2),
                               GraphPoint::interior(1, 0.5), 1.0, sim));
    add(endpoint_law_vs_kernel(kind_params(ProcessKind::Elastic, 2),
                               GraphPoint::interior(1, 0.5), 1.0, sim));
    add(endpoint_law_vs_kernel(kind_params(ProcessKind::StoppedKilled, 2),
                               GraphPoint::interior(1, 1.0), 1.0, sim));

    // First passage to distance epsilon and its local time (Walsh).
    {
        const double eps = 0.1;
        auto rep = mc_hitting_time_moments(kind_params(ProcessKind::Walsh, 2), eps,
                                           config.quick ? 5000 : 20000, config.seed);
        ComparisonReport r;
        r.name = "samplers/walsh-hit-eps-mean";
        r.statistic = std::abs(rep.mean_h_kind - eps * eps);
        r.threshold = 3.0 * rep.se_h_kind + 2e-5;  // small discretization budget
        r.pass = r.statistic <= r.threshold;
        r.n = rep.n_paths;
        r.seed = config.seed;
        out.push_back(r);
        out.push_back(ks_compare(
            "samplers/local-time-exponential", rep.local_times,
            [&](double l) { return 1.0 - std::exp(-l / eps); }, 1e-3, config.seed));
    }

    // Lifetime Laplace transform: E e^{-lambda zeta} = beta rho(lambda).
    {
        const double lambda = 0.5;
        for (double gamma : {0.0, 2.0}) {
            RandomStream rs(config.seed, 777 + static_cast<std::uint64_t>(gamma));
            double sum = 0.0, sum2 = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                double z = draw_lifetime(1.0, gamma, rs).first;
                double v = std::exp(-lambda * z);
                sum += v;
                sum2 += v * v;
            }
            double mean = sum / static_cast<double>(N);
            double sd = std::sqrt((sum2 / static_cast<double>(N) - mean * mean) /
                                  static_cast<double>(N));
            double target = 1.0 * rho(lambda, 1.0, gamma);
            ComparisonReport r;
            r.name = "samplers/lifetime-laplace/gamma" + std::to_string(static_cast<int>(gamma));
            r.statistic = std::abs(mean - target);
            r.threshold = 3.0 * sd;
            r.pass = r.statistic <= r.threshold;
            r.n = N;
            r.seed = config.seed;
            out.push_back(r);
        }
    }
    return out;
}

namespace {

// Sup distance between the empirical law of d(X_t, v) (vertex = 0, pooled
// over edges; killed paths excluded and compared through total mass) and the
// analytic sub-probability CDF G(x) = atom + sum_m int_0^x density.
double pooled_distance_gap(const BoundaryParams& params, const GraphPoint& xi,
                           double t, const SimConfig& config) {
    auto samples = sample_endpoints(params, xi, t, config);
    std::vector<double> dist;
    dist.reserve(samples.size());
    std::size_t alive = 0;
    for (const auto& s : samples) {
        if (!s.survived) continue;
        ++alive;
        dist.push_back(s.position.dist_to_vertex());
    }
    std::sort(dist.begin(), dist.end());

    double atom =
        transition_kernel(params, KernelQuery{t, xi, GraphPoint::vertex(), false})
            .atom;
    auto density_all = [&](double y) {
        double v = 0.0;
        for (int m = 1; m <= params.n(); ++m)
            v += transition_kernel(params,
                                   KernelQuery{t, xi, GraphPoint::interior(m, y), false})
                     .density;
        return v;
    };
    std::vector<double> kinks;
    if (xi.is_interior()) kinks.push_back(xi.x());
    auto cv = cdf_at_sorted(dist, density_all, 1.0, kinks, atom);

    auto n = static_cast<double>(config.n_paths);
    // Ties at zero are the vertex atom: compare its mass directly, then apply
    // the one-sided step bounds to the continuous part only.
    std::size_t n0 = 0;
    while (n0 < dist.size() && dist[n0] == 0.0) ++n0;
    double d = std::abs(static_cast<double>(n0) / n - atom);
    for (std::size_t i = n0; i < dist.size(); ++i) {
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(cv[i] - lo, hi - cv[i]));
    }
    return d;
}

}  // namespace

std::vector<ComparisonReport> suite_simulator(const SuiteConfig& config) {
    std::vector<ComparisonReport> out;
    const std::size_t N = config.quick ? 10000 : 100000;
    BoundaryParams sticky = kind_params(ProcessKind::Sticky, 2);
    BoundaryParams general = kind_params(ProcessKind::General, 2);

    // Vertex-atom occupation from v at t = 1.
    {
        SimConfig sim;
        sim.seed = config.seed;
        sim.n_paths = N;
        sim.max_step = 1e-3;
        auto samples = sample_endpoints(sticky, GraphPoint::vertex(), 1.0, sim);
        double at_v = 0.0;
        for (const auto& s : samples)
            if (s.position.is_vertex()) at_v += 1.0;
        double emp = at_v / static_cast<double>(N);
        double atom = transition_kernel(
                          sticky, KernelQuery{1.0, GraphPoint::vertex(),
                                              GraphPoint::vertex(), false})
                          .atom;
        double sigma = std::sqrt(atom * (1.0 - atom) / static_cast<double>(N));
        ComparisonReport r;
        r.name = "simulator/sticky-atom-occupation";
        r.statistic = std::abs(emp - atom);
        r.threshold = 3.0 * sigma + 5e-3;  // discretization budget at max_step 1e-3
        r.pass = r.statistic <= r.threshold;
        r.n = N;
        r.seed = config.seed;
        out.push_back(r);
    }

    // Sticky first passage: E_v[H_{v,eps}] = eps^2 + gamma eps.
    {
        const double eps = 0.1;
        auto rep = mc_hitting_time_moments(sticky, eps, config.quick ? 5000 : 20000,
                                           config.seed);
        double target = eps * eps + sticky.gamma * eps;
        ComparisonReport r;
        r.name = "simulator/sticky-hit-eps-mean";
        r.statistic = std::abs(rep.mean_h_kind - target);
        r.threshold = 3.0 * rep.se_h_kind + 1e-3;
        r.pass = r.statistic <= r.threshold;
        r.n = rep.n_paths;
        r.seed = config.seed;
        out.push_back(r);
    }

    // General-kind survival from v at t = 1.
    {
        SimConfig sim;
        sim.seed = config.seed + 1;
        sim.n_paths = N;
        sim.max_step = 1e-3;
        auto samples = sample_endpoints(general, GraphPoint::vertex(), 1.0, sim);
        double alive = 0.0;
        for (const auto& s : samples)
            if (s.survived) alive += 1.0;
        double emp = alive / static_cast<double>(N);
        double defect = transition_kernel(
                            general, KernelQuery{1.0, GraphPoint::vertex(),
                                                 GraphPoint::vertex(), true})
                            .defect;
        double target = 1.0 - defect;
        double sigma = std::sqrt(target * (1.0 - target) / static_cast<double>(N));
        ComparisonReport r;
        r.name = "simulator/general-survival";
        r.statistic = std::abs(emp - target);
        r.threshold = 3.0 * sigma + 5e-3;
        r.pass = r.statistic <= r.threshold;
        r.n = N;
        r.seed = config.seed + 1;
        out.push_back(r);
    }

    // Discretization bias shrinks as max_step halves (Richardson-style).
    {
        const std::size_t Nh = config.quick ? 10000 : 20000;
        double gaps[3];
        double steps[3] = {0.2, 0.1, 0.05};
        for (int i = 0; i < 3; ++i) {
            SimConfig sim;
            sim.seed = config.seed + 10 + static_cast<std::uint64_t>(i);
            sim.n_paths = Nh;
            sim.max_step = steps[i];
            gaps[i] = pooled_distance_gap(sticky, GraphPoint::vertex(), 1.0, sim);
        }
        double allowance = 3.0 / std::sqrt(static_cast<double>(Nh));
        ComparisonReport r;
        r.name = "simulator/max-step-halving";
        r.statistic = std::max(gaps[1] - gaps[0], gaps[2] - gaps[1]);
        r.threshold = allowance;
        r.pass = gaps[1] <= gaps[0] + allowance && gaps[2] <= gaps[1] + allowance;
        r.n = Nh;
        r.seed = config.seed + 10;
        out.push_back(r);
    }
    return out;
}

std::vector<ComparisonReport> suite_limits(const SuiteConfig& config) {
    (void)config;
    std::vector<ComparisonReport> out;
    auto push = [&](const std::string& name, double stat, double thr, bool pass) {
        ComparisonReport r;
        r.name = name;
        r.statistic = stat;
        r.threshold = thr;
        r.pass = pass;
        r.n = 1;
        out.push_back(r);
    };
    const double ts[] = {0.5, 1.0};
    const double xs[] = {0.0, 0.5, 1.5};

    auto grid_gap = [&](const std::function<double(double, double)>& f,
                        const std::function<double(double, double)>& g) {
        double worst = 0.0;
        for (double t : ts)
            for (double x : xs) worst = std::max(worst, std::abs(f(t, x) - g(t, x)));
        return worst;
    };

    // Monotone collapse of g_{0,gamma} -> g and g_{beta,gamma} -> the two
    // boundary kernels as the extra parameter halves to 0.
    auto monotone = [&](const char* name,
                        const std::function<double(double, double, double)>& fam,
                        const std::function<double(double, double)>& limit) {
        double prev = 1e300;
        bool mono = true;
        double last = 0.0;
        for (int j = 2; j <= 10; ++j) {
            double p = std::pow(2.0, -j);
            last = grid_gap([&](double t, double x) { return fam(t, x, p); }, limit);
            if (last > prev * (1.0 + 1e-12)) mono = false;
            prev = last;
        }
        double collapse = grid_gap([&](double t, double x) { return fam(t, x, 0.0); },
                                   limit);
        push(std::string("limits/") + name + "/collapse", collapse, 1e-8,
             collapse <= 1e-8);
        push(std::string("limits/") + name + "/monotone", last, 1e-2, mono);
    };
    monotone("g0gamma-to-gauss",
             [](double t, double x, double g) { return g_0gamma(t, x, g); },
             [](double t, double x) { return gauss(t, x); });
    monotone("gbetagamma-to-gbeta0",
             [](double t, double x, double g) { return g_betagamma(t, x, 1.0, g); },
             [](double t, double x) { return g_beta0(t, x, 1.0); });
    monotone("gbetagamma-to-g0gamma",
             [](double t, double x, double b) { return g_betagamma(t, x, b, 2.0); },
             [](double t, double x) { return g_0gamma(t, x, 2.0); });

    // n = 1 classical half-line kernels.
    {
        BoundaryParams walsh = kind_params(ProcessKind::Walsh, 1);
        BoundaryParams elastic = kind_params(ProcessKind::Elastic, 1);
        double worst_w = 0.0, worst_e = 0.0;
        for (double t : ts)
            for (double x : {0.3, 1.0})
                for (double y : {0.5, 1.2}) {
                    KernelQuery q{t, GraphPoint::interior(1, x),
                                  GraphPoint::interior(1, y), false};
                    double reflected = gauss(t, x - y) + gauss(t, x + y);
                    worst_w = std::max(
                        worst_w,
                        std::abs(transition_kernel(walsh, q).density - reflected));
                    double d = x + y;
                    double u = d / std::sqrt(2.0 * t) + std::sqrt(t / 2.0);
                    double classic_e = gauss(t, x - y) + gauss(t, x + y) -
                                       std::exp(-d * d / (2.0 * t)) * erfcx(u);
                    worst_e = std::max(
                        worst_e,
                        std::abs(transition_kernel(elastic, q).density - classic_e));
                }
        push("limits/n1-reflected", worst_w, 1e-12, worst_w <= 1e-12);
        push("limits/n1-elastic", worst_e, 1e-12, worst_e <= 1e-12);

        // Sticky half-line vertex occupation against an independent erfc form.
        BoundaryParams sticky = kind_params(ProcessKind::Sticky, 1);
        double atom = transition_kernel(sticky, KernelQuery{1.0, GraphPoint::vertex(),
                                                            GraphPoint::vertex(), false})
                          .atom;
        double classic = std::exp(2.0 / (sticky.gamma * sticky.gamma)) *
                         std::erfc(std::sqrt(2.0) / sticky.gamma);
        push("limits/n1-sticky-atom", std::abs(atom - classic), 1e-12,
             std::abs(atom - classic) <= 1e-12);
    }

    // Parameter collapses reduce the kinds correctly.
    {
        auto w = std::vector<double>{0.6, 0.4};
        bool kinds_ok =
            params_from_simulator(w, 0.0, 0.0).kind == ProcessKind::Walsh &&
            params_from_simulator(w, 1.0, 0.0).kind == ProcessKind::Elastic &&
            params_from_simulator(w, 0.0, 2.0).kind == ProcessKind::Sticky &&
            params_from_simulator(w, 1.0, 2.0).kind == ProcessKind::General;
        push("limits/kind-collapse", kinds_ok ? 0.0 : 1.0, 0.5, kinds_ok);

        // Elastic kernel approaches the Walsh kernel monotonically as the
        // killing rate halves to 0.
        BoundaryParams walsh = params_from_simulator(w, 0.0, 0.0);
        double prev = 1e300, last = 0.0;
        bool mono = true;
        for (int j = 4; j <= 10; ++j) {
            BoundaryParams el = params_from_simulator(w, std::pow(2.0, -j), 0.0);
            double worst = 0.0;
            for (double t : ts) {
                KernelQuery q{t, GraphPoint::interior(1, 1.0),
                              GraphPoint::interior(2, 0.5), false};
                worst = std::max(worst,
                                 std::abs(transition_kernel(el, q).density -
                                          transition_kernel(walsh, q).density));
            }
            if (worst > prev * (1.0 + 1e-12)) mono = false;
            prev = worst;
            last = worst;
        }
        push("limits/beta0-collapse", last, 1e-3, mono && last <= 1e-3);
    }
    return out;
}

std::vector<ComparisonReport> run_suite(const SuiteConfig& config) {
    std::vector<ComparisonReport> all;
    struct Entry {
        const char* name;
        std::vector<ComparisonReport> (*fn)(const SuiteConfig&);
    };
    const Entry suites[] = {
        {"laplace", suite_laplace},     {"chapman", suite_chapman},
        {"boundary", suite_boundary},   {"scattering", suite_scattering},
        {"samplers", suite_samplers},   {"simulator", suite_simulator},
        {"limits", suite_limits},
    };
    // When the filter names a whole suite, skip the others entirely (the
    // expensive Monte Carlo suites in particular); otherwise run everything
    // and filter at report level.
    bool filter_is_suite = false;
    for (const auto& s : suites)
        if (!config.only.empty() &&
            std::string(s.name).find(config.only) != std::string::npos)
            filter_is_suite = true;
    auto add = [&](std::vector<ComparisonReport> rs) {
        for (auto& r : rs) all.push_back(std::move(r));
    };
    for (const auto& s : suites) {
        if (filter_is_suite &&
            std::string(s.name).find(config.only) == std::string::npos)
            continue;
        add(s.fn(config));
    }

    if (!config.only.empty() && !filter_is_suite) {
        std::vector<ComparisonReport> filtered;
        for (auto& r : all)
            if (r.name.find(config.only) != std::string::npos)
                filtered.push_back(std::move(r));
        all = std::move(filtered);
    }
    std::sort(all.begin(), all.end(),
              [](const ComparisonReport& a, const ComparisonReport& b) {
                  return a.name < b.name;
              });
    return all;
}

bool all_pass(const std::vector<ComparisonReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

std::string format_reports(const std::vector<ComparisonReport>& reports) {
    std::string out;
    char buf[256];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%-60s stat=%-12.6g thr=%-12.6g %s seed=%llu n=%zu\n",
                      r.name.c_str(), r.statistic, r.threshold,
                      r.pass ? "pass" : "FAIL",
                      static_cast<unsigned long long>(r.seed), r.n);
        out += buf;
    }
    return out;
}

}  // namespace starbm
