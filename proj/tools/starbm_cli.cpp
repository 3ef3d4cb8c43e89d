// Command-line front end: kernels, resolvents, S-matrices, simulation, and
// the validation suite. CSV outputs use '.'-decimal, 17 significant digits,
// newline-terminated records, fixed column order.
//
// Exit codes: 0 ok, 1 validation failure, 2 configuration error, 3 numeric
// failure.

#include "starbm/kernels.hpp"
#include "starbm/process_sim.hpp"
#include "starbm/resolvents.hpp"
#include "starbm/scattering.hpp"
#include "starbm/validation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct BoundaryOpts {
    int n = 2;
    double a = 0.0;
    double c = 0.0;
    std::vector<double> b;
    std::vector<double> w;
    double beta = 0.0;
    double gamma = 0.0;
    std::string kind;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--n", n, "number of edges")->check(CLI::PositiveNumber);
        cmd->add_option("--a", a, "Feller data a (with --c and --b)");
        cmd->add_option("--c", c, "Feller data c");
        cmd->add_option("--b", b, "Feller weights b_1..b_n (comma separated)")
            ->delimiter(',');
        cmd->add_option("--w", w, "edge weights w_1..w_n (comma separated)")
            ->delimiter(',');
        cmd->add_option("--beta", beta, "killing rate on the local-time scale");
        cmd->add_option("--gamma", gamma, "stickiness parameter");
        cmd->add_option("--kind", kind,
                        "walsh|elastic|sticky|general|stopped (cross-check / "
                        "defaults)");
    }
};

starbm::BoundaryParams make_params(const CLI::App* cmd, BoundaryOpts& o) {
    bool have_feller =
        cmd->count("--a") > 0 || cmd->count("--c") > 0 || cmd->count("--b") > 0;
    bool have_sim = cmd->count("--w") > 0 || cmd->count("--beta") > 0 ||
                    cmd->count("--gamma") > 0;
    bool stopped_kind = o.kind == "stopped" || o.kind == "stopped-killed" ||
                        o.kind == "stoppedkilled";
    if (have_feller && have_sim && !stopped_kind)
        throw ConfigError("give either (a, c, b) or (w, beta, gamma), not both");

    if (stopped_kind) {
        double beta = o.beta;
        if (cmd->count("--a") > 0 && cmd->count("--c") > 0) {
            if (!(o.c > 0.0)) throw ConfigError("stopped kind needs c > 0");
            beta = o.a / o.c;
        }
        if (!(beta >= 0.0)) throw ConfigError("stopped kind needs beta >= 0");
        double a = beta / (1.0 + beta), c = 1.0 / (1.0 + beta);
        return starbm::derive_params(
            a, c, std::vector<double>(static_cast<std::size_t>(o.n), 0.0));
    }

    starbm::BoundaryParams params;
    if (have_feller) {
        double a = o.a, c = o.c;
        std::vector<double> b = o.b;
        if (b.empty()) b.assign(static_cast<std::size_t>(o.n), (1.0 - a - c) / o.n);
        params = starbm::derive_params(a, c, b);
    } else {
        std::vector<double> w = o.w;
        if (w.empty()) w.assign(static_cast<std::size_t>(o.n), 1.0 / o.n);
        double tot = 0.0;
        for (double x : w) tot += x;
        if (tot <= 0.0) throw ConfigError("weights must have positive sum");
        for (double& x : w) x /= tot;
        params = starbm::params_from_simulator(w, o.beta, o.gamma);
    }
    if (!o.kind.empty()) {
        std::string got = starbm::to_string(params.kind);
        if (got != o.kind)
            throw ConfigError("--kind " + o.kind + " does not match derived kind " + got);
    }
    return params;
}

starbm::GraphPoint parse_point(const std::string& text) {
    if (text == "atom" || text == "v" || text == "vertex")
        return starbm::GraphPoint::vertex();
    return starbm::GraphPoint::parse(text);
}

void write_output(const std::string& out_path, const std::string& body) {
    if (out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + out_path);
    f << body;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Brownian motions on a single-vertex star graph"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file (ini format; flags override)");

    std::string out_path;
    app.add_option("--out", out_path, "output path (default stdout)");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "evaluate transition kernels");
    BoundaryOpts kb;
    kb.add_to(kernel);
    std::vector<double> k_ts{1.0};
    std::string k_from = "v";
    std::vector<std::string> k_tos;
    kernel->add_option("--t", k_ts, "times")->delimiter(',');
    kernel->add_option("--from", k_from, "start point: v | k:x");
    kernel->add_option("--to", k_tos, "query points: k:x | atom")->delimiter(',');

    // resolvent
    auto* resolvent = app.add_subcommand("resolvent", "evaluate resolvent kernels");
    BoundaryOpts rb;
    rb.add_to(resolvent);
    std::vector<double> r_lambdas{0.5};
    std::string r_from = "v";
    std::vector<std::string> r_tos;
    resolvent->add_option("--lambda", r_lambdas, "lambda grid")->delimiter(',');
    resolvent->add_option("--from", r_from, "start point");
    resolvent->add_option("--to", r_tos, "query points: k:x | atom")->delimiter(',');

    // scattering
    auto* scattering = app.add_subcommand("scattering", "S-matrix diagnostics");
    BoundaryOpts sb;
    sb.add_to(scattering);
    std::vector<double> s_lambdas{0.5};
    scattering->add_option("--lambda", s_lambdas, "lambda grid")->delimiter(',');

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo endpoint/skeleton");
    BoundaryOpts mb;
    mb.add_to(simulate);
    double m_t = 1.0;
    std::string m_from = "v";
    std::size_t m_paths = 1000;
    double m_max_step = 1e-3;
    std::uint64_t m_seed = 0;
    bool m_skeleton = false;
    simulate->add_option("--t", m_t, "time horizon");
    simulate->add_option("--from", m_from, "start point");
    simulate->add_option("--n-paths", m_paths, "number of paths");
    simulate->add_option("--max-step", m_max_step, "vertex sub-step bound");
    simulate->add_option("--seed", m_seed, "RNG seed");
    simulate->add_flag("--skeleton", m_skeleton, "emit path skeletons");

    // validate
    auto* validate = app.add_subcommand("validate", "run the validation suite");
    std::uint64_t v_seed = 42;
    std::string v_only;
    bool v_quick = false, v_fault = false;
    validate->add_option("--seed", v_seed, "RNG seed");
    validate->add_option("--only", v_only, "substring filter on test names");
    validate->add_flag("--quick", v_quick, "reduced sample sizes");
    validate->add_flag("--inject-fault", v_fault,
                       "corrupt a kernel term (harness self-test)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        std::ostringstream os;
        if (*kernel) {
            auto params = make_params(kernel, kb);
            if (k_tos.empty()) throw ConfigError("kernel needs --to");
            auto from = parse_point(k_from);
            os << "t,from,to,density,atom,defect\n";
            for (double t : k_ts)
                for (const auto& to_text : k_tos) {
                    auto to = parse_point(to_text);
                    starbm::KernelQuery q{t, from, to, true};
                    auto k = starbm::transition_kernel(params, q);
                    os << num(t) << ',' << from.to_string() << ','
                       << (to.is_vertex() ? "atom" : to.to_string()) << ','
                       << num(k.density) << ',' << num(k.atom) << ','
                       << num(k.defect) << '\n';
                }
        } else if (*resolvent) {
            auto params = make_params(resolvent, rb);
            if (r_tos.empty()) throw ConfigError("resolvent needs --to");
            auto from = parse_point(r_from);
            os << "lambda,from,to,density,atom\n";
            for (double lambda : r_lambdas)
                for (const auto& to_text : r_tos) {
                    auto to = parse_point(to_text);
                    starbm::ResolventQuery q{lambda, from, to};
                    auto r = starbm::resolvent_kernel(params, q);
                    os << num(lambda) << ',' << from.to_string() << ','
                       << (to.is_vertex() ? "atom" : to.to_string()) << ','
                       << num(r.density) << ',' << num(r.atom) << '\n';
                }
        } else if (*scattering) {
            auto params = make_params(scattering, sb);
            const int n = params.n();
            for (double lambda : s_lambdas) {
                auto S = starbm::s_closed_form(params, lambda).entries;
                os << "lambda " << num(lambda) << '\n';
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j)
                        os << (j ? "," : "") << num(S(i, j).real());
                    os << '\n';
                }
                os << "det " << num(S.real().determinant()) << '\n';
                // Unitarity is a quantum-regime property: evaluate at
                // kappa = i sqrt(E) with E = 2 lambda.
                std::complex<double> kq(0.0, std::sqrt(2.0 * lambda));
                auto Sq = starbm::s_matrix_generic(
                              starbm::boundary_matrices(params, lambda), kq)
                              .entries;
                double defect = (Sq.adjoint() * Sq -
                                 Eigen::MatrixXcd::Identity(n, n))
                                    .cwiseAbs()
                                    .maxCoeff();
                os << "unitarity_defect " << num(defect) << '\n';
            }
            if (params.kind == starbm::ProcessKind::Elastic) {
                auto sample = [&](double lambda) {
                    return Eigen::MatrixXd(
                        starbm::s_closed_form(params, lambda).entries.real());
                };
                auto rec = starbm::recover_params_from_s(sample, n);
                os << "recovered_beta " << num(rec.beta) << '\n';
                os << "recovered_w";
                for (double wv : rec.w) os << ' ' << num(wv);
                os << '\n';
            }
            if (params.gamma > 0.0) {
                auto b = starbm::bound_state(params.gamma, n);
                os << "bound_state_energy " << num(b.energy) << '\n';
                os << "time_delay_eigenvalue_k1 "
                   << num(starbm::time_delay(params.gamma, n, 1.0).entries.trace())
                   << '\n';
            }
        } else if (*simulate) {
            auto params = make_params(simulate, mb);
            auto from = parse_point(m_from);
            starbm::SimConfig cfg;
            cfg.max_step = m_max_step;
            cfg.horizon = m_t;
            cfg.n_paths = m_paths;
            cfg.seed = m_seed;
            if (m_skeleton) {
                os << "path_id,u,t_external,edge,x,local_time,alive\n";
                for (std::size_t i = 0; i < m_paths; ++i) {
                    starbm::RandomStream rs(m_seed, i);
                    auto sk = starbm::skeleton_simulate(params, from, cfg, rs);
                    for (const auto& p : sk.points) {
                        os << i << ',' << num(p.u) << ',' << num(p.h) << ','
                           << (p.position.is_interior() ? std::to_string(p.position.edge())
                                                        : std::string("0"))
                           << ',' << num(p.position.is_interior() ? p.position.x() : 0.0)
                           << ',' << num(p.local_time) << ',' << (p.alive ? 1 : 0)
                           << '\n';
                    }
                }
            } else {
                auto samples = starbm::sample_endpoints(params, from, m_t, cfg);
                os << "path_id,edge,x,local_time,alive\n";
                for (std::size_t i = 0; i < samples.size(); ++i) {
                    const auto& s = samples[i];
                    os << i << ','
                       << (s.position.is_interior() ? std::to_string(s.position.edge())
                                                    : std::string("0"))
                       << ',' << num(s.position.is_interior() ? s.position.x() : 0.0)
                       << ',' << num(s.local_time) << ',' << (s.survived ? 1 : 0)
                       << '\n';
                }
            }
        } else if (*validate) {
            starbm::SuiteConfig cfg;
            cfg.seed = v_seed;
            cfg.only = v_only;
            cfg.quick = v_quick;
            cfg.inject_fault = v_fault;
            auto reports = starbm::run_suite(cfg);
            os << starbm::format_reports(reports);
            bool ok = starbm::all_pass(reports);
            os << (ok ? "ALL PASS" : "FAILURES PRESENT") << " (" << reports.size()
               << " checks)\n";
            write_output(out_path, os.str());
            return ok ? 0 : 1;
        }
        write_output(out_path, os.str());
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    }
}
