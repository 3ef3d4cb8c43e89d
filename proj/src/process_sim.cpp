#include "starbm/process_sim.hpp"

#include "starbm/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace starbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_time(double t) {
    if (!(t > 0.0)) throw std::domain_error("time must be > 0");
}

// Static-chunk parallel loop; deterministic because each index writes only
// its own slot and randomness is per-index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(hw, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v, double mean) {
    double s2 = 0.0;
    for (double x : v) s2 += (x - mean) * (x - mean);
    auto n = static_cast<double>(v.size());
    return std::sqrt(s2 / (n - 1.0) / n);
}

}  // namespace

EndpointSample endpoint_walsh(const BoundaryParams& params, const GraphPoint& xi,
                              double t, RandomStream& rs) {
    require_time(t);
    if (xi.is_cemetery()) throw std::domain_error("start must not be cemetery");

    double remaining = t;
    if (xi.is_interior()) {
        double x = xi.x();
        double hit = draw_first_hit_time(x, rs);
        if (hit > t) {
            EndpointSample s;
            s.position = GraphPoint::interior(xi.edge(), draw_conditioned_position(x, t, rs));
            s.local_time = 0.0;
            s.survived = true;
            s.exact = true;
            return s;
        }
        remaining = t - hit;
    }
    EndpointSample s;
    s.survived = true;
    s.exact = true;
    if (remaining <= 0.0) {  // hit exactly at t (measure zero; counter still advances)
        s.position = GraphPoint::vertex();
        return s;
    }
    VertexStepDraw d = draw_vertex_joint(remaining, params.w, rs);
    s.position = GraphPoint::interior(d.edge, d.x);
    s.local_time = d.y;
    return s;
}

EndpointSample endpoint_elastic(const BoundaryParams& params, const GraphPoint& xi,
                                double t, RandomStream& rs) {
    EndpointSample s = endpoint_walsh(params, xi, t, rs);
    if (params.beta > 0.0 && s.local_time > 0.0) {
        if (rs.uniform() < 1.0 - std::exp(-params.beta * s.local_time)) {
            s.position = GraphPoint::cemetery();
            s.survived = false;
        }
    }
    return s;
}

EndpointSample endpoint_stopped_killed(const BoundaryParams& params,
                                       const GraphPoint& xi, double t,
                                       RandomStream& rs) {
    require_time(t);
    EndpointSample s;
    s.exact = true;
    double hit = 0.0;
    if (xi.is_interior()) {
        double x = xi.x();
        hit = draw_first_hit_time(x, rs);
        if (hit > t) {
            s.position = GraphPoint::interior(xi.edge(), draw_conditioned_position(x, t, rs));
            s.survived = true;
            return s;
        }
    }
    // Stopped at v since time `hit`; killed there at rate beta.
    bool killed = params.beta > 0.0 &&
                  rs.uniform() < 1.0 - std::exp(-params.beta * (t - hit));
    s.position = killed ? GraphPoint::cemetery() : GraphPoint::vertex();
    s.survived = !killed;
    return s;
}

PathSkeleton skeleton_simulate(const BoundaryParams& params, const GraphPoint& xi,
                               const SimConfig& config, RandomStream& rs) {
    if (!(config.max_step > 0.0)) throw std::domain_error("max_step must be > 0");
    require_time(config.horizon);
    if (xi.is_cemetery()) throw std::domain_error("start must not be cemetery");

    const double gamma = params.gamma;
    const double horizon = config.horizon;
    double kill_level = kInf;
    if (params.beta > 0.0 && params.kind != ProcessKind::StoppedKilled)
        kill_level = rs.exponential(params.beta);

    PathSkeleton sk;
    sk.max_step = config.max_step;
    double u = 0.0, h = 0.0, L = 0.0;
    GraphPoint pos = xi;
    sk.points.push_back({u, h, pos, L, true});

    while (h < horizon) {
        if (pos.is_interior()) {
            double x = pos.x();
            double budget = horizon - h;  // interior time runs at unit external rate
            double hit = draw_first_hit_time(x, rs);
            if (hit >= budget) {
                pos = GraphPoint::interior(pos.edge(),
                                           draw_conditioned_position(x, budget, rs));
                u += budget;
                h = horizon;
                sk.points.push_back({u, h, pos, L, true});
                break;
            }
            u += hit;
            h += hit;
            pos = GraphPoint::vertex();
            sk.points.push_back({u, h, pos, L, true});
            if (params.kind == ProcessKind::StoppedKilled) {
                double hold = params.beta > 0.0 ? rs.exponential(params.beta) : kInf;
                if (h + hold < horizon) {
                    h += hold;
                    sk.points.push_back({u, h, GraphPoint::cemetery(), L, false});
                } else {
                    sk.points.push_back({u, horizon, pos, L, true});
                }
                break;
            }
        } else {
            double delta = std::min(config.max_step, horizon - h);
            VertexStepDraw d = draw_vertex_joint(delta, params.w, rs);
            u += delta;
            L += d.y;
            h += delta + gamma * d.y;
            if (L >= kill_level) {
                sk.points.push_back({u, h, GraphPoint::cemetery(), kill_level, false});
                break;
            }
            pos = GraphPoint::interior(d.edge, d.x);
            sk.points.push_back({u, h, pos, L, true});
        }
    }
    return sk;
}

EndpointSample endpoint_sticky_general(const BoundaryParams& params,
                                       const GraphPoint& xi, double t,
                                       const SimConfig& config, RandomStream& rs) {
    require_time(t);
    if (params.kind != ProcessKind::Sticky && params.kind != ProcessKind::General)
        throw std::invalid_argument("sticky or general kind required");
    if (xi.is_cemetery()) throw std::domain_error("start must not be cemetery");

    const double gamma = params.gamma;
    const double gap_tol = config.max_step * config.max_step;
    double kill_level =
        params.kind == ProcessKind::General ? rs.exponential(params.beta) : kInf;

    double h = 0.0, L = 0.0;
    GraphPoint pos = xi;

    auto killed_at = [&]() {
        EndpointSample s;
        s.position = GraphPoint::cemetery();
        s.local_time = kill_level;
        s.survived = false;
        return s;
    };
    auto at_vertex = [&](double local_time) {
        EndpointSample s;
        s.position = GraphPoint::vertex();
        s.local_time = local_time;
        s.survived = true;
        return s;
    };

    for (;;) {
        if (pos.is_interior()) {
            double x = pos.x();
            double budget = t - h;  // exact inversion: unit external rate
            double hit = draw_first_hit_time(x, rs);
            if (hit >= budget) {
                EndpointSample s;
                s.position = GraphPoint::interior(
                    pos.edge(), draw_conditioned_position(x, budget, rs));
                s.local_time = L;
                s.survived = true;
                return s;
            }
            h += hit;
            pos = GraphPoint::vertex();
        } else {
            double remaining = t - h;
            if (remaining <= gap_tol) {
                // Leaving v and returning within the gap moves O(sqrt(gap))
                // and is folded into the max_step budget.
                double dl = gamma > 0.0 ? remaining / gamma : 0.0;
                if (L + dl >= kill_level) return killed_at();
                return at_vertex(L + dl);
            }
            // Commit to the sub-step before drawing so an overshoot is a
            // genuine straddle of t, resolved in place rather than redrawn
            // (redrawing would condition the local-time increment downward).
            // The cap keeps the local-time stretch gamma*y, scale
            // gamma*sqrt(delta), a bounded fraction of the remaining budget,
            // making straddles rare tail events.
            double delta = std::min(config.max_step, remaining);
            if (gamma > 0.0) {
                double q = remaining / (4.0 * gamma);
                delta = std::min(delta, q * q);
            }
            VertexStepDraw d = draw_vertex_joint(delta, params.w, rs);
            double advance = delta + gamma * d.y;
            if (advance <= remaining) {
                L += d.y;
                h += advance;
                if (L >= kill_level) return killed_at();
                pos = GraphPoint::interior(d.edge, d.x);
                continue;
            }
            // t lies inside this sub-step window of external length
            // delta + gamma*y, of which gamma*y is spent at the vertex.
            double y_at_t = gamma > 0.0 ? std::min(d.y, remaining / gamma) : 0.0;
            if (L + y_at_t >= kill_level) return killed_at();
            if (rs.uniform() * advance < gamma * d.y) return at_vertex(L + y_at_t);
            EndpointSample s;  // mid-excursion, within O(sqrt(delta)) of d.x
            s.position = GraphPoint::interior(d.edge, d.x);
            s.local_time = L + y_at_t;
            s.survived = true;
            return s;
        }
    }
}

EndpointSample simulate_endpoint(const BoundaryParams& params, const GraphPoint& xi,
                                 double t, const SimConfig& config,
                                 RandomStream& rs) {
    switch (params.kind) {
        case ProcessKind::Walsh: return endpoint_walsh(params, xi, t, rs);
        case ProcessKind::Elastic: return endpoint_elastic(params, xi, t, rs);
        case ProcessKind::StoppedKilled:
            return endpoint_stopped_killed(params, xi, t, rs);
        case ProcessKind::Sticky:
        case ProcessKind::General:
            return endpoint_sticky_general(params, xi, t, config, rs);
    }
    throw std::logic_error("unreachable");
}

std::vector<EndpointSample> sample_endpoints(const BoundaryParams& params,
                                             const GraphPoint& xi, double t,
                                             const SimConfig& config) {
    std::vector<EndpointSample> out(config.n_paths);
    parallel_for(config.n_paths, [&](std::size_t i) {
        RandomStream rs(config.seed, i);
        out[i] = simulate_endpoint(params, xi, t, config, rs);
    });
    return out;
}

namespace {

// One path of the first passage to distance epsilon from v, started at v.
// Interior hits of the vertex are split exactly at the drawn hit time, so
// local time accrues only through vertex sub-steps; epsilon-crossings inside
// a step are guarded by Brownian-bridge level-crossing probabilities.
void hitting_path(const BoundaryParams& params, double epsilon, RandomStream& rs,
                  double& h_out, double& l_out) {
    const double delta = epsilon * epsilon * 1e-3;
    double u = 0.0, L = 0.0;
    bool at_vertex = true;
    double x = 0.0;

    for (;;) {
        if (at_vertex) {
            VertexStepDraw d = draw_vertex_joint(delta, params.w, rs);
            u += delta;
            L += d.y;
            if (d.x >= epsilon) break;
            // max over the sub-step may exceed epsilon even if the endpoint
            // does not: bridge 0 -> x upcrossing bound
            if (rs.uniform() < std::exp(-2.0 * epsilon * (epsilon - d.x) / delta)) break;
            x = d.x;
            at_vertex = false;
        } else {
            double hit = draw_first_hit_time(x, rs);
            if (hit < delta) {
                // crossed epsilon on the way down? bridge x -> 0 over `hit`
                if (rs.uniform() < std::exp(-2.0 * (epsilon - x) * epsilon / hit)) {
                    u += hit;
                    break;
                }
                u += hit;
                at_vertex = true;
            } else {
                double y = draw_conditioned_position(x, delta, rs);
                u += delta;
                if (y >= epsilon) break;
                if (rs.uniform() <
                    std::exp(-2.0 * (epsilon - x) * (epsilon - y) / delta))
                    break;
                x = y;
            }
        }
    }
    h_out = u;
    l_out = L;
}

}  // namespace

HittingMomentsReport mc_hitting_time_moments(const BoundaryParams& params,
                                             double epsilon, std::size_t n_paths,
                                             std::uint64_t seed) {
    if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be > 0");
    if (n_paths < 2) throw std::domain_error("need at least 2 paths");

    HittingMomentsReport r;
    r.epsilon = epsilon;
    r.n_paths = n_paths;
    r.h_walsh.resize(n_paths);
    r.h_kind.resize(n_paths);
    r.local_times.resize(n_paths);

    parallel_for(n_paths, [&](std::size_t i) {
        RandomStream rs(seed, i);
        double h, l;
        hitting_path(params, epsilon, rs, h, l);
        r.h_walsh[i] = h;
        r.local_times[i] = l;
        r.h_kind[i] = h + params.gamma * l;  // sticky-scale passage time
    });

    r.mean_h_kind = mean_of(r.h_kind);
    r.se_h_kind = stderr_of(r.h_kind, r.mean_h_kind);
    r.mean_local_time = mean_of(r.local_times);
    r.se_local_time = stderr_of(r.local_times, r.mean_local_time);
    return r;
}

}  // namespace starbm
