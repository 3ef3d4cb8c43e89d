#pragma once

#include "starbm/graph.hpp"
#include "starbm/random.hpp"

#include <cstdint>
#include <vector>

// Pathwise simulation: exact endpoint samplers for the Walsh, elastic and
// stopped-killed kinds; controlled-discretization skeleton simulation with
// the vertex time change for the sticky and general kinds.
//
// Local time follows the alpha-potential normalization used by the kernels
// (conventions differing by a factor 2 exist in the literature).

namespace starbm {

struct EndpointSample {
    GraphPoint position = GraphPoint::cemetery();
    double local_time = 0.0;  // on the process's own scale
    bool survived = false;
    bool exact = false;  // true for the Walsh/elastic/stopped-killed samplers
};

struct SkeletonBreakpoint {
    double u;  // internal (Walsh) time
    double h;  // external time h = u + gamma L_u
    GraphPoint position;
    double local_time;
    bool alive;
};

struct PathSkeleton {
    std::vector<SkeletonBreakpoint> points;
    double max_step;
};

struct SimConfig {
    double max_step = 1e-3;
    double horizon = 1.0;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
};

// Exact two-phase endpoint draw for the Walsh kind: first-hit decomposition
// from an interior start, then the joint vertex draw over the remaining time.
EndpointSample endpoint_walsh(const BoundaryParams& params, const GraphPoint& xi,
                              double t, RandomStream& rs);

// Walsh endpoint killed with probability 1 - exp(-beta L_t).
EndpointSample endpoint_elastic(const BoundaryParams& params, const GraphPoint& xi,
                                double t, RandomStream& rs);

// b = 0 process: stopped at the first hit of the vertex, then killed there
// after an exponential holding time at rate beta.
EndpointSample endpoint_stopped_killed(const BoundaryParams& params,
                                       const GraphPoint& xi, double t,
                                       RandomStream& rs);

// Underlying Walsh pair (position, L) on adaptive internal-time breakpoints
// until the external time h = u + gamma L reaches config.horizon. Interior
// segments use the exact first-hit decomposition; vertex segments advance in
// sub-steps <= max_step. For beta > 0 kinds a pre-drawn Exp(beta) local-time
// level marks the path dead once crossed.
PathSkeleton skeleton_simulate(const BoundaryParams& params, const GraphPoint& xi,
                               const SimConfig& config, RandomStream& rs);

// Sticky/general endpoint at external time t: skeleton run whose vertex
// sub-steps are committed before drawing (never redrawn) and shrink near the
// horizon so the local-time stretch stays a bounded fraction of the remaining
// budget. A sub-step straddling t is resolved in place: at the vertex with
// probability gamma*y / (delta + gamma*y), the local-time share of the
// external window. Remaining gaps below max_step^2 classify as at the vertex.
// Bias is controlled by max_step; exact flag false.
EndpointSample endpoint_sticky_general(const BoundaryParams& params,
                                       const GraphPoint& xi, double t,
                                       const SimConfig& config, RandomStream& rs);

// Dispatch on params.kind.
EndpointSample simulate_endpoint(const BoundaryParams& params, const GraphPoint& xi,
                                 double t, const SimConfig& config,
                                 RandomStream& rs);

// config.n_paths endpoint draws, parallel over paths with per-path stream id
// equal to the path index; the result is independent of the worker count.
std::vector<EndpointSample> sample_endpoints(const BoundaryParams& params,
                                             const GraphPoint& xi, double t,
                                             const SimConfig& config);

struct HittingMomentsReport {
    double epsilon;
    std::size_t n_paths;
    std::vector<double> h_walsh;       // internal-scale hitting times H^w
    std::vector<double> h_kind;        // H^w + gamma L (sticky scale)
    std::vector<double> local_times;   // L(H_{v,eps})
    double mean_h_kind;
    double se_h_kind;
    double mean_local_time;
    double se_local_time;
};

// First passage to distance epsilon from the vertex, started at v, via a
// fine-step skeleton (interior hits of v split exactly at the drawn hit
// time; epsilon-level crossings within a step guarded by bridge
// probabilities). The sticky-scale time is H^w + gamma L pathwise.
HittingMomentsReport mc_hitting_time_moments(const BoundaryParams& params,
                                             double epsilon, std::size_t n_paths,
                                             std::uint64_t seed);

}  // namespace starbm
