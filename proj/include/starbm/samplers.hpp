#pragma once

#include "starbm/random.hpp"

#include <utility>
#include <vector>

// Exact primitive draws behind all path constructions: first hits of the
// vertex, Dirichlet-conditioned positions, the joint (excursion height,
// local time) draw at the vertex, inverse local times and lifetimes.

namespace starbm {

// Outcome of an exact vertex step over internal time t: excursion height x,
// local-time increment y, and the edge chosen with probabilities w.
struct VertexStepDraw {
    double x;
    double y;
    int edge;  // 1-based
};

// First hitting time of the vertex from distance x: H = x^2 / Z^2 with Z a
// standard normal (exact, branch-free; a zero Z is redrawn).
double draw_first_hit_time(double x, RandomStream& rs);

// Position at time t conditioned on not hitting the vertex, started from x:
// rejection sampler proposing x + Z sqrt(t), accepting with probability
// 1 - exp(-2 x y / t). Output density is the normalized Dirichlet kernel.
double draw_conditioned_position(double x, double t, RandomStream& rs);

// Joint draw of (|position|, local-time increment, edge) over internal time t
// started at the vertex. Exact via the Maxwell reduction: the joint density
// 2 (x+y) (2 pi t^3)^{-1/2} e^{-(x+y)^2/2t} depends on (x, y) only through
// s = x + y.  Change of variables (x, y) -> (s, x): the Jacobian is 1, so the
// s-marginal is s * [density] integrated over x in [0, s], i.e.
// 2 s^2 (2 pi t^3)^{-1/2} e^{-s^2/2t} — the Maxwell (chi-3, scale sqrt(t))
// law — and x | s is uniform on [0, s].  Hence: draw s = sqrt(t) * ||3-dim
// standard normal||, x ~ U[0, s], y = s - x.
VertexStepDraw draw_vertex_joint(double t, const std::vector<double>& weights,
                                 RandomStream& rs);

// Inverse local time K_r = r^2 / Z^2 + gamma r (exact; Laplace functional
// exp(-(sqrt(2 lambda) + gamma lambda) r)).
double draw_inverse_local_time(double r, double gamma, RandomStream& rs);

// Lifetime of the killed-at-rate-beta process: draws S ~ Exp(beta) on the
// local-time scale and returns (K_S, S).
std::pair<double, double> draw_lifetime(double beta, double gamma,
                                        RandomStream& rs);

// Probability that a Brownian bridge from x to y over dt touches 0:
// exp(-2 x y / dt); 1 when either endpoint is at the vertex.
double bridge_crossing_prob(double x, double y, double dt);

}  // namespace starbm
