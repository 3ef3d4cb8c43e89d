#pragma once

#include "starbm/graph.hpp"

// Lambda-domain objects: e_lambda, the resolvent kernels of all process
// kinds, resolvent application by quadrature, and local-time alpha-potentials.

namespace starbm {

struct ResolventQuery {
    double lambda;     // > 0
    GraphPoint from;   // not cemetery
    GraphPoint to;     // interior for the density part; vertex selects the atom
};

struct ResolventValue {
    double density = 0.0;  // kernel value against Lebesgue measure
    double atom = 0.0;     // coefficient of the Dirac measure at v
};

// e_lambda(xi) = exp(-sqrt(2 lambda) d(xi, v)); Laplace transform of H_v.
double e_lambda(const GraphPoint& xi, double lambda);

// rho(lambda) = 1 / (beta + sqrt(2 lambda) + gamma lambda).
double rho(double lambda, double beta, double gamma);

// Dirichlet resolvent kernel r^D_lambda(xi, eta).
double dirichlet_resolvent_kernel(const GraphPoint& xi, const GraphPoint& eta,
                                  double lambda);

// Resolvent kernel of the process: r^D + e_k(xi) 2 w_m rho(lambda) e_m(eta)
// plus the gamma rho(lambda) e_lambda(xi) vertex atom (sticky/general), or
// the (beta + lambda)^{-1} e_lambda(xi) atom for the stopped-killed kind.
ResolventValue resolvent_kernel(const BoundaryParams& params,
                                const ResolventQuery& q);

// R_lambda f(xi) by quadrature against the resolvent kernel (atom included).
double apply_resolvent(const BoundaryParams& params, double lambda,
                       const GraphFunction& f, const GraphPoint& xi,
                       const EdgeQuadrature& quad);

// (R_lambda f)'(v_k) = 2 (e_{lambda,k}, f_k) - sqrt(2 lambda) R_lambda f(v).
double resolvent_derivative_at_vertex(const BoundaryParams& params, double lambda,
                                      const GraphFunction& f, int k,
                                      const EdgeQuadrature& quad);

// alpha-potential of the local time at the vertex:
// (sqrt(2 alpha) + gamma alpha)^{-1} exp(-sqrt(2 alpha) d(xi, v)).
double local_time_alpha_potential(double alpha, const GraphPoint& xi,
                                  double gamma = 0.0);

}  // namespace starbm
