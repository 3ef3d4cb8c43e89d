#pragma once

#include "starbm/graph.hpp"

// Time-domain transition kernels on the star graph: the Gauss and Dirichlet
// kernels, hitting-time and local-time laws, the erfc-type boundary kernels
// g_{beta,0}, g_{0,gamma}, g_{beta,gamma}, and the full transition kernels of
// the five process kinds.

namespace starbm {

struct KernelQuery {
    double t;          // > 0
    GraphPoint from;   // not cemetery
    GraphPoint to;     // interior for the density part; vertex selects the atom
    // The defect channel (and, for interior queries of the killed kinds, the
    // atom) needs its own quadrature; callers evaluating the density inside
    // an integration loop switch it off.
    bool with_defect = true;
};

// A time-t sub-probability measure evaluated against a query point:
// per-length density at `to`, point mass at the vertex, and killed mass.
// atom + defect + total density mass = 1 up to integration tolerance.
struct KernelValue {
    double density = 0.0;
    double atom = 0.0;
    double defect = 0.0;
};

struct ErfKernelParams {
    double beta = 0.0;
    double gamma = 0.0;
};

// Scaled complementary error function exp(u^2) erfc(u), overflow-free for
// large positive u.
double erfcx(double u);

// Gauss kernel g(t,x) = (2 pi t)^{-1/2} exp(-x^2 / 2t).
double gauss(double t, double x);

struct FreeImagePair {
    double p;    // free kernel, same-edge |x-y| argument
    double p_v;  // image kernel, via-vertex x+y argument
};

// Free and via-vertex heat kernels; zero across distinct edges.
FreeImagePair free_and_image_kernels(const KernelQuery& q);

// Dirichlet kernel p - p_v (killed at the vertex).
double dirichlet_kernel(const KernelQuery& q);

// P_x(H_v in ds)/ds = x (2 pi s^3)^{-1/2} exp(-x^2/2s).
double hitting_density(double x, double s);

// P_x(H_v <= t) for the first hit of the vertex from distance x.
double hitting_cdf(double x, double t);

// Joint density of (|B_t|, L_t) from the vertex:
// 2 (x+y) (2 pi t^3)^{-1/2} exp(-(x+y)^2 / 2t).
double local_time_joint_density(double t, double x, double y);

// Density of the inverse local time K_r at l (with sticky drift gamma*r):
// (r/(l - gamma r)) g(l - gamma r, r), zero for l <= gamma r.
double inverse_local_time_density(double r, double l, double gamma = 0.0);

// g_{beta,0}(t,x) = g(t,x) - (beta/2) e^{beta x + beta^2 t/2} erfc(x/sqrt(2t) + beta sqrt(t/2))
double g_beta0(double t, double x, double beta);

// g_{0,gamma}(t,x) = (1/gamma) e^{2x/gamma + 2t/gamma^2} erfc(x/sqrt(2t) + sqrt(2t)/gamma);
// dispatches to the Gauss kernel at gamma = 0.
double g_0gamma(double t, double x, double gamma);

// g_{beta,gamma}(t,x), evaluated as a convolution integral with the endpoint
// concentration at s = t removed by the substitution s = t(1 - r^2).
double g_betagamma(double t, double x, double beta, double gamma,
                   double abs_tol = 1e-10);

// Full transition kernel of the process described by `params`. Atom and
// defect channels are populated per kind; the defect for killed kinds is
// 1 - atom - numeric total density mass.
KernelValue transition_kernel(const BoundaryParams& params, const KernelQuery& q);

// First-passage (hit-the-vertex) evaluation of the Walsh and elastic kernels:
// hitting-time density convolved with the inverse-Laplace scattering factor.
// Agrees with transition_kernel within convolution tolerance.
KernelValue kernel_via_first_passage(const BoundaryParams& params,
                                     const KernelQuery& q,
                                     double abs_tol = 1e-10);

}  // namespace starbm
