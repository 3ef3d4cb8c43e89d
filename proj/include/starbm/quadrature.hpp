#pragma once

#include <functional>
#include <stdexcept>

namespace starbm {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod integration over a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

// Integral over [0, inf) for integrands with (at least) exponential decay.
// Integrates [0, t_cut] adaptively and bounds the tail from the observed
// decay rate between t_cut/2 and t_cut; throws QuadratureError when the tail
// bound exceeds the tolerance.
double integrate_half_line(const std::function<double(double)>& f,
                           double abs_tol = 1e-10, double t_cut = 80.0);

}  // namespace starbm
