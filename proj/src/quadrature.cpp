#include "starbm/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

namespace starbm {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (a == b) return 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    // The backend interprets the tolerance relative to the L1 norm and its
    // error estimate has an absolute floor near machine epsilon, so a request
    // below eps / L1 causes runaway refinement that only inflates the
    // estimate. Walk a descending tolerance ladder, stop as soon as the
    // absolute certificate is good enough, and keep the best attempt.
    double val = 0.0, error = std::numeric_limits<double>::infinity();
    for (double rel : {1e-6, 1e-9, 1e-12}) {
        double e = 0.0;
        double v = GK::integrate(f, a, b, 18, rel, &e);
        if (e < error) {
            error = e;
            val = v;
        }
        if (error <= abs_tol) break;
    }
    if (!(std::isfinite(val))) throw QuadratureError("non-finite integral");
    if (error > 100.0 * abs_tol + 1e-14 * std::abs(val))
        throw QuadratureError("quadrature tolerance not met");
    return val;
}

double integrate_half_line(const std::function<double(double)>& f,
                           double abs_tol, double t_cut) {
    double val = integrate(f, 0.0, t_cut, abs_tol);
    // Tail bound assuming |f| decays at least exponentially past t_cut/2.
    double f1 = std::abs(f(0.5 * t_cut));
    double f2 = std::abs(f(t_cut));
    double tail;
    if (f2 <= 1e-320) {
        tail = 0.0;
    } else if (f2 < f1) {
        double rate = std::log(f1 / f2) / (0.5 * t_cut);
        tail = f2 / rate;
    } else {
        tail = std::numeric_limits<double>::infinity();
    }
    if (tail > abs_tol)
        throw QuadratureError("integrand tail exceeds tolerance at truncation");
    return val;
}

}  // namespace starbm
