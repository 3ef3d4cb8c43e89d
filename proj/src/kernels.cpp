#include "starbm/kernels.hpp"

#include "starbm/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace starbm {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

void require_time(double t) {
    if (!(t > 0.0)) throw std::domain_error("time must be > 0");
}

// Total density mass of the Dirichlet kernel from distance x: P_x(H_v > t).
double dirichlet_mass(double x, double t) {
    return 1.0 - hitting_cdf(x, t);
}

}  // namespace

double erfcx(double u) {
    if (u < 0.0) {
        // erfcx(u) = 2 exp(u^2) - erfcx(-u); overflows for u << 0, which is
        // outside every call site in this library.
        return 2.0 * std::exp(u * u) - erfcx(-u);
    }
    if (u <= 25.0) return std::exp(u * u) * std::erfc(u);
    // Asymptotic series, machine precision for u > 25.
    double inv2 = 1.0 / (2.0 * u * u);
    double series = 1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * 105.0)));
    return series / (u * std::sqrt(kPi));
}

double gauss(double t, double x) {
    require_time(t);
    return std::exp(-x * x / (2.0 * t)) / (kSqrt2Pi * std::sqrt(t));
}

FreeImagePair free_and_image_kernels(const KernelQuery& q) {
    require_time(q.t);
    if (!q.from.is_interior() || !q.to.is_interior())
        throw std::domain_error("free/image kernels need interior endpoints");
    if (q.from.edge() != q.to.edge()) return {0.0, 0.0};
    return {gauss(q.t, q.from.x() - q.to.x()),
            gauss(q.t, q.from.x() + q.to.x())};
}

double dirichlet_kernel(const KernelQuery& q) {
    auto [p, pv] = free_and_image_kernels(q);
    return p - pv;
}

double hitting_density(double x, double s) {
    if (!(x > 0.0) || !(s > 0.0))
        throw std::domain_error("hitting density needs x > 0, s > 0");
    return x / (kSqrt2Pi * std::pow(s, 1.5)) * std::exp(-x * x / (2.0 * s));
}

double hitting_cdf(double x, double t) {
    if (x == 0.0) return 1.0;
    return std::erfc(x / std::sqrt(2.0 * t));
}

double local_time_joint_density(double t, double x, double y) {
    require_time(t);
    if (x < 0.0 || y < 0.0) return 0.0;
    double s = x + y;
    return 2.0 * s / (kSqrt2Pi * std::pow(t, 1.5)) * std::exp(-s * s / (2.0 * t));
}

double inverse_local_time_density(double r, double l, double gamma) {
    if (!(r > 0.0)) throw std::domain_error("inverse local time needs r > 0");
    double u = l - gamma * r;
    if (u <= 0.0) return 0.0;  // support constraint
    return r / u * gauss(u, r);
}

double g_beta0(double t, double x, double beta) {
    require_time(t);
    if (beta == 0.0) return gauss(t, x);
    double u = x / std::sqrt(2.0 * t) + beta * std::sqrt(t / 2.0);
    // e^{beta x + beta^2 t/2} erfc(u) = e^{-x^2/2t} erfcx(u)
    return gauss(t, x) - 0.5 * beta * std::exp(-x * x / (2.0 * t)) * erfcx(u);
}

double g_0gamma(double t, double x, double gamma) {
    require_time(t);
    if (gamma == 0.0) return gauss(t, x);
    double u = x / std::sqrt(2.0 * t) + std::sqrt(2.0 * t) / gamma;
    return std::exp(-x * x / (2.0 * t)) * erfcx(u) / gamma;
}

double g_betagamma(double t, double x, double beta, double gamma, double abs_tol) {
    require_time(t);
    if (x < 0.0) throw std::domain_error("x must be >= 0");
    if (gamma == 0.0) return g_beta0(t, x, beta);
    if (beta == 0.0) return g_0gamma(t, x, gamma);

    // s = t(1 - r^2) removes the (t-s)^{-3/2} concentration at s = t.
    double pref = 2.0 / (gamma * gamma * kSqrt2Pi * std::sqrt(t));
    auto integrand = [&](double r) {
        if (r < 1e-300) return 0.0;
        double s = t * (1.0 - r * r);
        double a = s + gamma * x;
        double arg = -a * a / (2.0 * gamma * gamma * t * r * r) - beta * s / gamma;
        return a / (r * r) * std::exp(arg);
    };
    return pref * integrate(integrand, 0.0, 1.0, abs_tol / pref);
}

namespace {

// int_0^t hitting_density(x, s) G(t - s) ds with endpoint substitutions
// s = z^2 near 0 and t - s = z^2 near t.
double convolve_hitting(double x, double t,
                        const std::function<double(double)>& G,
                        double abs_tol) {
    double half = 0.5 * t;
    auto left = [&](double z) {
        double s = z * z;
        if (s <= 0.0) return 0.0;
        return 2.0 * z * hitting_density(x, s) * G(t - s);
    };
    auto right = [&](double z) {
        double u = z * z;  // u = t - s
        if (u <= 0.0 || u >= t) return 0.0;
        return 2.0 * z * hitting_density(x, t - u) * G(u);
    };
    return integrate(left, 0.0, std::sqrt(half), abs_tol / 2.0) +
           integrate(right, 0.0, std::sqrt(half), abs_tol / 2.0);
}

// (s^e_{km} * g(., y))(u) for the elastic scattering measure: the Dirac part
// plus an absolutely continuous part with a 1/sqrt(r) factor (handled by
// r = z^2).
double elastic_smatrix_convolution(double u, double y, double wm, double delta,
                                   double beta, double abs_tol) {
    double dirac = (2.0 * wm - delta) * gauss(u, y);
    auto f = [&](double z) {
        double r = z * z;
        if (r >= u) return 0.0;
        double phi = -2.0 * wm * beta * 2.0 / kSqrt2Pi +
                     wm * beta * beta * erfcx(beta * z / std::sqrt(2.0)) * 2.0 * z;
        return phi * gauss(u - r, y);
    };
    return dirac + integrate(f, 0.0, std::sqrt(u), abs_tol);
}

// g-kernel mass int_0^inf g(t, x + y) dy for the given boundary kernel.
double boundary_kernel_mass(const BoundaryParams& params, double t, double x) {
    auto g_along = [&](double y) {
        switch (params.kind) {
            case ProcessKind::Elastic: return g_beta0(t, x + y, params.beta);
            case ProcessKind::General:
                return g_betagamma(t, x + y, params.beta, params.gamma, 1e-11);
            default: throw std::logic_error("mass only needed for killed kinds");
        }
    };
    double t_cut = x + 12.0 * std::sqrt(t) + 8.0;
    return integrate_half_line(g_along, 1e-9, t_cut);
}

}  // namespace

KernelValue transition_kernel(const BoundaryParams& params, const KernelQuery& q) {
    require_time(q.t);
    if (q.from.is_cemetery()) throw std::domain_error("from must not be cemetery");
    if (q.to.is_cemetery()) throw std::domain_error("to must not be cemetery");

    const double t = q.t;
    const double x = q.from.dist_to_vertex();
    const bool to_interior = q.to.is_interior();
    const double dv = to_interior ? distance_via_vertex(q.from, q.to) : 0.0;
    const int m = to_interior ? q.to.edge() : 0;
    const double wm =
        to_interior && m <= params.n() ? params.w[static_cast<std::size_t>(m - 1)] : 0.0;

    double dirichlet = 0.0;
    if (to_interior && q.from.is_interior() && q.from.edge() == q.to.edge())
        dirichlet = gauss(t, q.from.x() - q.to.x()) - gauss(t, dv);

    KernelValue out;
    switch (params.kind) {
        case ProcessKind::Walsh:
            if (to_interior) out.density = dirichlet + 2.0 * wm * gauss(t, dv);
            break;
        case ProcessKind::Elastic: {
            if (to_interior)
                out.density = dirichlet + 2.0 * wm * g_beta0(t, dv, params.beta);
            if (q.with_defect) {
                double mass = (q.from.is_interior() ? dirichlet_mass(x, t) : 0.0) +
                              2.0 * boundary_kernel_mass(params, t, x);
                out.defect = 1.0 - mass;
            }
            break;
        }
        case ProcessKind::Sticky:
            if (to_interior)
                out.density = dirichlet + 2.0 * wm * g_0gamma(t, dv, params.gamma);
            out.atom = params.gamma * g_0gamma(t, x, params.gamma);
            break;
        case ProcessKind::General: {
            if (to_interior)
                out.density =
                    dirichlet + 2.0 * wm * g_betagamma(t, dv, params.beta, params.gamma);
            // The atom needs its own quadrature; skip it for pure density
            // queries inside integration loops.
            if (!to_interior || q.with_defect)
                out.atom = params.gamma * g_betagamma(t, x, params.beta, params.gamma);
            if (q.with_defect) {
                double mass = (q.from.is_interior() ? dirichlet_mass(x, t) : 0.0) +
                              2.0 * boundary_kernel_mass(params, t, x);
                out.defect = 1.0 - out.atom - mass;
            }
            break;
        }
        case ProcessKind::StoppedKilled: {
            out.density = to_interior ? dirichlet : 0.0;
            double beta = params.beta;
            if (q.from.is_vertex()) {
                out.atom = std::exp(-beta * t);
                out.defect = 1.0 - out.atom;
            } else if (!to_interior || q.with_defect) {
                // Positive vertex atom: mass stopped at v and not yet killed.
                // Needs a quadrature, so pure density queries skip it.
                auto f = [&](double z) {
                    double s = z * z;
                    if (s <= 0.0) return 0.0;
                    return 2.0 * z * std::exp(-beta * (t - s)) * hitting_density(x, s);
                };
                out.atom = integrate(f, 0.0, std::sqrt(t), 1e-11);
                out.defect = 1.0 - out.atom - dirichlet_mass(x, t);
            }
            break;
        }
    }
    return out;
}

KernelValue kernel_via_first_passage(const BoundaryParams& params,
                                     const KernelQuery& q, double abs_tol) {
    require_time(q.t);
    if (params.kind != ProcessKind::Walsh && params.kind != ProcessKind::Elastic)
        throw std::invalid_argument("first-passage form covers Walsh and elastic kinds");
    if (!q.from.is_interior() || !q.to.is_interior())
        throw std::domain_error("first-passage form needs interior endpoints");

    const double t = q.t;
    const double x = q.from.x();
    const double y = q.to.x();
    const int k = q.from.edge();
    const int m = q.to.edge();
    const double delta = (k == m) ? 1.0 : 0.0;
    const double wm = params.w[static_cast<std::size_t>(m - 1)];

    double free_part = (k == m) ? gauss(t, x - y) : 0.0;

    std::function<double(double)> post_hit;
    if (params.kind == ProcessKind::Walsh) {
        double s_km = 2.0 * wm - delta;
        post_hit = [=](double u) { return s_km * gauss(u, y); };
    } else {
        double beta = params.beta;
        post_hit = [=](double u) {
            return elastic_smatrix_convolution(u, y, wm, delta, beta, abs_tol);
        };
    }

    KernelValue out;
    out.density = free_part + convolve_hitting(x, t, post_hit, abs_tol);
    if (params.kind == ProcessKind::Elastic) {
        KernelValue closed = transition_kernel(params, q);
        out.defect = closed.defect;
    }
    return out;
}

}  // namespace starbm
