#include "starbm/resolvents.hpp"

#include "starbm/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace starbm {

namespace {

void require_lambda(double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
}

}  // namespace

double e_lambda(const GraphPoint& xi, double lambda) {
    require_lambda(lambda);
    if (xi.is_cemetery()) throw std::domain_error("e_lambda undefined at cemetery");
    return std::exp(-std::sqrt(2.0 * lambda) * xi.dist_to_vertex());
}

double rho(double lambda, double beta, double gamma) {
    require_lambda(lambda);
    return 1.0 / (beta + std::sqrt(2.0 * lambda) + gamma * lambda);
}

double dirichlet_resolvent_kernel(const GraphPoint& xi, const GraphPoint& eta,
                                  double lambda) {
    require_lambda(lambda);
    if (!xi.is_interior() || !eta.is_interior()) return 0.0;
    if (xi.edge() != eta.edge()) return 0.0;
    double s = std::sqrt(2.0 * lambda);
    double x = xi.x(), y = eta.x();
    return (std::exp(-s * std::abs(x - y)) - std::exp(-s * (x + y))) / s;
}

ResolventValue resolvent_kernel(const BoundaryParams& params,
                                const ResolventQuery& q) {
    require_lambda(q.lambda);
    if (q.from.is_cemetery()) throw std::domain_error("from must not be cemetery");

    const double lambda = q.lambda;
    const double el_from = e_lambda(q.from, lambda);
    ResolventValue out;

    if (params.kind == ProcessKind::StoppedKilled) {
        if (q.to.is_interior())
            out.density = dirichlet_resolvent_kernel(q.from, q.to, lambda);
        out.atom = el_from / (params.beta + lambda);
        return out;
    }

    double r = rho(lambda, params.beta, params.gamma);
    if (q.to.is_interior()) {
        double wm = params.w[static_cast<std::size_t>(q.to.edge() - 1)];
        out.density = dirichlet_resolvent_kernel(q.from, q.to, lambda) +
                      el_from * 2.0 * wm * r * e_lambda(q.to, lambda);
    }
    out.atom = params.gamma * r * el_from;
    return out;
}

double apply_resolvent(const BoundaryParams& params, double lambda,
                       const GraphFunction& f, const GraphPoint& xi,
                       const EdgeQuadrature& quad) {
    require_lambda(lambda);
    if (f.n() != params.n()) throw std::invalid_argument("edge count mismatch");
    double total = 0.0;
    for (int m = 1; m <= params.n(); ++m) {
        const auto& fm = f.edges[static_cast<std::size_t>(m - 1)];
        auto integrand = [&](double y) {
            if (y <= 0.0) return 0.0;
            ResolventQuery q{lambda, xi, GraphPoint::interior(m, y)};
            return resolvent_kernel(params, q).density * fm(y);
        };
        // r_lambda has a kink at y = x on xi's own edge; integrating the two
        // smooth pieces separately keeps the quadrature at full accuracy.
        double kink = (xi.is_interior() && xi.edge() == m) ? xi.x() : 0.0;
        if (kink > 0.0 && kink < quad.t_cut) {
            total += integrate(integrand, 0.0, kink, quad.abs_tol / 2.0);
            total += integrate_half_line([&](double y) { return integrand(kink + y); },
                                         quad.abs_tol / 2.0, quad.t_cut);
        } else {
            total += integrate_half_line(integrand, quad.abs_tol, quad.t_cut);
        }
    }
    ResolventQuery qv{lambda, xi, GraphPoint::vertex()};
    total += resolvent_kernel(params, qv).atom * f.vertex_value;
    return total;
}

double resolvent_derivative_at_vertex(const BoundaryParams& params, double lambda,
                                      const GraphFunction& f, int k,
                                      const EdgeQuadrature& quad) {
    require_lambda(lambda);
    if (k < 1 || k > params.n()) throw std::out_of_range("edge index");
    const auto& fk = f.edges[static_cast<std::size_t>(k - 1)];
    double s = std::sqrt(2.0 * lambda);
    double inner = integrate_half_line(
        [&](double y) { return std::exp(-s * y) * fk(y); }, quad.abs_tol, quad.t_cut);
    double at_v = apply_resolvent(params, lambda, f, GraphPoint::vertex(), quad);
    return 2.0 * inner - s * at_v;
}

double local_time_alpha_potential(double alpha, const GraphPoint& xi, double gamma) {
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be > 0");
    double s = std::sqrt(2.0 * alpha);
    return std::exp(-s * xi.dist_to_vertex()) / (s + gamma * alpha);
}

}  // namespace starbm
