#include "starbm/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace starbm {

double draw_first_hit_time(double x, RandomStream& rs) {
    if (!(x > 0.0)) throw std::domain_error("first hit needs x > 0");
    double z = rs.normal();
    while (z == 0.0) z = rs.normal();
    return (x / z) * (x / z);
}

double draw_conditioned_position(double x, double t, RandomStream& rs) {
    if (!(x > 0.0) || !(t > 0.0))
        throw std::domain_error("conditioned position needs x > 0, t > 0");
    double sqt = std::sqrt(t);
    for (;;) {
        double y = x + rs.normal() * sqt;
        if (y <= 0.0) continue;
        if (rs.uniform() < 1.0 - std::exp(-2.0 * x * y / t)) return y;
    }
}

VertexStepDraw draw_vertex_joint(double t, const std::vector<double>& weights,
                                 RandomStream& rs) {
    if (!(t > 0.0)) throw std::domain_error("vertex joint draw needs t > 0");
    double z1 = rs.normal(), z2 = rs.normal(), z3 = rs.normal();
    double s = std::sqrt(t) * std::sqrt(z1 * z1 + z2 * z2 + z3 * z3);
    double x = rs.uniform() * s;
    VertexStepDraw d;
    d.x = x;
    d.y = s - x;
    d.edge = rs.categorical(weights) + 1;
    return d;
}

double draw_inverse_local_time(double r, double gamma, RandomStream& rs) {
    if (!(r > 0.0) || gamma < 0.0)
        throw std::domain_error("inverse local time needs r > 0, gamma >= 0");
    double z = rs.normal();
    while (z == 0.0) z = rs.normal();
    return (r / z) * (r / z) + gamma * r;
}

std::pair<double, double> draw_lifetime(double beta, double gamma,
                                        RandomStream& rs) {
    if (!(beta > 0.0)) throw std::domain_error("lifetime needs beta > 0");
    double s = rs.exponential(beta);
    return {draw_inverse_local_time(s, gamma, rs), s};
}

double bridge_crossing_prob(double x, double y, double dt) {
    if (x < 0.0 || y < 0.0 || !(dt > 0.0))
        throw std::domain_error("bridge crossing needs x, y >= 0 and dt > 0");
    if (x == 0.0 || y == 0.0) return 1.0;
    return std::exp(-2.0 * x * y / dt);
}

}  // namespace starbm
