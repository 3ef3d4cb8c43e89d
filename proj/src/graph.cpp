#include "starbm/graph.hpp"

#include "starbm/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace starbm {

StarGraph::StarGraph(int edges) : n(edges) {
    if (edges < 1) throw std::invalid_argument("star graph needs n >= 1 edges");
}

GraphPoint GraphPoint::interior(int edge, double x) {
    if (edge < 1) throw std::invalid_argument("edge indices are 1-based");
    if (!(x > 0.0)) throw std::invalid_argument("interior points require x > 0");
    return GraphPoint(Tag::Interior, edge, x);
}

int GraphPoint::edge() const {
    if (tag_ != Tag::Interior) throw std::domain_error("point has no edge");
    return edge_;
}

double GraphPoint::x() const {
    if (tag_ != Tag::Interior) throw std::domain_error("point has no coordinate");
    return x_;
}

double GraphPoint::dist_to_vertex() const {
    switch (tag_) {
        case Tag::Vertex: return 0.0;
        case Tag::Interior: return x_;
        default: throw std::domain_error("cemetery has no distance");
    }
}

std::string GraphPoint::to_string() const {
    switch (tag_) {
        case Tag::Vertex: return "v";
        case Tag::Cemetery: return "Δ";
        default: {
            std::ostringstream os;
            os.precision(17);
            os << edge_ << ':' << x_;
            return os.str();
        }
    }
}

GraphPoint GraphPoint::parse(const std::string& text) {
    if (text == "v") return vertex();
    if (text == "Δ" || text == "D" || text == "delta") return cemetery();
    auto pos = text.find(':');
    if (pos == std::string::npos)
        throw std::invalid_argument("bad graph point '" + text + "'");
    int edge = std::stoi(text.substr(0, pos));
    double x = std::stod(text.substr(pos + 1));
    return interior(edge, x);
}

bool GraphPoint::operator==(const GraphPoint& o) const {
    if (tag_ != o.tag_) return false;
    if (tag_ != Tag::Interior) return true;
    return edge_ == o.edge_ && x_ == o.x_;
}

double distance(const GraphPoint& p, const GraphPoint& q) {
    if (p.is_cemetery() || q.is_cemetery())
        throw std::domain_error("distance undefined for cemetery");
    if (p.is_vertex()) return q.dist_to_vertex();
    if (q.is_vertex()) return p.dist_to_vertex();
    if (p.edge() == q.edge()) return std::abs(p.x() - q.x());
    return p.x() + q.x();
}

double distance_via_vertex(const GraphPoint& p, const GraphPoint& q) {
    return p.dist_to_vertex() + q.dist_to_vertex();
}

std::string to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::Walsh: return "walsh";
        case ProcessKind::Elastic: return "elastic";
        case ProcessKind::Sticky: return "sticky";
        case ProcessKind::General: return "general";
        case ProcessKind::StoppedKilled: return "stopped-killed";
    }
    return "?";
}

BoundaryParams derive_params(double a, double c, std::vector<double> b) {
    if (a < 0.0 || c < 0.0) throw std::invalid_argument("a, c must be >= 0");
    for (double bk : b)
        if (bk < 0.0) throw std::invalid_argument("b_k must be >= 0");
    if (b.empty()) throw std::invalid_argument("need at least one edge weight");

    double total = a + c + std::accumulate(b.begin(), b.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("a + c + sum(b) must equal 1");
    // Renormalize exactly so downstream identities hold to machine precision.
    a /= total;
    c /= total;
    for (double& bk : b) bk /= total;
    if (a == 1.0) throw std::invalid_argument("a = 1 is excluded");

    BoundaryParams p;
    p.a = a;
    p.c = c;
    p.b = b;

    double bsum = std::accumulate(b.begin(), b.end(), 0.0);
    if (bsum == 0.0) {
        if (c == 0.0)
            throw std::invalid_argument("b = 0 requires c > 0");
        p.kind = ProcessKind::StoppedKilled;
        p.beta = a / c;
        p.gamma = 0.0;
        p.w.assign(b.size(), 0.0);
        return p;
    }

    double denom = 1.0 - a - c;  // = bsum up to rounding
    p.w.resize(b.size());
    double wsum = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        p.w[k] = b[k] / denom;
        wsum += p.w[k];
    }
    for (double& wk : p.w) wk /= wsum;
    p.beta = a / denom;
    p.gamma = c / denom;

    if (p.beta == 0.0 && p.gamma == 0.0) p.kind = ProcessKind::Walsh;
    else if (p.gamma == 0.0) p.kind = ProcessKind::Elastic;
    else if (p.beta == 0.0) p.kind = ProcessKind::Sticky;
    else p.kind = ProcessKind::General;
    return p;
}

BoundaryParams params_from_simulator(std::vector<double> w, double beta, double gamma) {
    if (beta < 0.0 || gamma < 0.0)
        throw std::invalid_argument("beta, gamma must be >= 0");
    double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    if (w.empty() || std::abs(wsum - 1.0) > 1e-12)
        throw std::invalid_argument("weights must sum to 1");
    double denom = 1.0 + beta + gamma;
    std::vector<double> b(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) b[k] = w[k] / (wsum * denom);
    return derive_params(beta / denom, gamma / denom, std::move(b));
}

double GraphFunction::operator()(const GraphPoint& p) const {
    if (p.is_cemetery()) return 0.0;
    if (p.is_vertex()) return vertex_value;
    int k = p.edge();
    if (k > n()) throw std::out_of_range("edge index beyond function support");
    return edges[static_cast<std::size_t>(k - 1)](p.x());
}

bool check_vertex_continuity(const GraphFunction& f, double tol) {
    if (!f.continuous_at_vertex) return true;
    for (const auto& fk : f.edges)
        if (std::abs(fk(0.0) - f.vertex_value) > tol) return false;
    return true;
}

double inner_product(const GraphFunction& f, const GraphFunction& g,
                     const EdgeQuadrature& quad) {
    if (f.n() != g.n()) throw std::invalid_argument("edge count mismatch");
    double total = 0.0;
    for (int k = 0; k < f.n(); ++k) {
        const auto& fk = f.edges[static_cast<std::size_t>(k)];
        const auto& gk = g.edges[static_cast<std::size_t>(k)];
        total += integrate_half_line([&](double x) { return fk(x) * gk(x); },
                                     quad.abs_tol, quad.t_cut);
    }
    return total;
}

}  // namespace starbm
