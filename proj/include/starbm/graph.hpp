#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

// Core geometry and boundary data for a single-vertex (star) metric graph:
// n half-line edges glued at one vertex. Points are addressed as the vertex,
// an interior coordinate (edge, distance), or the cemetery state.

namespace starbm {

struct StarGraph {
    int n;

    explicit StarGraph(int edges);
};

class GraphPoint {
  public:
    enum class Tag { Vertex, Interior, Cemetery };

    static GraphPoint vertex() { return GraphPoint(Tag::Vertex, 0, 0.0); }
    static GraphPoint interior(int edge, double x);
    static GraphPoint cemetery() { return GraphPoint(Tag::Cemetery, 0, 0.0); }

    Tag tag() const { return tag_; }
    bool is_vertex() const { return tag_ == Tag::Vertex; }
    bool is_interior() const { return tag_ == Tag::Interior; }
    bool is_cemetery() const { return tag_ == Tag::Cemetery; }

    // 1-based edge index; only meaningful for interior points.
    int edge() const;
    double x() const;

    // Distance to the vertex; 0 for the vertex itself.
    double dist_to_vertex() const;

    // Text form used by the CLI and CSV files: "v", "k:x", "Δ".
    std::string to_string() const;
    static GraphPoint parse(const std::string& text);

    bool operator==(const GraphPoint& o) const;

  private:
    GraphPoint(Tag t, int edge, double x) : tag_(t), edge_(edge), x_(x) {}
    Tag tag_;
    int edge_;
    double x_;
};

// Natural metric d: same-edge pairs measure |x-y|, otherwise the path runs
// through the vertex. Cemetery has no distance.
double distance(const GraphPoint& p, const GraphPoint& q);

// d_v(p,q) = d(p,v) + d(v,q), the distance via the vertex. Coincides with d
// whenever p and q sit on different edges or one of them is the vertex.
double distance_via_vertex(const GraphPoint& p, const GraphPoint& q);

enum class ProcessKind { Walsh, Elastic, Sticky, General, StoppedKilled };

std::string to_string(ProcessKind kind);

// Feller boundary data (a, c, b_1..b_n) with a + c + sum b = 1, together with
// the derived simulator parametrization (w, beta, gamma):
//   w_k = b_k/(1-a-c),  beta = a/(1-a-c),  gamma = c/(1-a-c)
// For b = 0 the process is stopped at the vertex and killed at rate
// beta = a/c there.
struct BoundaryParams {
    double a = 0.0;
    double c = 0.0;
    std::vector<double> b;

    std::vector<double> w;
    double beta = 0.0;
    double gamma = 0.0;
    ProcessKind kind = ProcessKind::Walsh;

    int n() const { return static_cast<int>(b.size()); }
};

// Validates (1e-12 normalization tolerance), renormalizes exactly, and
// classifies the process kind.
BoundaryParams derive_params(double a, double c, std::vector<double> b);

// Builds params from the simulator parametrization; inverse of derive_params:
//   a = beta/(1+beta+gamma), c = gamma/(1+beta+gamma), b_k = w_k/(1+beta+gamma)
BoundaryParams params_from_simulator(std::vector<double> w, double beta, double gamma);

// A real-valued function on the closed star graph: one function per edge on
// [0, inf) plus an explicit (possibly distinct) value at the vertex, so that
// bounded discontinuous test functions are representable.
struct GraphFunction {
    std::vector<std::function<double(double)>> edges;
    double vertex_value = 0.0;
    bool continuous_at_vertex = false;

    int n() const { return static_cast<int>(edges.size()); }
    double operator()(const GraphPoint& p) const;
};

// Checks edge limits at 0 against the vertex value (1e-10) when the function
// claims continuity.
bool check_vertex_continuity(const GraphFunction& f, double tol = 1e-10);

struct EdgeQuadrature {
    std::string scheme = "gauss-kronrod-adaptive";
    double t_cut = 80.0;  // truncation length per edge
    double abs_tol = 1e-10;
};

// (f, g) = sum_k int_0^inf f_k g_k dx. Throws if the tail beyond t_cut cannot
// be bounded below the tolerance.
double inner_product(const GraphFunction& f, const GraphFunction& g,
                     const EdgeQuadrature& quad);

}  // namespace starbm
