#ifndef NECKSPEC_CONFIG_HPP
#define NECKSPEC_CONFIG_HPP

#include <string>
#include <vector>

namespace neckspec {

struct ToleranceSet {
    double eig_residual = 1e-7;
    double ode_tol = 1e-10;
    double quad_tol = 1e-8;
};

struct VertexSpec {
    std::string id;
    double side = 0.0;   // flat-torus side length a_v; mass m_v = a_v^2
};

struct EdgeSpec {
    std::string id;
    int tail = -1;       // vertex indices; tail == head for a self-plumbing
    int head = -1;
};

/// Validated description of the degeneration: dual graph, geometry and
/// solver parameters. Immutable after parsing; safe to share across threads.
struct ConfigGraph {
    std::vector<VertexSpec> vertices;
    std::vector<EdgeSpec> edges;
    std::vector<double> s_grid;      // strictly decreasing, in (0, 1)
    double mesh_h = 0.2;
    int eig_count = 0;               // >= N + 2; default N + 3
    ToleranceSet tol;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    double mass(int v) const { return vertices[v].side * vertices[v].side; }
    /// Incidences at v; a self-loop counts twice.
    int degree(int v) const;
    int vertex_index(const std::string& id) const;   // -1 if absent
};

/// Parse and validate a JSON config. Unknown keys are rejected unless
/// lenient. Throws validation_error naming the offending field.
ConfigGraph parse_config(const std::string& text, bool lenient = false);

/// Canonical JSON serialization; parse(serialize(cfg)) == cfg.
std::string serialize_config(const ConfigGraph& cfg);

} // namespace neckspec

#endif
