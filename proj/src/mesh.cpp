#include "neckspec/mesh.hpp"
#include "neckspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

namespace neckspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHoleSide = kPi / 2.0;   // perimeter 2*pi, matching the neck circle

double tri_area(const FiberMesh::Tri& t) {
    const auto& a = t.xy[0];
    const auto& b = t.xy[1];
    const auto& c = t.xy[2];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

// One flat torus component: periodic n x n grid with cavities of K x K
// cells, one per incidence, whose boundary ring is moved onto the exact
// pi/2 hole square. Produces node ids into the global mesh and the hole
// boundary rings in counterclockwise chart order.
struct ComponentPatch {
    int n = 0;                 // grid cells per side
    double g = 0.0;            // grid spacing
    std::vector<int> node_id;  // n*n entries, -1 for cavity-interior nodes
    std::vector<std::vector<int>> hole_rings;   // 4K node ids each, CCW
};

ComponentPatch build_component(FiberMesh& mesh, int comp, double side, int deg, int K) {
    ComponentPatch P;
    P.n = std::max(static_cast<int>(std::lround(side * K / kHoleSide)), 3);
    P.g = side / P.n;
    const int n = P.n;
    P.node_id.assign(static_cast<std::size_t>(n) * n, -1);

    struct Cavity {
        int i0, j0;
        double cx, cy;     // exact hole center
    };
    std::vector<Cavity> cavities;
    const int j0 = static_cast<int>(std::lround((n - K) / 2.0));
    for (int t = 0; t < deg; ++t) {
        Cavity c;
        c.i0 = static_cast<int>(std::lround((t + 0.5) * n / static_cast<double>(deg) - K / 2.0));
        c.j0 = j0;
        c.cx = (c.i0 + K / 2.0) * P.g;
        c.cy = (c.j0 + K / 2.0) * P.g;
        if (c.i0 < 1 || c.i0 + K > n - 1 || c.j0 < 1 || c.j0 + K > n - 1 ||
            (t > 0 && c.i0 <= cavities.back().i0 + K))
            throw mesh_error("component " + std::to_string(comp) +
                             ": holes do not fit (side too small for degree)");
        cavities.push_back(c);
    }

    auto cavity_at = [&](int i, int j) -> int {
        for (std::size_t c = 0; c < cavities.size(); ++c) {
            if (i >= cavities[c].i0 && i <= cavities[c].i0 + K &&
                j >= cavities[c].j0 && j <= cavities[c].j0 + K)
                return static_cast<int>(c);
        }
        return -1;
    };
    auto interior_of_cavity = [&](int i, int j) {
        for (const auto& c : cavities)
            if (i > c.i0 && i < c.i0 + K && j > c.j0 && j < c.j0 + K) return true;
        return false;
    };
    auto on_ring = [&](int i, int j, const Cavity& c) {
        bool inside = i >= c.i0 && i <= c.i0 + K && j >= c.j0 && j <= c.j0 + K;
        bool strict = i > c.i0 && i < c.i0 + K && j > c.j0 && j < c.j0 + K;
        return inside && !strict;
    };

    // Exact position of a ring node; (i, j) relative to the cavity.
    auto ring_position = [&](int i, int j, const Cavity& c) -> std::array<double, 2> {
        const double step = kHoleSide / K;
        const double q = kHoleSide / 2.0;
        double x = c.cx - q + (i - c.i0) * step;
        double y = c.cy - q + (j - c.j0) * step;
        return {x, y};
    };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (interior_of_cavity(i, j)) continue;
            std::array<double, 2> pos = {i * P.g, j * P.g};
            int c = cavity_at(i, j);
            if (c >= 0 && on_ring(i, j, cavities[c])) pos = ring_position(i, j, cavities[c]);
            P.node_id[static_cast<std::size_t>(j) * n + i] = mesh.node_count();
            mesh.nodes.push_back(pos);
            mesh.node_info.push_back({comp, std::nan("")});
        }
    }

    auto id_at = [&](int i, int j) {
        return P.node_id[static_cast<std::size_t>(j % n) * n + (i % n)];
    };
    auto pos_at = [&](int i, int j) -> std::array<double, 2> {
        auto p = mesh.nodes[id_at(i, j)];
        if (i >= n) p[0] += side;
        if (j >= n) p[1] += side;
        return p;
    };

    auto cell_in_cavity = [&](int i, int j) {
        for (const auto& c : cavities)
            if (i >= c.i0 && i < c.i0 + K && j >= c.j0 && j < c.j0 + K) return true;
        return false;
    };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (cell_in_cavity(i, j)) continue;
            int a = id_at(i, j), b = id_at(i + 1, j), c2 = id_at(i + 1, j + 1),
                d = id_at(i, j + 1);
            FiberMesh::Tri t1{{a, b, c2},
                              {pos_at(i, j), pos_at(i + 1, j), pos_at(i + 1, j + 1)},
                              comp, 1.0};
            FiberMesh::Tri t2{{a, c2, d},
                              {pos_at(i, j), pos_at(i + 1, j + 1), pos_at(i, j + 1)},
                              comp, 1.0};
            mesh.triangles.push_back(t1);
            mesh.triangles.push_back(t2);
        }
    }

    // Hole rings, CCW from the lower-left corner.
    for (const auto& c : cavities) {
        std::vector<int> ring;
        ring.reserve(4 * K);
        for (int t = 0; t < K; ++t) ring.push_back(id_at(c.i0 + t, c.j0));
        for (int t = 0; t < K; ++t) ring.push_back(id_at(c.i0 + K, c.j0 + t));
        for (int t = 0; t < K; ++t) ring.push_back(id_at(c.i0 + K - t, c.j0 + K));
        for (int t = 0; t < K; ++t) ring.push_back(id_at(c.i0, c.j0 + K - t));
        P.hole_rings.push_back(std::move(ring));
    }
    return P;
}

// Append one neck strip; row 0 is the u = 0 boundary (tail ring, reversed
// orientation), row n_u the u = log s boundary (head ring, direct order).
void build_neck(FiberMesh& mesh, int neck, double s, double h, int k_theta,
                const std::vector<int>* tail_ring, const std::vector<int>* head_ring) {
    const double L = std::log(1.0 / s);
    const int n_u = std::max(static_cast<int>(std::ceil(L / h)), 1);
    const double du = L / n_u;
    const double dtheta = 2.0 * kPi / k_theta;
    const int region = mesh.region_of_neck(neck);

    auto u_of_row = [&](int r) { return -du * r; };

    // Node ids per (row, column).
    std::vector<std::vector<int>> rows(n_u + 1, std::vector<int>(k_theta, -1));
    const int M = k_theta;
    for (int r = 0; r <= n_u; ++r) {
        for (int c = 0; c < k_theta; ++c) {
            if (r == 0 && tail_ring) {
                rows[r][c] = (*tail_ring)[(M - c) % M];
            } else if (r == n_u && head_ring) {
                rows[r][c] = (*head_ring)[c];
            } else {
                rows[r][c] = mesh.node_count();
                mesh.nodes.push_back({c * dtheta, u_of_row(r)});
                mesh.node_info.push_back({region, u_of_row(r)});
            }
        }
    }

    auto coord = [&](int r, int c) -> std::array<double, 2> {
        return {c * dtheta, u_of_row(r)};   // c may equal k_theta at the wrap
    };

    for (int r = 0; r < n_u; ++r) {
        for (int c = 0; c < k_theta; ++c) {
            int a = rows[r][c], b = rows[r][(c + 1) % k_theta];
            int cc = rows[r + 1][(c + 1) % k_theta], d = rows[r + 1][c];
            FiberMesh::Tri t1{{a, cc, b},
                              {coord(r, c), coord(r + 1, c + 1), coord(r, c + 1)},
                              region,
                              neck_density((2 * u_of_row(r) + u_of_row(r + 1)) / 3.0, s)};
            FiberMesh::Tri t2{{a, d, cc},
                              {coord(r, c), coord(r + 1, c), coord(r + 1, c + 1)},
                              region,
                              neck_density((u_of_row(r) + 2 * u_of_row(r + 1)) / 3.0, s)};
            mesh.triangles.push_back(t1);
            mesh.triangles.push_back(t2);
        }
    }
}

} // namespace

int hole_segments(double h) {
    if (!(h > 0.0))
        throw domain_error("mesh_h must be positive");
    int K = static_cast<int>(std::ceil(kHoleSide / h));
    if (K < 8)
        throw mesh_error("mesh_h = " + std::to_string(h) +
                         " too coarse: fewer than 8 segments per hole side");
    return K;
}

double neck_area_closed_form(double s) {
    if (!(s > 0.0 && s <= 1.0))
        throw domain_error("neck area: s must lie in (0, 1]");
    return 2.0 * kPi * (1.0 - s * s);
}

FiberMesh build_fiber_mesh(const ConfigGraph& cfg, double s, double h) {
    if (!(s > 0.0 && s < 1.0))
        throw domain_error("build_fiber_mesh: s = " + std::to_string(s) +
                           " outside (0, 1)");
    if (!(h > 0.0 && h <= 0.5))
        throw domain_error("build_fiber_mesh: h must lie in (0, 0.5]");
    const int K = hole_segments(h);
    const int k_theta = 4 * K;

    FiberMesh mesh;
    mesh.n_components = cfg.vertex_count();
    mesh.s = s;
    mesh.h = h;
    mesh.closed = true;

    // Per component: hole rings in incidence order (each edge consumes the
    // next free ring of its endpoints; a self-loop consumes two).
    std::vector<ComponentPatch> patches;
    for (int v = 0; v < cfg.vertex_count(); ++v)
        patches.push_back(build_component(mesh, v, cfg.vertices[v].side, cfg.degree(v), K));

    std::vector<int> next_ring(cfg.vertex_count(), 0);
    for (int e = 0; e < cfg.edge_count(); ++e) {
        const auto& edge = cfg.edges[e];
        const std::vector<int>& tail = patches[edge.tail].hole_rings[next_ring[edge.tail]++];
        const std::vector<int>& head = patches[edge.head].hole_rings[next_ring[edge.head]++];
        mesh.necks.push_back({e, edge.tail, edge.head, std::log(1.0 / s)});
        build_neck(mesh, e, s, h, k_theta, &tail, &head);
    }
    validate_mesh(mesh);
    return mesh;
}

FiberMesh build_torus_mesh(double a, double h) {
    if (!(a > 0.0) || !(h > 0.0))
        throw domain_error("build_torus_mesh: a and h must be positive");
    FiberMesh mesh;
    mesh.n_components = 1;
    mesh.s = 0.0;
    mesh.h = h;
    mesh.closed = true;
    const int K = std::max(static_cast<int>(std::ceil(kHoleSide / h)), 2);
    build_component(mesh, 0, a, 0, K);
    validate_mesh(mesh);
    return mesh;
}

FiberMesh build_neck_mesh(double s, double h) {
    if (!(s > 0.0 && s < 1.0))
        throw domain_error("build_neck_mesh: s outside (0, 1)");
    const int K = hole_segments(h);
    FiberMesh mesh;
    mesh.n_components = 0;
    mesh.s = s;
    mesh.h = h;
    mesh.closed = false;
    mesh.necks.push_back({0, -1, -1, std::log(1.0 / s)});
    build_neck(mesh, 0, s, h, 4 * K, nullptr, nullptr);
    validate_mesh(mesh);
    return mesh;
}

double total_area(const FiberMesh& mesh) {
    double acc = 0.0;
    for (const auto& t : mesh.triangles) acc += tri_area(t) * t.weight;
    return acc;
}

int euler_characteristic(const FiberMesh& mesh) {
    std::map<std::pair<int, int>, int> undirected;
    std::set<std::pair<int, int>> directed;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = t.v[k], b = t.v[(k + 1) % 3];
            if (!directed.insert({a, b}).second && mesh.closed)
                throw mesh_error("orientation error: directed edge (" +
                                 std::to_string(a) + "," + std::to_string(b) +
                                 ") appears twice");
            ++undirected[{std::min(a, b), std::max(a, b)}];
        }
    }
    for (const auto& [e, cnt] : undirected) {
        if (cnt > 2 || (mesh.closed && cnt != 2))
            throw mesh_error("non-manifold edge (" + std::to_string(e.first) + "," +
                             std::to_string(e.second) + ") bounds " +
                             std::to_string(cnt) + " triangles");
    }
    return mesh.node_count() - static_cast<int>(undirected.size()) + mesh.tri_count();
}

int expected_euler_characteristic(const ConfigGraph& cfg) {
    int chi = 0;
    for (int v = 0; v < cfg.vertex_count(); ++v) chi -= cfg.degree(v);
    return chi;
}

void validate_mesh(const FiberMesh& mesh) {
    std::vector<int> valence(mesh.nodes.size(), 0);
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& t = mesh.triangles[i];
        if (!(tri_area(t) > 0.0))
            throw mesh_error("triangle " + std::to_string(i) +
                             " has nonpositive chart area");
        if (!(t.weight > 0.0))
            throw mesh_error("triangle " + std::to_string(i) +
                             " has nonpositive conformal weight");
        for (int v : t.v) ++valence[v];
    }
    for (std::size_t v = 0; v < valence.size(); ++v)
        if (valence[v] < 3)
            throw mesh_error("node " + std::to_string(v) + " belongs to fewer than 3 triangles");

    // Connectivity of the mesh graph.
    if (!mesh.nodes.empty()) {
        std::vector<std::vector<int>> adj(mesh.nodes.size());
        for (const auto& t : mesh.triangles) {
            for (int k = 0; k < 3; ++k) {
                adj[t.v[k]].push_back(t.v[(k + 1) % 3]);
                adj[t.v[(k + 1) % 3]].push_back(t.v[k]);
            }
        }
        std::vector<char> seen(mesh.nodes.size(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        std::size_t reached = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    ++reached;
                    q.push(y);
                }
        }
        if (reached != mesh.nodes.size())
            throw mesh_error("mesh graph is disconnected");
    }
    euler_characteristic(mesh);   // manifold / orientation checks
}

void write_off(const FiberMesh& mesh, std::ostream& os) {
    std::map<std::pair<int, int>, int> undirected;
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            int a = t.v[k], b = t.v[(k + 1) % 3];
            ++undirected[{std::min(a, b), std::max(a, b)}];
        }
    os << "OFF\n"
       << mesh.node_count() << " " << mesh.tri_count() << " " << undirected.size() << "\n";
    char buf[128];
    for (const auto& p : mesh.nodes) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", p[0], p[1]);
        os << buf;
    }
    for (const auto& t : mesh.triangles)
        os << "3 " << t.v[0] << " " << t.v[1] << " " << t.v[2] << "\n";
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        std::snprintf(buf, sizeof buf, "# weight %zu %.17g\n", i, mesh.triangles[i].weight);
        os << buf;
    }
}

} // namespace neckspec
