#ifndef NECKSPEC_MESH_HPP
#define NECKSPEC_MESH_HPP

#include "neckspec/config.hpp"

#include <array>
#include <cmath>
#include <iosfwd>
#include <vector>

namespace neckspec {

/// Conformal density of the induced metric on the neck {xy = s} in the
/// log coordinate u = log|x|, u in [log s, 0].
inline double neck_density(double u, double s) {
    double e2u = std::exp(2.0 * u);
    return e2u + s * s / e2u;
}

/// Closed-form area of one neck, integral of neck_density over
/// [log s, 0] x [0, 2pi). Defined for s in (0, 1]; zero at s = 1.
double neck_area_closed_form(double s);

/// Triangulated model of the fiber X_s. Components are flat square tori
/// with square holes of side pi/2; necks are rectangles in (theta, u)
/// chart coordinates carrying the induced-metric density. Identifications
/// are already applied: node indices are canonical.
struct FiberMesh {
    struct Tri {
        std::array<int, 3> v;                         // node indices, CCW in chart
        std::array<std::array<double, 2>, 3> xy;      // unwrapped chart coordinates
        int region;                                   // component or neck id (see below)
        double weight;                                // conformal density at centroid
    };
    struct NodeInfo {
        int region;          // < n_components: component id; else n_components + neck id
        double u;            // log coordinate, valid on neck-interior nodes
    };
    struct NeckInfo {
        int edge;            // index into cfg.edges
        int tail_comp;       // component glued at the u = 0 end
        int head_comp;       // component glued at the u = log s end
        double length;       // log(1/s)
    };

    std::vector<std::array<double, 2>> nodes;         // canonical chart coordinates
    std::vector<NodeInfo> node_info;
    std::vector<Tri> triangles;
    std::vector<NeckInfo> necks;
    int n_components = 0;
    double s = 0.0;
    double h = 0.0;
    bool closed = true;      // false for the diagnostic torus / lone-neck meshes

    int node_count() const { return static_cast<int>(nodes.size()); }
    int tri_count() const { return static_cast<int>(triangles.size()); }
    int region_of_neck(int neck) const { return n_components + neck; }
};

/// Segments per hole side for a mesh target size h; the neck angular
/// resolution is 4x this. Throws mesh_error when below 8.
int hole_segments(double h);

/// Build the glued closed fiber mesh for the configuration at parameter s.
FiberMesh build_fiber_mesh(const ConfigGraph& cfg, double s, double h);

/// Diagnostic: one flat torus of side a, no holes.
FiberMesh build_torus_mesh(double a, double h);

/// Diagnostic: a lone neck (open cylinder) at parameter s.
FiberMesh build_neck_mesh(double s, double h);

/// Sum of area * density over all triangles.
double total_area(const FiberMesh& mesh);

/// V - E + F of the glued complex; throws mesh_error on a non-manifold
/// edge (and, for closed meshes, on inconsistent orientation).
int euler_characteristic(const FiberMesh& mesh);

/// Expected Euler characteristic from the configuration: -sum_v deg(v).
int expected_euler_characteristic(const ConfigGraph& cfg);

/// Full structural validation: positive chart areas, positive weights,
/// manifold edges, node valence >= 3, connectivity.
void validate_mesh(const FiberMesh& mesh);

/// OFF-format dump (nodes as z=0 points in chart coordinates); the
/// per-triangle weight is appended as comment lines.
void write_off(const FiberMesh& mesh, std::ostream& os);

} // namespace neckspec

#endif
