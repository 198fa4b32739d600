#include "neckspec/assembly.hpp"
#include "neckspec/errors.hpp"

#include <cmath>
#include <string>

namespace neckspec {

std::pair<SparseSym, SparseSym> assemble(const FiberMesh& mesh) {
    const int n = mesh.node_count();
    std::vector<int> ri, ci;
    std::vector<double> kv;
    ri.reserve(mesh.triangles.size() * 9);
    ci.reserve(mesh.triangles.size() * 9);
    kv.reserve(mesh.triangles.size() * 9);
    std::vector<double> mass_diag(static_cast<std::size_t>(n), 0.0);

    // Triangles processed in index order; the CSR builder sums duplicates
    // in a fixed order, so the assembly is bit-reproducible.
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto& p0 = tri.xy[0];
        const auto& p1 = tri.xy[1];
        const auto& p2 = tri.xy[2];
        const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                           (p2[0] - p0[0]) * (p1[1] - p0[1]);
        const double area = 0.5 * det;
        if (area < 1e-14)
            throw domain_error("assemble: degenerate triangle " + std::to_string(t) +
                               " (area " + std::to_string(area) + ")");

        // Gradients of the barycentric hats: grad_i = rot90(e_i) / det,
        // where e_i is the opposite edge vector.
        const double gx[3] = {(p1[1] - p2[1]) / det, (p2[1] - p0[1]) / det,
                              (p0[1] - p1[1]) / det};
        const double gy[3] = {(p2[0] - p1[0]) / det, (p0[0] - p2[0]) / det,
                              (p1[0] - p0[0]) / det};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                ri.push_back(tri.v[i]);
                ci.push_back(tri.v[j]);
                kv.push_back(area * (gx[i] * gx[j] + gy[i] * gy[j]));
            }
            mass_diag[tri.v[i]] += area * tri.weight / 3.0;
        }
    }

    SparseSym K = SparseSym::from_triplets(n, SparseSym::Kind::stiffness,
                                           std::move(ri), std::move(ci), std::move(kv));

    // M is stored on the sparsity pattern of K with zero off-diagonals.
    std::vector<int> mr, mc;
    std::vector<double> mv;
    mr.reserve(K.nnz());
    mc.reserve(K.nnz());
    mv.reserve(K.nnz());
    for (int i = 0; i < n; ++i) {
        for (int p = K.row_ptr()[i]; p < K.row_ptr()[i + 1]; ++p) {
            mr.push_back(i);
            mc.push_back(K.col_idx()[p]);
            mv.push_back(K.col_idx()[p] == i ? mass_diag[i] : 0.0);
        }
    }
    SparseSym M = SparseSym::from_triplets(n, SparseSym::Kind::mass, std::move(mr),
                                           std::move(mc), std::move(mv));
    return {std::move(K), std::move(M)};
}

} // namespace neckspec
