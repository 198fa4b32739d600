#include "neckspec/potential.hpp"
#include "neckspec/assembly.hpp"
#include "neckspec/eigsolve.hpp"
#include "neckspec/errors.hpp"
#include "neckspec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace neckspec {

namespace {

// Preconditioned CG for K u = b on the subspace orthogonal to constants
// (K is singular with constant kernel; b must have zero counting sum).
std::vector<double> cg_singular(const SparseSym& K, const std::vector<double>& b,
                                double rel_tol) {
    const int n = K.size();
    std::vector<double> diag = K.diagonal();
    for (double& d : diag)
        if (!(d > 0.0)) d = 1.0;

    auto project = [&](std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= n;
        for (double& x : v) x -= mean;
    };

    std::vector<double> rhs = b;
    project(rhs);
    double bnorm = 0.0;
    for (double x : rhs) bnorm += x * x;
    bnorm = std::sqrt(bnorm);
    std::vector<double> u(static_cast<std::size_t>(n), 0.0);
    if (bnorm == 0.0) return u;

    std::vector<double> r = rhs, z(static_cast<std::size_t>(n)), p, Ap(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    project(z);
    p = z;
    double rz = 0.0;
    for (int i = 0; i < n; ++i) rz += r[i] * z[i];

    const int max_iter = 200 * static_cast<int>(std::sqrt(static_cast<double>(n))) + 2000;
    for (int it = 0; it < max_iter; ++it) {
        K.matvec(p.data(), Ap.data());
        project(Ap);
        double pAp = 0.0;
        for (int i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        if (!(pAp > 0.0))
            throw convergence_error("cg: breakdown (nonpositive curvature)");
        const double alpha = rz / pAp;
        double rnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            u[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
            rnorm += r[i] * r[i];
        }
        if (std::sqrt(rnorm) <= rel_tol * bnorm) {
            project(u);
            return u;
        }
        for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
        project(z);
        double rz_new = 0.0;
        for (int i = 0; i < n; ++i) rz_new += r[i] * z[i];
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw convergence_error("cg: no convergence to relative residual " +
                            std::to_string(rel_tol));
}

void mass_mean_zero(std::vector<double>& u, const std::vector<double>& mdiag,
                    double total_mass) {
    double mean = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) mean += mdiag[i] * u[i];
    mean /= total_mass;
    for (double& x : u) x -= mean;
}

} // namespace

std::vector<double> solve_poisson(const SparseSym& K, const SparseSym& M,
                                  const std::vector<double>& g) {
    const int n = K.size();
    if (static_cast<int>(g.size()) != n)
        throw domain_error("solve_poisson: size mismatch");
    const std::vector<double> mdiag = M.diagonal();
    double total_mass = 0.0, mean = 0.0, gmax = 0.0;
    for (int i = 0; i < n; ++i) {
        total_mass += mdiag[i];
        mean += mdiag[i] * g[i];
        gmax = std::max(gmax, std::abs(g[i]));
    }
    if (std::abs(mean) > 1e-10 * std::max(total_mass * gmax, 1e-300))
        throw domain_error("solve_poisson: g violates the zero-mean compatibility "
                           "condition (mass-weighted mean " + std::to_string(mean) + ")");

    std::vector<double> u = cg_singular(K, M.matvec(g), 1e-9);
    mass_mean_zero(u, mdiag, total_mass);
    return u;
}

GreenColumn green_column(const SparseSym& K, const SparseSym& M, int x) {
    const int n = K.size();
    if (x < 0 || x >= n)
        throw domain_error("green_column: node out of range");
    const std::vector<double> mdiag = M.diagonal();
    double total_mass = 0.0;
    for (double v : mdiag) total_mass += v;

    std::vector<double> rhs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rhs[i] = -mdiag[i] / total_mass;
    rhs[x] += 1.0;

    GreenColumn col;
    col.base_node = x;
    col.values = cg_singular(K, rhs, 1e-9);
    mass_mean_zero(col.values, mdiag, total_mass);
    return col;
}

LogGrowthReport log_growth_report(const ConfigGraph& cfg) {
    if (cfg.s_grid.size() < 3)
        throw domain_error("log_growth_report: need at least 3 s-grid points");

    LogGrowthReport rep;
    const int N = cfg.vertex_count();

    for (double s : cfg.s_grid) {
        FiberMesh mesh = build_fiber_mesh(cfg, s, cfg.mesh_h);
        auto [K, M] = assemble(mesh);
        const int n = K.size();
        const std::vector<double> mdiag = M.diagonal();
        double total_mass = 0.0;
        for (double v : mdiag) total_mass += v;

        // Sampled base nodes: one per component (near chart (a/4, a/4)),
        // one per neck (nearest to the waist), capped at 8.
        std::vector<int> bases;
        for (int c = 0; c < N && static_cast<int>(bases.size()) < 8; ++c) {
            const double a = cfg.vertices[c].side;
            int best = -1;
            double best_d = 1e300;
            for (int i = 0; i < n; ++i) {
                if (mesh.node_info[i].region != c) continue;
                const double dx = mesh.nodes[i][0] - a / 4.0;
                const double dy = mesh.nodes[i][1] - a / 4.0;
                const double d = dx * dx + dy * dy;
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            if (best >= 0) bases.push_back(best);
        }
        for (std::size_t e = 0; e < mesh.necks.size() && bases.size() < 8; ++e) {
            const int region = mesh.region_of_neck(static_cast<int>(e));
            const double mid = -0.5 * mesh.necks[e].length;
            int best = -1;
            double best_d = 1e300;
            for (int i = 0; i < n; ++i) {
                if (mesh.node_info[i].region != region) continue;
                const double d = std::abs(mesh.node_info[i].u - mid) +
                                 mesh.nodes[i][0];   // prefer theta near 0
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            if (best >= 0) bases.push_back(best);
        }

        double min_g = 1e300;
        for (int x : bases) {
            GreenColumn col = green_column(K, M, x);
            for (double v : col.values) min_g = std::min(min_g, v);
        }

        // Fixed component-supported bump with global zero mean.
        std::vector<double> g(static_cast<std::size_t>(n), 0.0);
        if (N >= 2) {
            double m0 = 0.0, m1 = 0.0;
            for (int i = 0; i < n; ++i) {
                if (mesh.node_info[i].region == 0) m0 += mdiag[i];
                if (mesh.node_info[i].region == 1) m1 += mdiag[i];
            }
            for (int i = 0; i < n; ++i) {
                if (mesh.node_info[i].region == 0) g[i] = 1.0;
                if (mesh.node_info[i].region == 1) g[i] = -m0 / m1;
            }
        } else {
            const double a = cfg.vertices[0].side;
            for (int i = 0; i < n; ++i)
                if (mesh.node_info[i].region == 0)
                    g[i] = (mesh.nodes[i][0] < a / 2.0) ? 1.0 : -1.0;
            double mean = 0.0;
            for (int i = 0; i < n; ++i) mean += mdiag[i] * g[i];
            for (int i = 0; i < n; ++i) g[i] -= mean / total_mass;
        }
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        std::vector<double> u = solve_poisson(K, M, g);
        double umax = 0.0;
        for (double v : u) umax = std::max(umax, std::abs(v));

        // Componentwise-zero-mean bump for the refined diagnostic.
        std::vector<double> g2(static_cast<std::size_t>(n), 0.0);
        {
            const double a = cfg.vertices[0].side;
            double m_plus = 0.0, m_minus = 0.0;
            for (int i = 0; i < n; ++i) {
                if (mesh.node_info[i].region != 0) continue;
                if (mesh.nodes[i][0] < a / 2.0)
                    m_plus += mdiag[i];
                else
                    m_minus += mdiag[i];
            }
            for (int i = 0; i < n; ++i) {
                if (mesh.node_info[i].region != 0) continue;
                g2[i] = (mesh.nodes[i][0] < a / 2.0) ? 1.0 : -m_plus / m_minus;
            }
        }
        std::vector<double> u2 = solve_poisson(K, M, g2);
        double u2max = 0.0;
        for (double v : u2) u2max = std::max(u2max, std::abs(v));

        // Small-eigenfunction sup norms.
        Spectrum spec = lobpcg_smallest(K, M, std::min(cfg.eig_count, n), cfg.tol.eig_residual,
                                        /*seed=*/12345);
        double sup = 0.0;
        const double area = total_mass;
        for (int kk = 1; kk <= N - 1 && kk < static_cast<int>(spec.eigenvectors.size()); ++kk) {
            double phimax = 0.0;
            for (double v : spec.eigenvectors[kk]) phimax = std::max(phimax, std::abs(v));
            sup = std::max(sup, phimax * std::sqrt(area));
        }

        rep.s_values.push_back(s);
        rep.min_green.push_back(min_g);
        rep.poisson_ratio.push_back(umax / gmax);
        rep.eigen_sup.push_back(sup);
        rep.refined_diag.push_back(u2max / std::sqrt(std::log(1.0 / s)));
    }

    std::vector<double> logs;
    for (double s : rep.s_values) logs.push_back(std::log(1.0 / s));
    rep.green_fit = affine_fit(logs, rep.min_green);
    rep.green_fit.model = "min G_s affine in log(1/s)";
    rep.poisson_fit = affine_fit(logs, rep.poisson_ratio);
    rep.poisson_fit.model = "sup|u|/sup|g| affine in log(1/s)";

    rep.refined_monotone_decreasing = true;
    for (std::size_t i = 1; i < rep.refined_diag.size(); ++i)
        if (rep.refined_diag[i] > rep.refined_diag[i - 1] * 1.02)
            rep.refined_monotone_decreasing = false;

    return rep;
}

} // namespace neckspec
