#include "neckspec/analysis.hpp"
#include "neckspec/assembly.hpp"
#include "neckspec/eigsolve.hpp"
#include "neckspec/errors.hpp"
#include "neckspec/mesh.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace neckspec {

namespace {

constexpr double kNeckConductance = 2.0 * std::numbers::pi;

double sweep_epsilon(double s) {
    // eps(s) = s^(1/4), kept strictly inside the cutoff's (0, e^-2) domain.
    return std::min(std::pow(s, 0.25), 0.99 * std::exp(-2.0));
}

SweepRow sweep_one(const ConfigGraph& cfg, double s, unsigned long seed,
                   CutoffShape shape) {
    const auto t0 = std::chrono::steady_clock::now();
    FiberMesh mesh = build_fiber_mesh(cfg, s, cfg.mesh_h);
    auto [K, M] = assemble(mesh);
    Spectrum spec = lobpcg_smallest(K, M, cfg.eig_count, cfg.tol.eig_residual, seed);

    SweepRow row;
    row.s = s;
    row.eigenvalues = spec.eigenvalues;
    row.residuals = spec.residuals;

    const int N = cfg.vertex_count();
    if (N >= 2) {
        const double eps = sweep_epsilon(s);
        std::vector<TestFunction> fns;
        for (int c = 0; c < N; ++c)
            fns.push_back(build_component_testfn(mesh, c, eps, shape));
        MinmaxResult mm = minmax_upper_bound(K, M, fns);
        row.minmax_bounds = mm.bounds;
        row.k4_check = mm.k4_check;
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

SweepTable sweep(const ConfigGraph& cfg, unsigned long seed, int jobs, CutoffShape shape) {
    SweepTable table;
    table.eig_count = cfg.eig_count;
    table.n_small = cfg.vertex_count() - 1;
    const int nrows = static_cast<int>(cfg.s_grid.size());
    table.rows.resize(nrows);
    if (nrows == 0) return table;

    jobs = std::max(1, jobs);
    std::vector<std::exception_ptr> errors(nrows);
    auto worker = [&](int start, int stride) {
        for (int i = start; i < nrows; i += stride) {
            try {
                table.rows[i] = sweep_one(cfg, cfg.s_grid[i], seed, shape);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min(jobs, nrows); ++t)
            pool.emplace_back(worker, t, std::min(jobs, nrows));
        for (auto& th : pool) th.join();
    }
    for (int i = 0; i < nrows; ++i) {
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                throw convergence_error("sweep: failure at s = " +
                                        std::to_string(cfg.s_grid[i]) + ": " + e.what());
            }
        }
    }
    return table;
}

FitResult fit_log_rate(const SweepTable& table, int k) {
    if (table.rows.size() < 3)
        throw domain_error("fit_log_rate: need at least 3 rows");
    std::vector<double> x, y;
    for (const auto& row : table.rows) {
        if (k < 0 || k >= static_cast<int>(row.eigenvalues.size()))
            throw domain_error("fit_log_rate: eigenvalue index out of range");
        if (!(row.eigenvalues[k] > 0.0))
            throw domain_error("fit_log_rate: lambda_" + std::to_string(k) +
                               " is not positive at s = " + std::to_string(row.s));
        x.push_back(std::log(1.0 / row.s));
        y.push_back(1.0 / row.eigenvalues[k]);
    }
    FitResult fit = affine_fit(x, y);
    fit.model = "1/lambda affine in log(1/s)";
    return fit;
}

std::pair<GraphLap, std::vector<double>> graph_laplacian_spectrum(const ConfigGraph& cfg) {
    const int N = cfg.vertex_count();
    GraphLap glap;
    glap.conductance = kNeckConductance;
    for (int v = 0; v < N; ++v) glap.masses.push_back(cfg.mass(v));

    // mu-symmetrized operator: D^-1/2 L_c D^-1/2 with L_c the conductance
    // Laplacian; self-plumbings contribute nothing to the form.
    std::vector<std::vector<double>> L(N, std::vector<double>(N, 0.0));
    for (const auto& e : cfg.edges) {
        if (e.tail == e.head) continue;
        L[e.tail][e.tail] += glap.conductance;
        L[e.head][e.head] += glap.conductance;
        L[e.tail][e.head] -= glap.conductance;
        L[e.head][e.tail] -= glap.conductance;
    }
    glap.sym_matrix.assign(N, std::vector<double>(N, 0.0));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            glap.sym_matrix[i][j] =
                L[i][j] / std::sqrt(glap.masses[i] * glap.masses[j]);

    DenseEig eig = dense_jacobi_eig(glap.sym_matrix);
    return {std::move(glap), std::move(eig.values)};
}

GraphLimitReport compare_graph_limit(const SweepTable& table,
                                     const std::vector<double>& graph_eigenvalues) {
    if (table.rows.empty())
        throw domain_error("compare_graph_limit: empty sweep table");

    GraphLimitReport rep;
    if (table.n_small == 0) {
        rep.note = "no small eigenvalues (N = 1); empty comparison";
        return rep;
    }
    rep.note = "informational: graph-limit agreement is conjectural for N >= 3";
    for (int k = 1; k <= table.n_small; ++k) {
        GraphLimitEntry entry;
        entry.k = k;
        entry.graph_eigenvalue = graph_eigenvalues.at(k);
        for (const auto& row : table.rows)
            entry.rescaled.push_back(std::log(1.0 / row.s) * row.eigenvalues.at(k));
        const double last = entry.rescaled.back();
        entry.rel_gap_smallest_s =
            std::abs(last - entry.graph_eigenvalue) / entry.graph_eigenvalue;
        entry.monotone_approach = true;
        for (std::size_t i = 1; i < entry.rescaled.size(); ++i) {
            const double gap_prev = std::abs(entry.rescaled[i - 1] - entry.graph_eigenvalue);
            const double gap = std::abs(entry.rescaled[i] - entry.graph_eigenvalue);
            if (gap > gap_prev * 1.001) entry.monotone_approach = false;
        }
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

std::string sweep_to_csv(const SweepTable& table) {
    std::string out = "s";
    for (int j = 0; j < table.eig_count; ++j) out += ",lambda" + std::to_string(j);
    for (int j = 0; j < table.eig_count; ++j) out += ",res" + std::to_string(j);
    for (int j = 1; j <= table.n_small; ++j) out += ",bound" + std::to_string(j);
    out += ",k4check\n";
    for (const auto& row : table.rows) {
        format_double(out, row.s);
        for (double v : row.eigenvalues) {
            out += ",";
            format_double(out, v);
        }
        for (double v : row.residuals) {
            out += ",";
            format_double(out, v);
        }
        for (double v : row.minmax_bounds) {
            out += ",";
            format_double(out, v);
        }
        out += ",";
        format_double(out, row.k4_check);
        out += "\n";
    }
    return out;
}

SweepTable sweep_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw validation_error("sweep csv: empty input");
    std::vector<std::string> headers;
    {
        std::istringstream hs(line);
        std::string tok;
        while (std::getline(hs, tok, ',')) headers.push_back(tok);
    }
    if (headers.empty() || headers[0] != "s")
        throw validation_error("sweep csv: first column must be 's'");
    int eig_count = 0, n_small = 0;
    for (const auto& h : headers) {
        if (h.rfind("lambda", 0) == 0) ++eig_count;
        if (h.rfind("bound", 0) == 0) ++n_small;
    }

    SweepTable table;
    table.eig_count = eig_count;
    table.n_small = n_small;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() != headers.size())
            throw validation_error("sweep csv: row has " + std::to_string(vals.size()) +
                                   " fields, expected " + std::to_string(headers.size()));
        SweepRow row;
        std::size_t p = 0;
        row.s = vals[p++];
        for (int j = 0; j < eig_count; ++j) row.eigenvalues.push_back(vals[p++]);
        for (int j = 0; j < eig_count; ++j) row.residuals.push_back(vals[p++]);
        for (int j = 0; j < n_small; ++j) row.minmax_bounds.push_back(vals[p++]);
        row.k4_check = vals[p++];
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_sweep_svg(const SweepTable& table, std::ostream& os) {
    const int W = 640, H = 480, pad = 60;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
       << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (table.rows.size() >= 2 && table.n_small >= 1) {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& row : table.rows) {
            const double x = std::log(1.0 / row.s);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            for (int k = 1; k <= table.n_small; ++k) {
                const double y = 1.0 / row.eigenvalues.at(k);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
        if (ymax <= ymin) ymax = ymin + 1.0;
        auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (W - 2 * pad); };
        auto py = [&](double y) {
            return H - pad - (y - ymin) / (ymax - ymin) * (H - 2 * pad);
        };
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
        for (int k = 1; k <= table.n_small; ++k) {
            os << "<polyline fill=\"none\" stroke=\"" << colors[(k - 1) % 5]
               << "\" stroke-width=\"2\" points=\"";
            for (const auto& row : table.rows)
                os << px(std::log(1.0 / row.s)) << "," << py(1.0 / row.eigenvalues.at(k))
                   << " ";
            os << "\"/>\n";
        }
        os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad
           << "\" y2=\"" << H - pad << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
           << H - pad << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15
           << "\" text-anchor=\"middle\">log(1/s)</text>\n";
        os << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
           << ")\" text-anchor=\"middle\">1/lambda_k</text>\n";
    }
    os << "</svg>\n";
}

} // namespace neckspec
