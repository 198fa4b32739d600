#ifndef NECKSPEC_ANALYSIS_HPP
#define NECKSPEC_ANALYSIS_HPP

#include "neckspec/config.hpp"
#include "neckspec/fitting.hpp"
#include "neckspec/testfn.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace neckspec {

struct SweepRow {
    double s = 0.0;
    std::vector<double> eigenvalues;     // lambda_0 .. lambda_{k-1}, ascending
    std::vector<double> residuals;
    std::vector<double> minmax_bounds;   // bounds for lambda_1 .. lambda_{N-1}
    double k4_check = 0.0;
    double wall_time_s = 0.0;            // not serialized (reproducibility)
};

struct SweepTable {
    std::vector<SweepRow> rows;          // sorted by decreasing s
    int eig_count = 0;
    int n_small = 0;                     // N - 1
};

/// Per s in the grid: build the fiber mesh, assemble, solve eig_count
/// eigenpairs, and compute the min-max bounds with eps(s) = s^(1/4)
/// (capped just under e^-2, the cutoff's domain limit). Rows may be
/// computed concurrently (jobs > 1); output order is fixed regardless.
SweepTable sweep(const ConfigGraph& cfg, unsigned long seed = 42, int jobs = 1,
                 CutoffShape shape = CutoffShape::linear_ramp);

/// Least-squares fit of 1/lambda_k against log(1/s); the two-sided rate
/// estimate predicts positive slope and affinity for the small indices.
FitResult fit_log_rate(const SweepTable& table, int k);

/// Weighted dual-graph Laplacian of the non-Archimedean limit:
/// (Lf)(v) = mu(v)^-1 sum c_vw (f(v) - f(w)), mu(v) = a_v^2, c_e = 2*pi.
struct GraphLap {
    std::vector<double> masses;                       // mu(v)
    double conductance = 0.0;                         // c_e, identical per edge
    std::vector<std::vector<double>> sym_matrix;      // mu-symmetrized operator
};

std::pair<GraphLap, std::vector<double>> graph_laplacian_spectrum(const ConfigGraph& cfg);

struct GraphLimitEntry {
    int k = 0;
    std::vector<double> rescaled;        // log(1/s) * lambda_k(s), per row
    double graph_eigenvalue = 0.0;
    double rel_gap_smallest_s = 0.0;
    bool monotone_approach = false;
};

struct GraphLimitReport {
    std::vector<GraphLimitEntry> entries;
    std::string note;
};

/// Informational comparison of rescaled small eigenvalues against the
/// graph spectrum; asserts nothing beyond two-sided boundedness.
GraphLimitReport compare_graph_limit(const SweepTable& table,
                                     const std::vector<double>& graph_eigenvalues);

/// CSV with a header row, 17 significant digits, byte-stable across runs
/// for identical inputs (wall times are not serialized).
std::string sweep_to_csv(const SweepTable& table);
SweepTable sweep_from_csv(const std::string& text);

/// Line plot of 1/lambda_k vs log(1/s) for the small indices.
void write_sweep_svg(const SweepTable& table, std::ostream& os);

} // namespace neckspec

#endif
