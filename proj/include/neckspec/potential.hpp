#ifndef NECKSPEC_POTENTIAL_HPP
#define NECKSPEC_POTENTIAL_HPP

#include "neckspec/config.hpp"
#include "neckspec/fitting.hpp"
#include "neckspec/sparse.hpp"

#include <vector>

namespace neckspec {

/// Solve K u = M g with mass-weighted mean(u) = 0, by conjugate gradients
/// on the mean-zero subspace (relative residual <= 1e-9). Requires the
/// mass-weighted mean of g to vanish (within 1e-10 relative).
std::vector<double> solve_poisson(const SparseSym& K, const SparseSym& M,
                                  const std::vector<double>& g);

struct GreenColumn {
    int base_node = -1;
    std::vector<double> values;   // mass-weighted mean zero
};

/// Discrete Green column at x: K g = e_x - massdiag / total_mass, with
/// mean-zero normalization.
GreenColumn green_column(const SparseSym& K, const SparseSym& M, int x);

struct LogGrowthReport {
    std::vector<double> s_values;       // decreasing
    std::vector<double> min_green;      // min over sampled columns per s
    std::vector<double> poisson_ratio;  // ||u||_inf / ||g||_inf for the fixed bump
    std::vector<double> eigen_sup;      // max_k ||phi_k||_inf * sqrt(area), small k only
    std::vector<double> refined_diag;   // ||u2||_inf / sqrt(log(1/s)), componentwise-zero bump
    FitResult green_fit;                // min_green vs log(1/s)
    FitResult poisson_fit;              // poisson_ratio vs log(1/s)
    bool refined_monotone_decreasing = false;
};

/// Sweep the s-grid and fit the log-growth shapes of the Green minimum
/// and the Poisson sup-norm ratio. Requires >= 3 grid points.
LogGrowthReport log_growth_report(const ConfigGraph& cfg);

} // namespace neckspec

#endif
