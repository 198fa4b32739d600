#ifndef NECKSPEC_LOCALMODEL_HPP
#define NECKSPEC_LOCALMODEL_HPP

#include <complex>
#include <utility>
#include <vector>

namespace neckspec {

/// Trace of the horizontal retraction flow on the chart pi = z_0 ... z_p
/// (polydisc of radius 3), integrating dz/deta = e^{i theta} *
/// conj(grad pi) / |d pi|^2 from the central fiber to pi = s e^{i theta}.
struct FlowTrace {
    int p = 1;
    double s = 0.0;
    double theta = 0.0;
    std::vector<double> etas;                                 // accepted steps
    std::vector<std::vector<std::complex<double>>> points;    // z(eta) per step
    std::vector<double> pi_defect;                            // |pi(z) - eta e^{i theta}|
    double displacement = 0.0;   // d(z(s), z(0)) in the Euclidean metric
    double max_pi_defect = 0.0;
    int steps = 0;
};

/// Integrate the flow with adaptive RK4 (step doubling, local tolerance
/// tol). start lies on the z_p = 0 component with the other moduli in
/// (0.5, 2). Throws domain_error on bad input, convergence_error on step
/// underflow, and a flow error if the trajectory enters the
/// r = s^{1/(4 nu)} ball of the singular stratum (nu = p).
FlowTrace flow_retraction(int p, double s, double theta,
                          std::vector<std::complex<double>> start, double tol);

/// Minimum over uniform samples in the radius-3 polydisc of
/// |d pi|^2 / d(z, Sing)^{2p}, with d(z, Sing)^2 the sum of the two
/// smallest |z_i|^2. Identically 1 for p = 1; >= 1/2 for p = 2.
double lojasiewicz_ratio_min(int p, long n_samples, unsigned long seed,
                             double radius = 3.0);

/// Extremal ratios of the induced volume density (via finite differences
/// of the chart embedding) against |s|^2 (sum |z_j|^-2) times the log
/// measure, over a (u, theta) quadrature grid on the p = 1 neck.
std::pair<double, double> neck_measure_identity_check(double s, double quad_tol,
                                                      int grid_points = 48);

/// Worst max/min ratio of the weight W = |s|^2 sum |z_j|^-2 over factor-2
/// log-scale windows in each |z_i| (i >= 1); bounded by 4^{2p}.
double log_weight_scale_check(int p, double s, int n_windows);

} // namespace neckspec

#endif
