#ifndef NECKSPEC_TESTFN_HPP
#define NECKSPEC_TESTFN_HPP

#include "neckspec/mesh.hpp"
#include "neckspec/sparse.hpp"

#include <vector>

namespace neckspec {

enum class CutoffShape { linear_ramp, smooth_quintic };

/// Logarithmic cutoff: 0 for t <= eps, 1 for t >= sqrt(eps), the ramp in
/// between driven by u = (log t - log eps) / (-log(eps)/2). Requires
/// eps in (0, e^-2).
double cutoff_profile(double t, double eps, CutoffShape shape);

/// Nodal test function supported on one component plus the nearby parts
/// of its incident necks.
struct TestFunction {
    int component = -1;
    double eps = 0.0;
    std::vector<double> values;
};

/// 1 on component i, cutoff_profile(e^u, eps) along each incident neck
/// (u oriented from the component-i end), 0 elsewhere. Requires eps >= s.
TestFunction build_component_testfn(const FiberMesh& mesh, int component, double eps,
                                    CutoffShape shape);

/// (u' K u) / (u' M u); throws domain_error on zero M-norm.
double rayleigh(const SparseSym& K, const SparseSym& M, const std::vector<double>& u);

struct MinmaxResult {
    /// Certified upper bounds for lambda_1 .. lambda_{N-1}.
    std::vector<double> bounds;
    /// max_i ||d chi_i||^2 * log(1/eps); bounded uniformly over the s-grid
    /// when the construction behaves.
    double k4_check = 0.0;
};

/// Projects the pencil onto span of the test functions and returns the
/// Ritz values from the 2nd-smallest onward. Requires >= 2 test functions
/// with pairwise disjoint supports.
MinmaxResult minmax_upper_bound(const SparseSym& K, const SparseSym& M,
                                const std::vector<TestFunction>& testfns);

} // namespace neckspec

#endif
