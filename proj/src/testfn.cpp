#include "neckspec/testfn.hpp"
#include "neckspec/errors.hpp"
#include "neckspec/eigsolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace neckspec {

double cutoff_profile(double t, double eps, CutoffShape shape) {
    if (!(t > 0.0))
        throw domain_error("cutoff_profile: t must be positive");
    if (!(eps > 0.0 && eps < std::exp(-2.0)))
        throw domain_error("cutoff_profile: eps must lie in (0, e^-2)");
    const double u = (std::log(t) - std::log(eps)) / (-0.5 * std::log(eps));
    const double x = std::clamp(u, 0.0, 1.0);
    if (shape == CutoffShape::linear_ramp) return x;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

TestFunction build_component_testfn(const FiberMesh& mesh, int component, double eps,
                                    CutoffShape shape) {
    if (component < 0 || component >= mesh.n_components)
        throw domain_error("build_component_testfn: invalid component " +
                           std::to_string(component));
    if (!(eps >= mesh.s))
        throw domain_error("build_component_testfn: eps = " + std::to_string(eps) +
                           " < s = " + std::to_string(mesh.s) +
                           " (ramp exits the neck)");

    TestFunction fn;
    fn.component = component;
    fn.eps = eps;
    fn.values.assign(mesh.nodes.size(), 0.0);

    for (int i = 0; i < mesh.node_count(); ++i) {
        const auto& info = mesh.node_info[i];
        if (info.region < mesh.n_components) {
            fn.values[i] = (info.region == component) ? 1.0 : 0.0;
            continue;
        }
        const auto& neck = mesh.necks[info.region - mesh.n_components];
        double value = 0.0;
        if (neck.tail_comp == component)
            value = std::max(value, cutoff_profile(std::exp(info.u), eps, shape));
        if (neck.head_comp == component)
            value = std::max(value, cutoff_profile(mesh.s * std::exp(-info.u), eps, shape));
        fn.values[i] = value;
    }
    return fn;
}

double rayleigh(const SparseSym& K, const SparseSym& M, const std::vector<double>& u) {
    const double m = M.quad_form(u);
    if (!(m > 0.0))
        throw domain_error("rayleigh: trial vector has zero M-norm");
    return K.quad_form(u) / m;
}

MinmaxResult minmax_upper_bound(const SparseSym& K, const SparseSym& M,
                                const std::vector<TestFunction>& testfns) {
    const int nf = static_cast<int>(testfns.size());
    if (nf < 2)
        throw domain_error("minmax_upper_bound: need at least 2 test functions");
    for (int i = 0; i < nf; ++i)
        for (int j = i + 1; j < nf; ++j)
            for (std::size_t r = 0; r < testfns[i].values.size(); ++r)
                if (testfns[i].values[r] != 0.0 && testfns[j].values[r] != 0.0)
                    throw domain_error("minmax_upper_bound: test functions " +
                                       std::to_string(i) + " and " + std::to_string(j) +
                                       " have overlapping supports");

    std::vector<std::vector<double>> A(nf, std::vector<double>(nf, 0.0));
    std::vector<std::vector<double>> B(nf, std::vector<double>(nf, 0.0));
    for (int i = 0; i < nf; ++i) {
        for (int j = i; j < nf; ++j) {
            A[i][j] = A[j][i] = K.bilinear(testfns[i].values, testfns[j].values);
            B[i][j] = B[j][i] = M.bilinear(testfns[i].values, testfns[j].values);
        }
    }

    DenseEig ritz;
    try {
        ritz = dense_generalized_eig(A, B);
    } catch (const domain_error&) {
        throw domain_error("minmax_upper_bound: projected mass matrix is singular "
                           "(linearly dependent test functions)");
    }

    MinmaxResult out;
    for (int j = 1; j < nf; ++j) out.bounds.push_back(ritz.values[j]);
    double worst = 0.0;
    double eps_min = 1.0;
    for (int i = 0; i < nf; ++i) {
        worst = std::max(worst, A[i][i]);
        eps_min = std::min(eps_min, testfns[i].eps);
    }
    out.k4_check = worst * std::log(1.0 / eps_min);
    return out;
}

} // namespace neckspec
