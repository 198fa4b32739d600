#ifndef NECKSPEC_EIGSOLVE_HPP
#define NECKSPEC_EIGSOLVE_HPP

#include "neckspec/sparse.hpp"

#include <vector>

namespace neckspec {

/// Smallest eigenpairs of K u = lambda M u. Eigenvectors are M-orthonormal,
/// residuals are ||K u - lambda M u|| / ||u||_M.
struct Spectrum {
    std::vector<double> eigenvalues;                 // ascending
    std::vector<std::vector<double>> eigenvectors;   // one vector per eigenvalue
    std::vector<double> residuals;
    int iterations = 0;
};

/// Block LOBPCG with constant-mode deflation: the initial block is seeded
/// with the constant vector plus pseudo-random fill (block size k + 5),
/// preconditioned by the diagonal of K + sigma M. Deterministic for a
/// fixed seed. Throws convergence_error after 500 iterations, domain_error
/// when M is not positive definite.
Spectrum lobpcg_smallest(const SparseSym& K, const SparseSym& M, int k, double tol,
                         unsigned long seed);

struct DenseEig {
    std::vector<double> values;                      // ascending
    std::vector<std::vector<double>> vectors;        // vectors[j] pairs with values[j]
};

/// Cyclic Jacobi for a small (dimension <= 64) dense symmetric matrix,
/// given as rows. Off-diagonal Frobenius norm is driven below 1e-12.
DenseEig dense_jacobi_eig(const std::vector<std::vector<double>>& A);

/// Generalized problem A y = mu B y for small dense symmetric A and
/// positive definite B (Cholesky reduction + Jacobi). Throws domain_error
/// on a nonpositive pivot of B.
DenseEig dense_generalized_eig(const std::vector<std::vector<double>>& A,
                               const std::vector<std::vector<double>>& B);

} // namespace neckspec

#endif
