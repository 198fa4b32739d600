#include "neckspec/eigsolve.hpp"
#include "neckspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace neckspec {

namespace {

// Column-major dense block of vectors.
struct Block {
    int n = 0, m = 0;
    std::vector<double> a;   // n * m
    Block() = default;
    Block(int n_, int m_) : n(n_), m(m_), a(static_cast<std::size_t>(n_) * m_, 0.0) {}
    double* col(int j) { return a.data() + static_cast<std::size_t>(j) * n; }
    const double* col(int j) const { return a.data() + static_cast<std::size_t>(j) * n; }
};

Block spmm(const SparseSym& A, const Block& X) {
    Block Y(X.n, X.m);
    for (int j = 0; j < X.m; ++j) A.matvec(X.col(j), Y.col(j));
    return Y;
}

// G = X' Y (m_x x m_y), row-major small matrix.
std::vector<std::vector<double>> gram(const Block& X, const Block& Y) {
    std::vector<std::vector<double>> G(X.m, std::vector<double>(Y.m, 0.0));
    for (int i = 0; i < X.m; ++i)
        for (int j = 0; j < Y.m; ++j) {
            const double* x = X.col(i);
            const double* y = Y.col(j);
            double acc = 0.0;
            for (int r = 0; r < X.n; ++r) acc += x[r] * y[r];
            G[i][j] = acc;
        }
    return G;
}

// Y = X * C, with C given as columns (C[j] is the j-th output coefficient set).
Block combine(const Block& X, const std::vector<std::vector<double>>& C) {
    Block Y(X.n, static_cast<int>(C.size()));
    for (std::size_t j = 0; j < C.size(); ++j) {
        double* y = Y.col(static_cast<int>(j));
        for (int i = 0; i < X.m; ++i) {
            const double cij = C[j][i];
            if (cij == 0.0) continue;
            const double* x = X.col(i);
            for (int r = 0; r < X.n; ++r) y[r] += cij * x[r];
        }
    }
    return Y;
}

void symmetrize(std::vector<std::vector<double>>& A) {
    const std::size_t n = A.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = 0.5 * (A[i][j] + A[j][i]);
            A[i][j] = A[j][i] = v;
        }
}

// Core cyclic Jacobi; no dimension cap (internal callers may exceed 64).
DenseEig jacobi_core(std::vector<std::vector<double>> A) {
    const int n = static_cast<int>(A.size());
    std::vector<std::vector<double>> V(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) V[i][i] = 1.0;

    auto offnorm = [&]() {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) acc += 2.0 * A[i][j] * A[i][j];
        return std::sqrt(acc);
    };

    for (int sweep = 0; sweep < 100 && offnorm() > 1e-12; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A[p][q];
                if (std::abs(apq) < 1e-300) continue;
                const double tau = (A[q][q] - A[p][p]) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = A[i][p], aiq = A[i][q];
                    A[i][p] = c * aip - s * aiq;
                    A[i][q] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = A[p][i], aqi = A[q][i];
                    A[p][i] = c * api - s * aqi;
                    A[q][i] = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = V[i][p], viq = V[i][q];
                    V[i][p] = c * vip - s * viq;
                    V[i][q] = s * vip + c * viq;
                }
            }
        }
    }

    DenseEig out;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return A[a][a] < A[b][b]; });
    for (int j : order) {
        out.values.push_back(A[j][j]);
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = V[i][j];
        out.vectors.push_back(std::move(v));
    }
    return out;
}

// M-orthonormalize the columns of S in place via the Gram eigenbasis;
// near-dependent directions (relative to drop_tol) are removed.
void svqb(const SparseSym& M, Block& S, double drop_tol = 1e-12) {
    Block MS = spmm(M, S);
    auto G = gram(S, MS);
    symmetrize(G);
    DenseEig ge = jacobi_core(G);
    double gmax = 0.0;
    for (double v : ge.values) gmax = std::max(gmax, std::abs(v));
    std::vector<std::vector<double>> C;
    for (std::size_t j = 0; j < ge.values.size(); ++j) {
        if (ge.values[j] > drop_tol * std::max(gmax, 1e-300)) {
            std::vector<double> c = ge.vectors[j];
            const double scale = 1.0 / std::sqrt(ge.values[j]);
            for (double& x : c) x *= scale;
            C.push_back(std::move(c));
        }
    }
    S = combine(S, C);
}

} // namespace

DenseEig dense_jacobi_eig(const std::vector<std::vector<double>>& A) {
    const std::size_t n = A.size();
    if (n == 0 || n > 64)
        throw domain_error("dense_jacobi_eig: dimension must be in [1, 64]");
    double scale = 0.0;
    for (const auto& row : A) {
        if (row.size() != n)
            throw domain_error("dense_jacobi_eig: matrix is not square");
        for (double v : row) scale = std::max(scale, std::abs(v));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(A[i][j] - A[j][i]) > 1e-12 * std::max(scale, 1.0))
                throw domain_error("dense_jacobi_eig: input is not symmetric");
    return jacobi_core(A);
}

DenseEig dense_generalized_eig(const std::vector<std::vector<double>>& A,
                               const std::vector<std::vector<double>>& B) {
    const int n = static_cast<int>(A.size());
    if (B.size() != A.size())
        throw domain_error("dense_generalized_eig: size mismatch");
    // Cholesky B = L L'.
    std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double acc = B[i][j];
            for (int k = 0; k < j; ++k) acc -= L[i][k] * L[j][k];
            if (i == j) {
                if (!(acc > 1e-300))
                    throw domain_error("dense_generalized_eig: B is not positive "
                                       "definite (pivot " + std::to_string(acc) + ")");
                L[i][i] = std::sqrt(acc);
            } else {
                L[i][j] = acc / L[j][j];
            }
        }
    }
    // C = L^-1 A L^-T.
    std::vector<std::vector<double>> W(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) {          // forward solve L W = A (column j)
        for (int i = 0; i < n; ++i) {
            double acc = A[i][j];
            for (int k = 0; k < i; ++k) acc -= L[i][k] * W[k][j];
            W[i][j] = acc / L[i][i];
        }
    }
    std::vector<std::vector<double>> C(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {          // solve L C' = W' per row
        for (int j = 0; j < n; ++j) {
            double acc = W[i][j];
            for (int k = 0; k < j; ++k) acc -= L[j][k] * C[i][k];
            C[i][j] = acc / L[j][j];
        }
    }
    symmetrize(C);
    DenseEig ge = jacobi_core(C);
    // Back-substitute vectors: y = L^-T x.
    for (auto& v : ge.vectors) {
        for (int i = n - 1; i >= 0; --i) {
            double acc = v[i];
            for (int k = i + 1; k < n; ++k) acc -= L[k][i] * v[k];
            v[i] = acc / L[i][i];
        }
    }
    return ge;
}

Spectrum lobpcg_smallest(const SparseSym& K, const SparseSym& M, int k, double tol,
                         unsigned long seed) {
    const int n = K.size();
    if (M.size() != n)
        throw domain_error("lobpcg: pencil dimension mismatch");
    if (k < 1 || k > n)
        throw domain_error("lobpcg: k out of range");

    const std::vector<double> mdiag = M.diagonal();
    const std::vector<double> kdiag = K.diagonal();
    double trM = 0.0;
    for (double v : mdiag) trM += v;
    const double sigma = 1e-6 * trM / n;
    std::vector<double> precond(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (!(mdiag[i] > 0.0))
            throw domain_error("lobpcg: M is not positive definite (diagonal entry " +
                               std::to_string(mdiag[i]) + " at row " + std::to_string(i) + ")");
        precond[i] = kdiag[i] + sigma * mdiag[i];
        if (!(precond[i] > 0.0))
            throw domain_error("lobpcg: nonpositive preconditioner pivot at row " +
                               std::to_string(i));
    }

    const int m = std::min(k + 5, n);
    Block X(n, m);
    for (int r = 0; r < n; ++r) X.col(0)[r] = 1.0;   // constant-mode deflation
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int j = 1; j < m; ++j)
        for (int r = 0; r < n; ++r) X.col(j)[r] = unif(rng);
    svqb(M, X);

    Block P(n, 0);
    std::vector<double> theta, resnorm;
    bool converged = false;
    int it = 0;
    const int max_iter = 500;

    auto cluster_converged = [&](const std::vector<double>& th,
                                 const std::vector<double>& rn) {
        // A cluster converges when its subspace (rms) residual passes tol.
        int j = 0;
        while (j < k) {
            int e = j;
            while (e + 1 < static_cast<int>(th.size()) &&
                   th[e + 1] - th[e] <= 1e-3 * std::max(std::abs(th[e + 1]), 1e-12))
                ++e;
            double acc = 0.0;
            for (int q = j; q <= e; ++q) acc += rn[q] * rn[q];
            if (std::sqrt(acc / (e - j + 1)) > tol) return false;
            j = e + 1;
        }
        return true;
    };

    for (it = 0; it < max_iter; ++it) {
        // Rayleigh-Ritz within span(X); X is M-orthonormal.
        Block KX = spmm(K, X);
        auto gA = gram(X, KX);
        symmetrize(gA);
        DenseEig rr = jacobi_core(gA);
        std::vector<std::vector<double>> C(rr.vectors.begin(), rr.vectors.end());
        X = combine(X, C);
        KX = combine(KX, C);
        Block MX = spmm(M, X);
        theta = rr.values;

        // Residuals.
        Block R(n, X.m);
        resnorm.assign(X.m, 0.0);
        for (int j = 0; j < X.m; ++j) {
            double acc = 0.0;
            for (int r = 0; r < n; ++r) {
                double v = KX.col(j)[r] - theta[j] * MX.col(j)[r];
                R.col(j)[r] = v;
                acc += v * v;
            }
            resnorm[j] = std::sqrt(acc);
        }
        if (cluster_converged(theta, resnorm)) {
            converged = true;
            break;
        }

        // Preconditioned residuals.
        Block W(n, X.m);
        for (int j = 0; j < X.m; ++j)
            for (int r = 0; r < n; ++r) W.col(j)[r] = R.col(j)[r] / precond[r];

        // Project X out of the preconditioned residuals before assembling
        // the trial basis; the basis as a whole is re-whitened below.
        auto project_out = [&](Block& target, const Block& onto) {
            if (onto.m == 0 || target.m == 0) return;
            Block Mt = spmm(M, target);
            auto coeff = gram(onto, Mt);     // onto.m x target.m
            for (int j = 0; j < target.m; ++j)
                for (int i = 0; i < onto.m; ++i) {
                    const double c = coeff[i][j];
                    if (c == 0.0) continue;
                    const double* o = onto.col(i);
                    double* t = target.col(j);
                    for (int r = 0; r < n; ++r) t[r] -= c * o[r];
                }
        };
        project_out(W, X);
        svqb(M, W);

        Block S(n, X.m + W.m + P.m);
        for (int j = 0; j < X.m; ++j)
            std::copy(X.col(j), X.col(j) + n, S.col(j));
        for (int j = 0; j < W.m; ++j)
            std::copy(W.col(j), W.col(j) + n, S.col(X.m + j));
        for (int j = 0; j < P.m; ++j)
            std::copy(P.col(j), P.col(j) + n, S.col(X.m + W.m + j));
        // Whitening of the combined basis is essential: near convergence the
        // residual block is pure rounding noise and S is numerically
        // rank-deficient, which would inject spurious near-zero Ritz values.
        svqb(M, S, 1e-10);

        const Block Xold = X;
        Block KS = spmm(K, S);
        auto gS = gram(S, KS);
        symmetrize(gS);
        DenseEig rs = jacobi_core(gS);
        const int mm = std::min(m, S.m);
        std::vector<std::vector<double>> Cm(rs.vectors.begin(), rs.vectors.begin() + mm);
        X = combine(S, Cm);

        // Conjugate directions: the part of the new X that is M-orthogonal
        // to the previous X (difference form of the LOBPCG P update).
        Block Pnew = X;
        {
            Block MXnew = spmm(M, X);
            auto cx = gram(Xold, MXnew);    // Xold.m x X.m
            for (int j = 0; j < Pnew.m; ++j)
                for (int i = 0; i < Xold.m; ++i) {
                    const double cij = cx[i][j];
                    if (cij == 0.0) continue;
                    const double* o = Xold.col(i);
                    double* t = Pnew.col(j);
                    for (int r = 0; r < n; ++r) t[r] -= cij * o[r];
                }
        }
        // Drop near-zero columns, renormalize the rest in the M-norm.
        Block MP = spmm(M, Pnew);
        std::vector<int> keep;
        for (int j = 0; j < Pnew.m; ++j) {
            double nrm2 = 0.0;
            for (int r = 0; r < n; ++r) nrm2 += Pnew.col(j)[r] * MP.col(j)[r];
            if (nrm2 > 1e-24) keep.push_back(j);
        }
        Block Pkeep(n, static_cast<int>(keep.size()));
        for (std::size_t w = 0; w < keep.size(); ++w) {
            const int j = keep[w];
            double nrm2 = 0.0;
            for (int r = 0; r < n; ++r) nrm2 += Pnew.col(j)[r] * MP.col(j)[r];
            const double inv = 1.0 / std::sqrt(nrm2);
            for (int r = 0; r < n; ++r)
                Pkeep.col(static_cast<int>(w))[r] = Pnew.col(j)[r] * inv;
        }
        P = std::move(Pkeep);
    }

    if (!converged) {
        std::string msg = "lobpcg: no convergence within 500 iterations; residuals:";
        for (int j = 0; j < std::min<int>(k, static_cast<int>(resnorm.size())); ++j)
            msg += " " + std::to_string(resnorm[j]);
        throw convergence_error(msg);
    }

    Spectrum out;
    out.iterations = it + 1;
    for (int j = 0; j < k; ++j) {
        out.eigenvalues.push_back(theta[j]);
        out.residuals.push_back(resnorm[j]);
        std::vector<double> v(static_cast<std::size_t>(n));
        std::copy(X.col(j), X.col(j) + n, v.begin());
        out.eigenvectors.push_back(std::move(v));
    }
    return out;
}

} // namespace neckspec
