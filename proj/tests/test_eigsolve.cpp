#include <doctest.h>

#include "neckspec/assembly.hpp"
#include "neckspec/eigsolve.hpp"
#include "neckspec/errors.hpp"
#include "neckspec/mesh.hpp"

#include <cmath>
#include <numbers>

using namespace neckspec;

namespace {

SparseSym diag_matrix(const std::vector<double>& d, SparseSym::Kind kind) {
    std::vector<int> r, c;
    std::vector<double> v;
    for (int i = 0; i < static_cast<int>(d.size()); ++i) {
        r.push_back(i);
        c.push_back(i);
        v.push_back(d[i]);
    }
    return SparseSym::from_triplets(static_cast<int>(d.size()), kind, r, c, v);
}

SparseSym path_laplacian(int n) {
    std::vector<int> r, c;
    std::vector<double> v;
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        if (i > 0) { r.push_back(i); c.push_back(i - 1); v.push_back(-1.0); d += 1.0; }
        if (i < n - 1) { r.push_back(i); c.push_back(i + 1); v.push_back(-1.0); d += 1.0; }
        r.push_back(i); c.push_back(i); v.push_back(d);
    }
    return SparseSym::from_triplets(n, SparseSym::Kind::stiffness, r, c, v);
}

} // namespace

TEST_CASE("dense Jacobi on known matrices") {
    auto e = dense_jacobi_eig({{2.0, 1.0}, {1.0, 2.0}});
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(3.0));
    // eigenvector orthogonality
    double dot = 0.0;
    for (int i = 0; i < 2; ++i) dot += e.vectors[0][i] * e.vectors[1][i];
    CHECK(std::abs(dot) < 1e-12);

    CHECK_THROWS_AS(dense_jacobi_eig({{1.0, 2.0}, {0.0, 1.0}}), domain_error);
    CHECK_THROWS_AS(dense_jacobi_eig(std::vector<std::vector<double>>(
                        65, std::vector<double>(65, 0.0))),
                    domain_error);
}

TEST_CASE("dense generalized eigensolve via Cholesky reduction") {
    auto e = dense_generalized_eig({{2.0, 0.0}, {0.0, 8.0}}, {{1.0, 0.0}, {0.0, 2.0}});
    CHECK(e.values[0] == doctest::Approx(2.0));
    CHECK(e.values[1] == doctest::Approx(4.0));
    // vectors satisfy A y = mu B y
    for (int j = 0; j < 2; ++j) {
        const auto& y = e.vectors[j];
        CHECK(2.0 * y[0] == doctest::Approx(e.values[j] * y[0]).epsilon(1e-12));
        CHECK(8.0 * y[1] == doctest::Approx(e.values[j] * 2.0 * y[1]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(
        dense_generalized_eig({{1.0, 0.0}, {0.0, 1.0}}, {{1.0, 0.0}, {0.0, -1.0}}),
        domain_error);
}

TEST_CASE("lobpcg reproduces small exact spectra") {
    auto M = diag_matrix({1.0, 1.0, 1.0}, SparseSym::Kind::mass);
    SUBCASE("diagonal pencil") {
        auto K = diag_matrix({3.0, 1.0, 2.0}, SparseSym::Kind::stiffness);
        auto sp = lobpcg_smallest(K, M, 2, 1e-10, 7);
        CHECK(sp.eigenvalues[0] == doctest::Approx(1.0));
        CHECK(sp.eigenvalues[1] == doctest::Approx(2.0));
    }
    SUBCASE("path graph: {0, 1, 3}") {
        auto sp = lobpcg_smallest(path_laplacian(3), M, 3, 1e-10, 7);
        CHECK(std::abs(sp.eigenvalues[0]) < 1e-10);
        CHECK(sp.eigenvalues[1] == doctest::Approx(1.0));
        CHECK(sp.eigenvalues[2] == doctest::Approx(3.0));
    }
}

TEST_CASE("lobpcg matches the 1d free laplacian closed form") {
    // Regression guard: near convergence the trial basis degenerates and,
    // without whitening, spurious near-zero Ritz values used to appear.
    const int n = 200;
    auto K = path_laplacian(n);
    auto M = diag_matrix(std::vector<double>(n, 1.0), SparseSym::Kind::mass);
    auto sp = lobpcg_smallest(K, M, 4, 1e-9, 7);
    for (int j = 0; j < 4; ++j) {
        const double exact = 2.0 - 2.0 * std::cos(std::numbers::pi * j / n);
        CHECK(sp.eigenvalues[j] == doctest::Approx(exact).epsilon(1e-6));
    }
    // M-orthonormal eigenvectors
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += sp.eigenvectors[a][i] * sp.eigenvectors[b][i];
            CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-6));
        }
    for (double r : sp.residuals) CHECK(r < 1e-8);
}

TEST_CASE("lobpcg is deterministic and scales with the mass matrix") {
    const int n = 80;
    auto K = path_laplacian(n);
    auto M = diag_matrix(std::vector<double>(n, 1.0), SparseSym::Kind::mass);
    auto a = lobpcg_smallest(K, M, 3, 1e-9, 42);
    auto b = lobpcg_smallest(K, M, 3, 1e-9, 42);
    CHECK(a.eigenvalues == b.eigenvalues);       // bitwise
    CHECK(a.iterations == b.iterations);

    auto M4 = diag_matrix(std::vector<double>(n, 4.0), SparseSym::Kind::mass);
    auto c = lobpcg_smallest(K, M4, 3, 1e-9, 42);
    for (int j = 1; j < 3; ++j)
        CHECK(c.eigenvalues[j] == doctest::Approx(a.eigenvalues[j] / 4.0).epsilon(1e-7));
}

TEST_CASE("lobpcg input validation") {
    auto K = diag_matrix({1.0, 2.0}, SparseSym::Kind::stiffness);
    auto M = diag_matrix({1.0, 1.0}, SparseSym::Kind::mass);
    CHECK_THROWS_AS(lobpcg_smallest(K, M, 0, 1e-8, 1), domain_error);
    CHECK_THROWS_AS(lobpcg_smallest(K, M, 3, 1e-8, 1), domain_error);
    auto Mbad = diag_matrix({1.0, 0.0}, SparseSym::Kind::mass);
    CHECK_THROWS_AS(lobpcg_smallest(K, Mbad, 1, 1e-8, 1), domain_error);
}

TEST_CASE("flat-torus first eigenvalue pi^2/4 with multiplicity four") {
    auto mesh = build_torus_mesh(4.0, 0.1);
    auto [K, M] = assemble(mesh);
    auto sp = lobpcg_smallest(K, M, 6, 1e-7, 42);
    const double l1 = std::numbers::pi * std::numbers::pi / 4.0;
    CHECK(std::abs(sp.eigenvalues[0]) < 1e-8);
    for (int j = 1; j <= 4; ++j)
        CHECK(sp.eigenvalues[j] == doctest::Approx(l1).epsilon(0.02));
    CHECK(sp.eigenvalues[5] > 1.5 * l1);   // next group is 2 pi^2 / 4
}
