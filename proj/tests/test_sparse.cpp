#include <doctest.h>

#include "neckspec/sparse.hpp"

#include <random>
#include <sstream>

using namespace neckspec;

namespace {

SparseSym tiny_sym() {
    // [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    std::vector<int> r = {0, 0, 1, 1, 1, 2, 2};
    std::vector<int> c = {0, 1, 0, 1, 2, 1, 2};
    std::vector<double> v = {2, -1, -1, 2, -1, -1, 2};
    return SparseSym::from_triplets(3, SparseSym::Kind::stiffness, r, c, v);
}

} // namespace

TEST_CASE("from_triplets merges duplicates deterministically") {
    std::vector<int> r = {1, 0, 1, 0, 1};
    std::vector<int> c = {1, 0, 1, 0, 0};
    std::vector<double> v = {1.0, 2.0, 0.5, 3.0, -1.0};
    auto A = SparseSym::from_triplets(2, SparseSym::Kind::mass, r, c, v);
    CHECK(A.size() == 2);
    CHECK(A.nnz() == 3);   // (0,0)=5, (1,1)=1.5, (1,0)=-1
    auto d = A.diagonal();
    CHECK(d[0] == doctest::Approx(5.0));
    CHECK(d[1] == doctest::Approx(1.5));
}

TEST_CASE("matvec, quad_form and bilinear agree with dense arithmetic") {
    auto A = tiny_sym();
    std::vector<double> x = {1.0, 2.0, 3.0};
    auto y = A.matvec(x);
    CHECK(y[0] == doctest::Approx(0.0));
    CHECK(y[1] == doctest::Approx(0.0));
    CHECK(y[2] == doctest::Approx(4.0));
    CHECK(A.quad_form(x) == doctest::Approx(12.0));
    std::vector<double> z = {1.0, 0.0, -1.0};
    CHECK(A.bilinear(x, z) == doctest::Approx(-4.0));
    CHECK(A.bilinear(x, z) == doctest::Approx(A.bilinear(z, x)));
}

TEST_CASE("symmetry defect is zero for symmetric input") {
    CHECK(tiny_sym().symmetry_defect() == doctest::Approx(0.0));
}

TEST_CASE("matrix market round trip preserves entries") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int n = 12;
    std::vector<int> r, c;
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            if ((i + j) % 3 != 0) continue;
            double x = unif(rng);
            r.push_back(i); c.push_back(j); v.push_back(x);
            if (i != j) { r.push_back(j); c.push_back(i); v.push_back(x); }
        }
    auto A = SparseSym::from_triplets(n, SparseSym::Kind::stiffness, r, c, v);

    std::ostringstream os;
    A.write_matrix_market(os);
    CHECK(os.str().rfind("%%MatrixMarket matrix coordinate real symmetric", 0) == 0);

    std::istringstream is(os.str());
    auto B = SparseSym::read_matrix_market(is, SparseSym::Kind::stiffness);
    REQUIRE(B.size() == A.size());
    REQUIRE(B.nnz() == A.nnz());
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = unif(rng);
    auto ya = A.matvec(x);
    auto yb = B.matvec(x);
    for (int i = 0; i < n; ++i) CHECK(ya[i] == doctest::Approx(yb[i]).epsilon(1e-15));
}
