#include <doctest.h>

#include "neckspec/config.hpp"
#include "neckspec/errors.hpp"
#include "neckspec/mesh.hpp"

#include <cmath>
#include <numbers>

using namespace neckspec;

namespace {

ConfigGraph dumbbell() {
    return parse_config(R"({
      "vertices": [{"id": "a", "side": 4.0}, {"id": "b", "side": 4.0}],
      "edges": [{"id": "neck", "endpoints": ["a", "b"]}],
      "s_grid": [1e-2]
    })");
}

ConfigGraph chain3() {
    return parse_config(R"({
      "vertices": [{"id": "a", "side": 4.0}, {"id": "b", "side": 8.0},
                   {"id": "c", "side": 4.0}],
      "edges": [{"id": "ab", "endpoints": ["a", "b"]},
                {"id": "bc", "endpoints": ["b", "c"]}],
      "s_grid": [1e-2]
    })");
}

ConfigGraph selfloop() {
    return parse_config(R"({
      "vertices": [{"id": "a", "side": 8.0}],
      "edges": [{"id": "loop", "endpoints": ["a", "a"]}],
      "s_grid": [1e-2]
    })");
}

} // namespace

TEST_CASE("neck density and closed-form area") {
    const double s = 1e-3;
    CHECK(neck_density(0.0, s) == doctest::Approx(1.0 + s * s));
    CHECK(neck_density(std::log(s), s) == doctest::Approx(s * s + 1.0));
    // integral of (e^{2u} + s^2 e^{-2u}) over [log s, 0] x [0, 2pi)
    CHECK(neck_area_closed_form(s) ==
          doctest::Approx(2.0 * std::numbers::pi * (1.0 - s * s)).epsilon(1e-14));
}

TEST_CASE("hole_segments enforces the resolution floor") {
    CHECK(hole_segments(0.2) == 8);
    CHECK(hole_segments(0.1) == 16);
    CHECK_THROWS_AS(hole_segments(0.3), mesh_error);
}

TEST_CASE("torus diagnostic mesh is flat, closed and has chi = 0") {
    auto mesh = build_torus_mesh(4.0, 0.2);
    validate_mesh(mesh);
    CHECK(euler_characteristic(mesh) == 0);
    CHECK(total_area(mesh) == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("lone neck mesh area converges to the closed form") {
    const double s = 1e-2;
    auto coarse = build_neck_mesh(s, 0.2);
    auto fine = build_neck_mesh(s, 0.1);
    CHECK_FALSE(coarse.closed);
    const double exact = neck_area_closed_form(s);
    const double err_c = std::abs(total_area(coarse) - exact) / exact;
    const double err_f = std::abs(total_area(fine) - exact) / exact;
    CHECK(err_c < 0.02);
    CHECK(err_f < err_c);           // second-order quadrature refinement
    CHECK(err_f < 0.3 * err_c);
}

TEST_CASE("glued fiber meshes have the expected Euler characteristic") {
    SUBCASE("dumbbell: chi = -2") {
        auto mesh = build_fiber_mesh(dumbbell(), 1e-2, 0.2);
        validate_mesh(mesh);
        CHECK(expected_euler_characteristic(dumbbell()) == -2);
        CHECK(euler_characteristic(mesh) == -2);
        CHECK(mesh.n_components == 2);
        CHECK(mesh.necks.size() == 1);
        CHECK(mesh.necks[0].length == doctest::Approx(std::log(1e2)));
    }
    SUBCASE("chain of three: chi = -4") {
        auto mesh = build_fiber_mesh(chain3(), 1e-2, 0.2);
        validate_mesh(mesh);
        CHECK(euler_characteristic(mesh) == -4);
        CHECK(expected_euler_characteristic(chain3()) == -4);
    }
    SUBCASE("self-plumbing: chi = -2") {
        auto mesh = build_fiber_mesh(selfloop(), 1e-2, 0.2);
        validate_mesh(mesh);
        CHECK(euler_characteristic(mesh) == -2);
        CHECK(expected_euler_characteristic(selfloop()) == -2);
    }
}

TEST_CASE("fiber mesh area tracks the closed form") {
    auto cfg = dumbbell();
    const double s = 1e-2;
    auto mesh = build_fiber_mesh(cfg, s, 0.1);
    const double holes = std::numbers::pi * std::numbers::pi / 4.0;   // (pi/2)^2 per incidence
    const double exact = 2.0 * (16.0 - holes) + neck_area_closed_form(s);
    CHECK(total_area(mesh) == doctest::Approx(exact).epsilon(5e-3));
}

TEST_CASE("mesh construction rejects out-of-domain parameters") {
    auto cfg = dumbbell();
    CHECK_THROWS_AS(build_fiber_mesh(cfg, 0.0, 0.2), domain_error);
    CHECK_THROWS_AS(build_fiber_mesh(cfg, 1.0, 0.2), domain_error);
    CHECK_THROWS_AS(build_fiber_mesh(cfg, 1e-2, 0.7), domain_error);
    CHECK_THROWS_AS(build_fiber_mesh(cfg, 1e-2, 0.3), mesh_error);   // K < 8
}
