#include <doctest.h>

#include "neckspec/analysis.hpp"
#include "neckspec/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace neckspec;

namespace {

ConfigGraph dumbbell(const char* grid) {
    std::string text = R"({
      "vertices": [{"id": "a", "side": 4.0}, {"id": "b", "side": 4.0}],
      "edges": [{"id": "neck", "endpoints": ["a", "b"]}],
      "s_grid": )";
    text += grid;
    text += "}";
    return parse_config(text);
}

} // namespace

TEST_CASE("dumbbell graph spectrum is {0, pi/4}") {
    auto cfg = dumbbell("[1e-2]");
    auto [glap, values] = graph_laplacian_spectrum(cfg);
    REQUIRE(values.size() == 2);
    CHECK(glap.conductance == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(glap.masses[0] == doctest::Approx(16.0));
    CHECK(std::abs(values[0]) < 1e-12);
    CHECK(values[1] == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
}

TEST_CASE("path graph spectrum satisfies trace and positivity") {
    auto cfg = parse_config(R"({
      "vertices": [{"id": "a", "side": 4.0}, {"id": "b", "side": 8.0},
                   {"id": "c", "side": 4.0}],
      "edges": [{"id": "ab", "endpoints": ["a", "b"]},
                {"id": "bc", "endpoints": ["b", "c"]}],
      "s_grid": [1e-2]
    })");
    auto [glap, values] = graph_laplacian_spectrum(cfg);
    REQUIRE(values.size() == 3);
    CHECK(std::abs(values[0]) < 1e-12);
    CHECK(values[1] > 0.0);
    CHECK(values[2] > values[1]);
    const double c = 2.0 * std::numbers::pi;
    const double trace = c / 16.0 + 2.0 * c / 64.0 + c / 16.0;
    CHECK(values[0] + values[1] + values[2] == doctest::Approx(trace).epsilon(1e-12));
}

TEST_CASE("self-plumbing contributes nothing to the graph form") {
    auto cfg = parse_config(R"({
      "vertices": [{"id": "a", "side": 8.0}],
      "edges": [{"id": "loop", "endpoints": ["a", "a"]}],
      "s_grid": [1e-2]
    })");
    auto [glap, values] = graph_laplacian_spectrum(cfg);
    REQUIRE(values.size() == 1);
    CHECK(std::abs(values[0]) < 1e-15);
}

TEST_CASE("sweep produces ordered rows with dominating bounds") {
    auto cfg = dumbbell("[1e-2, 1e-3, 1e-4]");
    auto table = sweep(cfg, 42, 2);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.eig_count == 5);
    CHECK(table.n_small == 1);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& row = table.rows[i];
        CHECK(row.s == cfg.s_grid[i]);
        REQUIRE(row.eigenvalues.size() == 5);
        CHECK(std::abs(row.eigenvalues[0]) < 1e-10);
        REQUIRE(row.minmax_bounds.size() == 1);
        CHECK(row.eigenvalues[1] <= row.minmax_bounds[0]);
    }
    // smaller s gives smaller lambda_1
    CHECK(table.rows[0].eigenvalues[1] > table.rows[1].eigenvalues[1]);
    CHECK(table.rows[1].eigenvalues[1] > table.rows[2].eigenvalues[1]);

    SUBCASE("rate fit on the table") {
        auto fit = fit_log_rate(table, 1);
        CHECK(fit.slope > 0.0);
        CHECK(fit.r_squared > 0.95);
        CHECK(fit.model == "1/lambda affine in log(1/s)");
        CHECK_THROWS_AS(fit_log_rate(table, 0), domain_error);   // lambda_0 = 0
        CHECK_THROWS_AS(fit_log_rate(table, 9), domain_error);
    }

    SUBCASE("csv round trip preserves every double bitwise") {
        auto csv = sweep_to_csv(table);
        auto back = sweep_from_csv(csv);
        REQUIRE(back.rows.size() == table.rows.size());
        CHECK(back.eig_count == table.eig_count);
        CHECK(back.n_small == table.n_small);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            CHECK(back.rows[i].s == table.rows[i].s);
            CHECK(back.rows[i].eigenvalues == table.rows[i].eigenvalues);
            CHECK(back.rows[i].residuals == table.rows[i].residuals);
            CHECK(back.rows[i].minmax_bounds == table.rows[i].minmax_bounds);
            CHECK(back.rows[i].k4_check == table.rows[i].k4_check);
        }
    }

    SUBCASE("graph-limit comparison approaches pi/4 from below") {
        auto [glap, gvals] = graph_laplacian_spectrum(cfg);
        auto rep = compare_graph_limit(table, gvals);
        REQUIRE(rep.entries.size() == 1);
        const auto& e = rep.entries[0];
        CHECK(e.k == 1);
        CHECK(e.graph_eigenvalue == doctest::Approx(std::numbers::pi / 4.0));
        CHECK(e.rescaled.size() == 3);
        CHECK(e.rel_gap_smallest_s < 0.35);
        CHECK(e.monotone_approach);
    }

    SUBCASE("svg plot emits polylines") {
        std::ostringstream os;
        write_sweep_svg(table, os);
        CHECK(os.str().find("<svg") != std::string::npos);
        CHECK(os.str().find("<polyline") != std::string::npos);
    }
}

TEST_CASE("sweep of an empty grid is empty") {
    auto cfg = dumbbell("[1e-2]");
    cfg.s_grid.clear();
    auto table = sweep(cfg);
    CHECK(table.rows.empty());
}

TEST_CASE("parallel and serial sweeps agree bitwise") {
    auto cfg = dumbbell("[1e-2, 2e-3]");
    auto serial = sweep(cfg, 42, 1);
    auto parallel = sweep(cfg, 42, 4);
    CHECK(sweep_to_csv(serial) == sweep_to_csv(parallel));
}

TEST_CASE("csv parser rejects malformed input") {
    CHECK_THROWS_AS(sweep_from_csv(""), validation_error);
    CHECK_THROWS_AS(sweep_from_csv("x,y\n1,2\n"), validation_error);
    CHECK_THROWS_AS(sweep_from_csv("s,lambda0\n0.5\n"), validation_error);
}
