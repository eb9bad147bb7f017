#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "delaycast/dynamics.hpp"
#include "delaycast/error.hpp"
#include "delaycast/forecast.hpp"
#include "delaycast/stats.hpp"
#include "delaycast/sweep.hpp"
#include "test_util.hpp"

using namespace delaycast;

namespace {

TimeSeries small_chaotic_trace() {
    SystemParams params;
    auto proto = default_protocol(BenchmarkSystem::henon, params);
    proto.total_steps = 2500;
    proto.discard = 500;
    return generate_benchmark_trace(BenchmarkSystem::henon, proto, params);
}

SweepGrid synthetic_grid(const RowMatrix& spi_values, std::optional<RowMatrix> mase_values) {
    SweepGrid grid;
    for (int i = 0; i < spi_values.rows(); ++i) grid.m_values.push_back(i + 1);
    for (int j = 0; j < spi_values.cols(); ++j) grid.tau_values.push_back(j + 1);
    grid.p = 1;
    grid.spi = spi_values;
    grid.mase = std::move(mase_values);
    return grid;
}

} // namespace

TEST_CASE("spearman correlation basics") {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2, 4, 6, 8, 10};
    CHECK(spearman_correlation(a, b) == doctest::Approx(1.0));
    const std::vector<double> c{5, 4, 3, 2, 1};
    CHECK(spearman_correlation(a, c) == doctest::Approx(-1.0));
    const std::vector<double> tied{1, 1, 2, 2, 3};
    CHECK(std::abs(spearman_correlation(tied, tied) - 1.0) < 1e-12);
}

TEST_CASE("grid_sweep: a 1x1 grid equals the direct calls") {
    const auto ts = small_chaotic_trace();
    SweepOptions opts;
    const auto grid = grid_sweep(ts, {2}, {1}, 1, true, opts);
    REQUIRE(grid.failures.empty());

    SpiRequest req;
    req.params = {2, 1, 1};
    req.k = opts.k;
    CHECK(grid.spi(0, 0) == spi(ts, req).value);

    const int n = static_cast<int>(ts.length() * opts.train_fraction);
    const auto direct = rolling_forecast(ts, {2, 1, 1}, n, ts.length() - n, opts.forecast);
    CHECK((*grid.mase)(0, 0) == direct.mase);
}

TEST_CASE("grid_sweep records failures per cell without aborting") {
    const auto ts = small_chaotic_trace(); // length 2000
    const auto grid = grid_sweep(ts, {2, 3000}, {1, 2}, 1, false, {});
    CHECK(grid.failures.size() == 2); // both tau cells of m=3000 overflow the series
    int ok_cells = 0;
    for (int mi = 0; mi < 2; ++mi) {
        for (int ti = 0; ti < 2; ++ti) {
            if (grid.cell_ok(mi, ti)) ++ok_cells;
        }
    }
    CHECK(ok_cells + static_cast<int>(grid.failures.size()) == 4);
    for (const auto& f : grid.failures) CHECK(f.m == 3000);
}

TEST_CASE("grid_sweep results are identical for 1 worker and 4 workers") {
    const auto ts = small_chaotic_trace();
    SweepOptions serial;
    serial.threads = 1;
    SweepOptions parallel;
    parallel.threads = 4;
    const auto a = grid_sweep(ts, {1, 2, 3}, {1, 2, 3}, 1, true, serial);
    const auto b = grid_sweep(ts, {1, 2, 3}, {1, 2, 3}, 1, true, parallel);
    CHECK(a.spi.data() == b.spi.data());
    CHECK(a.mase->data() == b.mase->data());
    CHECK(a.failures.size() == b.failures.size());
}

TEST_CASE("select_spi_optimal") {
    SUBCASE("unique maximum is the global argmax") {
        RowMatrix spi(2, 2, {1.0, 2.0, 3.0, 9.0});
        const auto sel = select_spi_optimal(synthetic_grid(spi, {}), 0.05);
        CHECK(sel.m == 2);
        CHECK(sel.tau == 2);
        CHECK(sel.value == 9.0);
        CHECK(sel.rule == Selection::Rule::global_argmax);
    }
    SUBCASE("plateau prefers the smallest m") {
        // Rows are m = 1..3; cells (m=2, tau=1) and (m=3, tau=2) are within 5%.
        RowMatrix spi(3, 2, {0.1, 0.2, 9.7, 0.3, 0.4, 10.0});
        const auto sel = select_spi_optimal(synthetic_grid(spi, {}), 0.05);
        CHECK(sel.m == 2);
        CHECK(sel.tau == 1);
        CHECK(sel.rule == Selection::Rule::plateau_min_m);
    }
    SUBCASE("plateau fraction zero reduces to deterministic argmax") {
        RowMatrix spi(2, 2, {5.0, 5.0, 5.0, 5.0});
        const auto sel = select_spi_optimal(synthetic_grid(spi, {}), 0.0);
        CHECK(sel.m == 1);
        CHECK(sel.tau == 1);
    }
    SUBCASE("negative maxima fall back to the argmax cell") {
        RowMatrix spi(1, 3, {-0.5, -0.1, -0.9});
        const auto sel = select_spi_optimal(synthetic_grid(spi, {}), 0.05);
        CHECK(sel.tau == 2);
        CHECK(sel.value == -0.1);
    }
    SUBCASE("all-failed grid throws") {
        RowMatrix spi(1, 2);
        spi(0, 0) = spi(0, 1) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(select_spi_optimal(synthetic_grid(spi, {}), 0.05), data_error);
    }
}

TEST_CASE("antisymmetry_score") {
    SUBCASE("mase = -spi scores exactly -1") {
        RowMatrix spi(5, 4);
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (double& v : spi.data()) v = dist(rng);
        RowMatrix mase_m = spi;
        for (double& v : mase_m.data()) v = -v;
        const auto grid = synthetic_grid(spi, mase_m);
        CHECK(antisymmetry_score(grid, 1) == doctest::Approx(-1.0));
    }
    SUBCASE("independent values score near zero") {
        RowMatrix spi(12, 10);
        RowMatrix mase_m(12, 10);
        std::mt19937_64 rng(123);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (double& v : spi.data()) v = dist(rng);
        for (double& v : mase_m.data()) v = dist(rng);
        const auto grid = synthetic_grid(spi, mase_m);
        CHECK(std::abs(antisymmetry_score(grid, 1)) < 0.2);
    }
    SUBCASE("score stays within [-1, 1] and respects the m filter") {
        RowMatrix spi(4, 5);
        RowMatrix mase_m(4, 5);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (double& v : spi.data()) v = dist(rng);
        for (double& v : mase_m.data()) v = dist(rng);
        const auto grid = synthetic_grid(spi, mase_m);
        const double score = antisymmetry_score(grid, 3);
        CHECK(score >= -1.0);
        CHECK(score <= 1.0);
        CHECK_THROWS_AS(antisymmetry_score(grid, 4), data_error); // only 5 cells remain
    }
    SUBCASE("grid without mase is rejected") {
        RowMatrix spi(4, 4, std::vector<double>(16, 1.0));
        CHECK_THROWS_AS(antisymmetry_score(synthetic_grid(spi, {}), 1), std::invalid_argument);
    }
}

TEST_CASE("horizon_curves emits the full cross product with per-point errors") {
    const auto ts = small_chaotic_trace();
    HorizonSpec spec;
    spec.vary = HorizonSpec::Vary::tau;
    spec.fixed = 2;
    spec.varied = {1, 2, 2500}; // the last tau cannot fit
    spec.p_values = {1, 2};
    const auto points = horizon_curves(ts, spec, {});
    REQUIRE(points.size() == 6);
    int failed = 0;
    for (const auto& pt : points) {
        CHECK(pt.m == 2);
        if (!pt.error.empty()) ++failed;
    }
    CHECK(failed == 2); // tau = 2500 at both horizons

    // determinism
    const auto again = horizon_curves(ts, spec, {});
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].spi == again[i].spi);
    }
}

TEST_CASE("data_length_curve computes prefixes deterministically") {
    const auto ts = small_chaotic_trace();
    const auto points = data_length_curve(ts, {500, 1000, 2000}, {1, 2}, 1, 1, {});
    REQUIRE(points.size() == 6);
    for (const auto& pt : points) CHECK(pt.error.empty());

    const auto again = data_length_curve(ts, {500, 1000, 2000}, {1, 2}, 1, 1, {});
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].spi == again[i].spi);
    }
    CHECK_THROWS_AS(data_length_curve(ts, {2000, 500}, {1}, 1, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(data_length_curve(ts, {500, 50000}, {1}, 1, 1, {}), data_error);
}
