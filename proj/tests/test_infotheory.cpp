#include <doctest.h>

#include <cmath>
#include <vector>

#include "delaycast/error.hpp"
#include "delaycast/infotheory.hpp"
#include "delaycast/timeseries.hpp"
#include "test_util.hpp"

using namespace delaycast;

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

double gaussian_mi(double rho) { return -0.5 * std::log(1.0 - rho * rho); }

} // namespace

TEST_CASE("digamma matches known values and its recurrence") {
    CHECK(digamma(1.0) == doctest::Approx(-kEulerGamma).epsilon(1e-10));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - kEulerGamma).epsilon(1e-10));
    // psi(0.5) = -gamma - 2 ln 2
    CHECK(digamma(0.5) == doctest::Approx(-kEulerGamma - 2.0 * std::log(2.0)).epsilon(1e-10));
    CHECK(digamma(7.3) - digamma(6.3) == doctest::Approx(1.0 / 6.3).epsilon(1e-10));
    for (double x : {0.1, 0.9, 1.5, 3.0, 12.0, 1234.5}) {
        CHECK(digamma(x + 1.0) - digamma(x) == doctest::Approx(1.0 / x).epsilon(1e-9));
    }
    CHECK_THROWS_AS(digamma(0.0), std::invalid_argument);
    CHECK_THROWS_AS(digamma(-1.0), std::invalid_argument);
}

TEST_CASE("ksg_mi: independent samples give IM near zero") {
    RowMatrix x(10000, 1, testutil::uniform_values(10000, 101));
    RowMatrix y(10000, 1, testutil::uniform_values(10000, 202));
    const auto est = ksg_mi(x, y, 4);
    CHECK(std::abs(est.value) < 0.03);
    CHECK(est.n_samples == 10000);
    CHECK(est.k_or_r == 4.0);
}

TEST_CASE("ksg_mi: bivariate Gaussian oracle") {
    SUBCASE("rho = 0.6") {
        const auto [x, y] = testutil::correlated_gaussian(10000, 0.6, 303);
        CHECK(std::abs(ksg_mi(x, y, 4).value - gaussian_mi(0.6)) < 0.02);
    }
    SUBCASE("rho = 0.9") {
        const auto [x, y] = testutil::correlated_gaussian(10000, 0.9, 404);
        CHECK(std::abs(ksg_mi(x, y, 4).value - gaussian_mi(0.9)) < 0.03);
    }
}

TEST_CASE("ksg_mi is symmetric in its arguments, bit for bit") {
    const auto [x, y] = testutil::correlated_gaussian(3000, 0.5, 505);
    CHECK(ksg_mi(x, y, 4).value == ksg_mi(y, x, 4).value);
    // also with a multivariate block
    RowMatrix x2 = hcat(x, y);
    RowMatrix y2(x.rows(), 1, testutil::gaussian_values(x.rows(), 606));
    CHECK(ksg_mi(x2, y2, 5).value == ksg_mi(y2, x2, 5).value);
}

TEST_CASE("ksg_mi is invariant under a shared affine map, bit for bit") {
    const auto [x, y] = testutil::correlated_gaussian(3000, 0.6, 707);
    RowMatrix xt = x;
    RowMatrix yt = y;
    for (double& v : xt.data()) v = 4.0 * v + 3.0;
    for (double& v : yt.data()) v = 4.0 * v + 3.0;
    CHECK(ksg_mi(xt, yt, 4).value == ksg_mi(x, y, 4).value);
}

TEST_CASE("ksg_mi is robust to k for k >= 4") {
    const auto [x, y] = testutil::correlated_gaussian(10000, 0.6, 808);
    std::vector<double> estimates;
    for (int k : {4, 6, 8, 10}) estimates.push_back(ksg_mi(x, y, k).value);
    const auto [lo, hi] = std::minmax_element(estimates.begin(), estimates.end());
    CHECK(*hi - *lo < 0.03);
}

TEST_CASE("ksg_mi error shrinks with sample size") {
    double err_small = 0.0, err_large = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
        const auto [xs, ys] = testutil::correlated_gaussian(4000, 0.6, 900 + seed);
        err_small += std::abs(ksg_mi(xs, ys, 4).value - gaussian_mi(0.6));
        const auto [xl, yl] = testutil::correlated_gaussian(40000, 0.6, 950 + seed);
        err_large += std::abs(ksg_mi(xl, yl, 4).value - gaussian_mi(0.6));
    }
    CHECK(err_large / 10.0 < err_small / 10.0);
}

TEST_CASE("ksg_mi input validation and degenerate data") {
    RowMatrix x(3, 1, {1.0, 2.0, 3.0});
    RowMatrix y(3, 1, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS(ksg_mi(x, y, 3), data_error); // needs n > k
    RowMatrix flat(10, 1, std::vector<double>(10, 7.0));
    CHECK_THROWS_AS(ksg_mi(flat, flat, 2), numerical_error);
}

TEST_CASE("ksg_mi jitters duplicate rows deterministically") {
    // Coarse quantization manufactures exact duplicates.
    auto vx = testutil::uniform_values(2000, 111);
    auto vy = testutil::uniform_values(2000, 222);
    for (double& v : vx) v = std::round(v * 20.0) / 20.0;
    for (double& v : vy) v = std::round(v * 20.0) / 20.0;
    RowMatrix x(2000, 1, vx), y(2000, 1, vy);

    const auto a = ksg_mi(x, y, 4);
    const auto b = ksg_mi(x, y, 4);
    CHECK(a.value == b.value); // same seed, same jitter, same estimate
    EstimatorOptions other;
    other.jitter_seed = 77;
    const auto c = ksg_mi(x, y, 4, other);
    CHECK(std::abs(c.value - a.value) < 0.05); // different seed, same ballpark
}

TEST_CASE("box_kernel_mi") {
    SUBCASE("bandwidth beyond the data diameter gives exactly zero") {
        RowMatrix x(5, 1, {0.0, 0.1, 0.2, 0.3, 0.4});
        RowMatrix y(5, 1, {1.0, 0.8, 0.6, 0.4, 0.2});
        CHECK(box_kernel_mi(x, y, 10.0).value == 0.0);
    }
    SUBCASE("four hand-placed points at r = 0.5") {
        // Pairwise joint max-norm distances: only (0,1) at 0.4 and (2,3) at
        // exactly 0.5 fall within the kernel, so every local joint count is 2
        // and every marginal count is 2 of 4: the local ratio is
        // 0.5/(0.5*0.5) = 2 at all four points.
        RowMatrix x(4, 1, {0.0, 0.4, 1.0, 1.5});
        RowMatrix y(4, 1, {0.0, 0.1, 1.2, 1.4});
        const auto est = box_kernel_mi(x, y, 0.5);
        CHECK(est.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
        CHECK(est.k_or_r == 0.5);
    }
    SUBCASE("independent uniforms estimate near zero") {
        RowMatrix x(5000, 1, testutil::uniform_values(5000, 333));
        RowMatrix y(5000, 1, testutil::uniform_values(5000, 444));
        CHECK(std::abs(box_kernel_mi(x, y, 0.1).value) < 0.1);
    }
}

TEST_CASE("knn_entropy oracles") {
    SUBCASE("uniform on [0,1] has zero entropy") {
        RowMatrix x(10000, 1, testutil::uniform_values(10000, 555));
        CHECK(std::abs(knn_entropy(x, 4)) < 0.05);
    }
    SUBCASE("uniform on [0,2] has entropy ln 2") {
        RowMatrix x(10000, 1, testutil::uniform_values(10000, 666, 0.0, 2.0));
        CHECK(std::abs(knn_entropy(x, 4) - std::log(2.0)) < 0.05);
    }
    SUBCASE("standard Gaussian has entropy 0.5 ln(2 pi e)") {
        RowMatrix x(10000, 1, testutil::gaussian_values(10000, 777));
        CHECK(std::abs(knn_entropy(x, 4) - 0.5 * std::log(2.0 * M_PI * M_E)) < 0.05);
    }
}

TEST_CASE("knn_entropy shift and scale behavior") {
    RowMatrix x(4000, 1, testutil::gaussian_values(4000, 888));
    const double h = knn_entropy(x, 4);

    RowMatrix shifted = x;
    for (double& v : shifted.data()) v += 17.25;
    CHECK(knn_entropy(shifted, 4) == doctest::Approx(h).epsilon(1e-9));

    RowMatrix scaled = x;
    for (double& v : scaled.data()) v *= 2.0;
    CHECK(knn_entropy(scaled, 4) == doctest::Approx(h + std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("spi of i.i.d. noise is near zero") {
    TimeSeries noise(testutil::gaussian_values(50000, 999), 1.0, "noise",
                     TimeSeries::Source::synthetic);
    SpiRequest req;
    req.params = {3, 2, 1};
    req.k = 4;
    CHECK(std::abs(spi(noise, req).value) < 0.05);
}

TEST_CASE("r_of_p matches the Gaussian AR(1) closed form") {
    const double rho = 0.8;
    TimeSeries chain(testutil::ar1_values(50000, rho, 1234), 1.0, "ar1",
                     TimeSeries::Source::synthetic);
    const auto points = r_of_p(chain, 1, 1, 3, 4);
    REQUIRE(points.size() == 3);
    const double h = 0.5 * std::log(2.0 * M_PI * M_E); // unit stationary variance
    for (const auto& pt : points) {
        const double mi = -0.5 * std::log(1.0 - std::pow(rho, 2.0 * pt.p));
        REQUIRE(pt.ratio.has_value());
        CHECK(*pt.ratio == doctest::Approx(mi / h).epsilon(0.10));
    }
}

TEST_CASE("r_of_p of i.i.d. noise is near zero for all p") {
    TimeSeries noise(testutil::gaussian_values(20000, 4321), 1.0, "noise",
                     TimeSeries::Source::synthetic);
    for (const auto& pt : r_of_p(noise, 2, 1, 4, 4)) {
        REQUIRE(pt.ratio.has_value());
        CHECK(std::abs(*pt.ratio) < 0.05);
    }
}

TEST_CASE("co-information and multi-information") {
    SUBCASE("mutually independent variables give zero for both") {
        RowMatrix x(20000, 1, testutil::gaussian_values(20000, 1111));
        RowMatrix y(20000, 1, testutil::gaussian_values(20000, 2222));
        RowMatrix z(20000, 1, testutil::gaussian_values(20000, 3333));
        CHECK(std::abs(co_information(x, y, z, 4)) < 0.05);
        CHECK(std::abs(multi_information(x, y, z, 4)) < 0.05);
    }
    SUBCASE("Gaussian triple with pairwise correlation 0.5") {
        // Cholesky factor of the [[1,.5,.5],[.5,1,.5],[.5,.5,1]] correlation.
        const double l21 = 0.5, l22 = std::sqrt(0.75);
        const double l31 = 0.5, l32 = 0.25 / l22, l33 = std::sqrt(1.0 - 0.25 - l32 * l32);
        const int n = 20000;
        const auto z1 = testutil::gaussian_values(n, 4444);
        const auto z2 = testutil::gaussian_values(n, 5555);
        const auto z3 = testutil::gaussian_values(n, 6666);
        RowMatrix x(n, 1), y(n, 1), z(n, 1);
        for (int i = 0; i < n; ++i) {
            x(i, 0) = z1[i];
            y(i, 0) = l21 * z1[i] + l22 * z2[i];
            z(i, 0) = l31 * z1[i] + l32 * z2[i] + l33 * z3[i];
        }
        // det of the correlation matrix is 0.5; multi-information is
        // -0.5 ln det. Co-information follows from pairwise terms.
        const double multi_expect = -0.5 * std::log(0.5);
        const double i_xy = gaussian_mi(0.5);
        const double i_x_yz = 0.5 * std::log(0.75 / 0.5); // det(Sigma_YZ) sigma_X^2 / det(Sigma)
        const double co_expect = 2.0 * i_xy - i_x_yz;
        CHECK(std::abs(multi_information(x, y, z, 4) - multi_expect) < 0.05);
        CHECK(std::abs(co_information(x, y, z, 4) - co_expect) < 0.05);
    }
    SUBCASE("a duplicated variable drives multi-information above co-information") {
        const auto [x, y] = testutil::correlated_gaussian(5000, 0.5, 7777);
        CHECK(multi_information(x, y, x, 4) > co_information(x, y, x, 4));
    }
}

TEST_CASE("estimator results do not depend on the worker count") {
    const auto [x, y] = testutil::correlated_gaussian(4000, 0.6, 8888);
    EstimatorOptions serial;
    serial.threads = 1;
    EstimatorOptions parallel;
    parallel.threads = 4;
    CHECK(ksg_mi(x, y, 4, serial).value == ksg_mi(x, y, 4, parallel).value);
    CHECK(knn_entropy(x, 4, serial) == knn_entropy(x, 4, parallel));
}
