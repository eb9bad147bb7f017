#include <doctest.h>

#include <algorithm>
#include <vector>

#include "delaycast/error.hpp"
#include "delaycast/neighbor_index.hpp"
#include "test_util.hpp"

using namespace delaycast;

namespace {

// Linear-scan reference: identical contract, no tree.
std::vector<Neighbor> brute_knn(const RowMatrix& pts, std::span<const double> q, int k,
                                IdInterval exclude) {
    std::vector<Neighbor> all;
    for (int i = 0; i < pts.rows(); ++i) {
        if (exclude.contains(i)) continue;
        all.push_back({i, chebyshev_distance(q, pts.row(i))});
    }
    std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
    });
    all.resize(k);
    return all;
}

long brute_count(const RowMatrix& pts, std::span<const double> q, double r, bool inclusive,
                 IdInterval exclude) {
    long n = 0;
    for (int i = 0; i < pts.rows(); ++i) {
        if (exclude.contains(i)) continue;
        const double d = chebyshev_distance(q, pts.row(i));
        if (inclusive ? d <= r : d < r) ++n;
    }
    return n;
}

RowMatrix line_points(std::vector<double> xs) {
    const int n = static_cast<int>(xs.size());
    return RowMatrix(n, 1, std::move(xs));
}

} // namespace

TEST_CASE("NeighborIndex basic contracts") {
    SUBCASE("single point") {
        const NeighborIndex index(line_points({2.5}));
        CHECK(index.size() == 1);
        const auto nn = index.knn(std::vector<double>{0.0}, 1);
        CHECK(nn[0].id == 0);
        CHECK(nn[0].distance == 2.5);
    }
    SUBCASE("duplicates are distinct entries") {
        const NeighborIndex index(line_points({1.0, 1.0, 1.0}));
        CHECK(index.size() == 3);
        const auto nn = index.knn(std::vector<double>{1.0}, 2, IdInterval::single(0));
        CHECK(nn[0].id == 1);
        CHECK(nn[1].id == 2);
        CHECK(nn[0].distance == 0.0);
    }
    SUBCASE("points 0,1,3 on a line") {
        const NeighborIndex index(line_points({0.0, 1.0, 3.0}));
        const auto nn = index.knn(std::vector<double>{0.0}, 1, IdInterval::single(0));
        CHECK(nn[0].id == 1);
        CHECK(nn[0].distance == 1.0);
    }
    SUBCASE("k = R-1 with self-exclusion returns everything else") {
        const auto pts = testutil::random_points(30, 2, 7);
        const NeighborIndex index(pts);
        const auto nn = index.knn(pts.row(4), 29, IdInterval::single(4));
        CHECK(nn.size() == 29);
        std::vector<bool> seen(30, false);
        for (const auto& n : nn) seen[n.id] = true;
        CHECK(!seen[4]);
        CHECK(std::count(seen.begin(), seen.end(), true) == 29);
    }
    SUBCASE("k too large throws") {
        const NeighborIndex index(line_points({0.0, 1.0}));
        CHECK_THROWS_AS(index.knn(std::vector<double>{0.0}, 2, IdInterval::single(0)),
                        std::invalid_argument);
    }
    SUBCASE("empty input throws") {
        CHECK_THROWS_AS((void)NeighborIndex(RowMatrix(0, 2)), data_error);
    }
    SUBCASE("non-finite coordinate throws") {
        RowMatrix bad(2, 1);
        bad(0, 0) = 1.0;
        bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS((void)NeighborIndex{bad}, numerical_error);
    }
}

TEST_CASE("count_within basic contracts") {
    const NeighborIndex index(line_points({0.0, 1.0, 2.0}));
    SUBCASE("radius 0 inclusive, no duplicates, self excluded") {
        CHECK(index.count_within(std::vector<double>{1.0}, 0.0, true, IdInterval::single(1)) == 0);
    }
    SUBCASE("radius 1 inclusive around the middle point") {
        CHECK(index.count_within(std::vector<double>{1.0}, 1.0, true, IdInterval::single(1)) == 2);
    }
    SUBCASE("exclusive boundary drops the shell") {
        CHECK(index.count_within(std::vector<double>{1.0}, 1.0, false, IdInterval::single(1)) == 0);
    }
    SUBCASE("negative radius throws") {
        CHECK_THROWS_AS(index.count_within(std::vector<double>{1.0}, -0.5, true),
                        std::invalid_argument);
    }
}

TEST_CASE("knn matches the brute-force oracle on random point sets") {
    const auto pts = testutil::random_points(500, 3, 11);
    const NeighborIndex index(pts);
    const auto queries = testutil::random_points(100, 3, 12);
    for (int k : {1, 4, 10}) {
        for (int qi = 0; qi < queries.rows(); ++qi) {
            const auto got = index.knn(queries.row(qi), k);
            const auto want = brute_knn(pts, queries.row(qi), k, {});
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].id == want[i].id);
                CHECK(got[i].distance == want[i].distance);
            }
        }
    }
}

TEST_CASE("knn with exclusion intervals matches the oracle") {
    const auto pts = testutil::random_points(200, 2, 21);
    const NeighborIndex index(pts);
    for (int qi = 0; qi < 50; ++qi) {
        const IdInterval exclude{qi, qi + 20};
        const auto got = index.knn(pts.row(qi), 5, exclude);
        const auto want = brute_knn(pts, pts.row(qi), 5, exclude);
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].id == want[i].id);
            CHECK(got[i].distance == want[i].distance);
        }
    }
}

TEST_CASE("count_within matches the brute-force oracle") {
    const auto pts = testutil::random_points(1000, 3, 31);
    const NeighborIndex index(pts);
    const auto queries = testutil::random_points(100, 3, 32);
    const auto radii = testutil::uniform_values(100, 33, 0.0, 0.6);
    for (int qi = 0; qi < queries.rows(); ++qi) {
        const double r = radii[qi];
        for (bool inclusive : {true, false}) {
            CHECK(index.count_within(queries.row(qi), r, inclusive) ==
                  brute_count(pts, queries.row(qi), r, inclusive, {}));
            const IdInterval exclude{qi * 3, qi * 3 + 5};
            CHECK(index.count_within(queries.row(qi), r, inclusive, exclude) ==
                  brute_count(pts, queries.row(qi), r, inclusive, exclude));
        }
    }
}

TEST_CASE("count_within is monotone in radius; inclusive >= exclusive") {
    const auto pts = testutil::random_points(300, 2, 41);
    const NeighborIndex index(pts);
    const std::vector<double> q{0.4, 0.6};
    long prev = -1;
    for (double r = 0.0; r <= 1.0; r += 0.05) {
        const long inc = index.count_within(q, r, true);
        const long exc = index.count_within(q, r, false);
        CHECK(inc >= exc);
        CHECK(inc >= prev);
        prev = inc;
    }
}

TEST_CASE("scaling coordinates scales distances and keeps neighbor ids") {
    const auto pts = testutil::random_points(400, 3, 51);
    RowMatrix doubled = pts;
    for (double& v : doubled.data()) v *= 2.0;
    RowMatrix tripled = pts;
    for (double& v : tripled.data()) v *= 3.0;

    const NeighborIndex base(pts);
    const NeighborIndex x2(doubled);
    const NeighborIndex x3(tripled);

    const auto queries = testutil::random_points(30, 3, 52);
    std::vector<double> q2(3), q3(3);
    for (int qi = 0; qi < queries.rows(); ++qi) {
        const auto q = queries.row(qi);
        for (int c = 0; c < 3; ++c) {
            q2[c] = 2.0 * q[c];
            q3[c] = 3.0 * q[c];
        }
        const auto a = base.knn(q, 6);
        const auto b = x2.knn(q2, 6);
        const auto c = x3.knn(q3, 6);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(b[i].id == a[i].id);
            CHECK(b[i].distance == 2.0 * a[i].distance); // exact for a binary scale
            CHECK(c[i].id == a[i].id);
        }
    }
}
