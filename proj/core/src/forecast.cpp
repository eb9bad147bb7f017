#include "delaycast/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "delaycast/error.hpp"
#include "delaycast/neighbor_index.hpp"

namespace delaycast {

double mase(std::span<const double> predictions, std::span<const double> truth,
            std::span<const double> train) {
    const std::size_t k = predictions.size();
    const std::size_t n = train.size();
    if (k < 1 || truth.size() != k) {
        throw data_error("mase: predictions and truth must be equal-length and nonempty");
    }
    if (n < 2) throw data_error("mase: training signal needs at least 2 samples");

    double walk = 0.0;
    for (std::size_t j = 1; j < n; ++j) walk += std::abs(train[j] - train[j - 1]);
    const double denom = static_cast<double>(k) / static_cast<double>(n - 1) * walk;
    if (denom == 0.0) {
        throw numerical_error("mase undefined: constant training signal (zero random-walk error)");
    }

    double num = 0.0;
    for (std::size_t l = 0; l < k; ++l) num += std::abs(predictions[l] - truth[l]);
    return num / denom;
}

namespace {

int resolve_window(const ForecastConfig& config, const ReconstructionParams& params) {
    return config.exclusion_window >= 0 ? config.exclusion_window : params.span() + params.p;
}

} // namespace

double lma_predict_next(const DelayMatrix& matrix, std::span<const double> query,
                        int query_base_index, const ForecastConfig& config) {
    if (config.num_neighbors < 1) throw std::invalid_argument("num_neighbors must be >= 1");
    if (static_cast<int>(query.size()) != matrix.params.m) {
        throw std::invalid_argument("query dimension does not match the delay matrix");
    }
    const int window = resolve_window(config, matrix.params);

    // Rows with |base - query_base| < window are ineligible (window 0 keeps
    // everything, including an exact self row).
    struct Candidate {
        double distance;
        int row;
    };
    std::vector<Candidate> best;
    best.reserve(config.num_neighbors + 1);
    for (int r = 0; r < matrix.rows(); ++r) {
        if (std::abs(matrix.base_indices[r] - query_base_index) < window) continue;
        const double d = chebyshev_distance(query, matrix.vectors.row(r));
        const Candidate c{d, r};
        auto pos = std::lower_bound(best.begin(), best.end(), c, [](const Candidate& a, const Candidate& b) {
            return a.distance < b.distance || (a.distance == b.distance && a.row < b.row);
        });
        if (pos != best.end() || static_cast<int>(best.size()) < config.num_neighbors) {
            best.insert(pos, c);
            if (static_cast<int>(best.size()) > config.num_neighbors) best.pop_back();
        }
    }
    if (static_cast<int>(best.size()) < config.num_neighbors) {
        throw data_error("no valid analogues: exclusion window removed too many rows (" +
                         std::to_string(best.size()) + " of " + std::to_string(config.num_neighbors) +
                         " needed)");
    }
    double sum = 0.0;
    for (const auto& c : best) sum += matrix.targets[c.row];
    return sum / config.num_neighbors;
}

ForecastResult rolling_forecast(const TimeSeries& ts, const ReconstructionParams& params, int n,
                                int k, const ForecastConfig& config) {
    validate(params);
    if (config.num_neighbors < 1) throw std::invalid_argument("num_neighbors must be >= 1");
    if (n < 2 || k < 1 || n + k > ts.length()) {
        throw data_error("invalid split: need n >= 2, k >= 1, n + k <= length");
    }
    if (config.horizon_mode == ForecastConfig::HorizonMode::rolling_one_step && params.p != 1) {
        throw std::invalid_argument("rolling_one_step mode requires p == 1; use direct_p_step");
    }

    const auto& x = ts.values();
    const int m = params.m, tau = params.tau, p = params.p;
    const int first = params.span(); // smallest valid base index
    const int window = resolve_window(config, params);

    // Rows available to the model before any test sample is observed. The
    // model for test index l may use rows with base <= l - 2p (their targets
    // lie within the observed prefix up to l - p).
    const int initial_last = config.rebuild_every_step ? n - 2 * p : n - 1 - p;
    if (initial_last < first) {
        throw data_error("series too short: training prefix of " + std::to_string(n) +
                         " samples yields no delay rows for (m=" + std::to_string(m) +
                         ", tau=" + std::to_string(tau) + ", p=" + std::to_string(p) + ")");
    }

    const int tree_rows = initial_last - first + 1;
    RowMatrix points(tree_rows, m);
    for (int r = 0; r < tree_rows; ++r) {
        const int j = first + r;
        auto row = points.row(r);
        for (int c = 0; c < m; ++c) row[c] = x[j - c * tau];
    }
    const NeighborIndex tree(points);

    // Rows appended after the tree was built (model growth during the test).
    std::vector<double> extra_vectors;
    std::vector<double> extra_targets;
    int last_row_base = initial_last;

    std::vector<double> query(m);
    std::vector<Neighbor> tree_hits;
    std::vector<Neighbor> merged;

    ForecastResult result;
    result.params = params;
    result.config = config;
    result.predictions.reserve(k);
    result.truth.reserve(k);

    for (int step = 0; step < k; ++step) {
        const int l = n + step; // index being predicted
        const int q = l - p;    // base index of the query vector

        if (config.rebuild_every_step) {
            while (last_row_base < l - 2 * p) {
                ++last_row_base;
                const int j = last_row_base;
                for (int c = 0; c < m; ++c) extra_vectors.push_back(x[j - c * tau]);
                extra_targets.push_back(x[j + p]);
            }
        }

        for (int c = 0; c < m; ++c) query[c] = x[q - c * tau];

        // Exclusion in row-id space: rows with base > q - window. Only the
        // recent side can fall inside the window because every row base is
        // at most q - p.
        const int total_rows = last_row_base - first + 1;
        int excluded_from = total_rows; // first excluded row id
        if (window > 0) {
            excluded_from = std::max(0, q - window + 1 - first);
        }

        merged.clear();
        const int tree_admissible = std::min(excluded_from, tree_rows);
        if (tree_admissible > 0) {
            const int want = std::min(config.num_neighbors, tree_admissible);
            IdInterval exclude;
            if (excluded_from < tree_rows) exclude = {excluded_from, tree_rows - 1};
            tree.knn(query, want, exclude, tree_hits);
            merged.insert(merged.end(), tree_hits.begin(), tree_hits.end());
        }
        for (int r = tree_rows; r < std::min(total_rows, excluded_from); ++r) {
            const double* v = extra_vectors.data() + static_cast<std::size_t>(r - tree_rows) * m;
            merged.push_back({r, chebyshev_distance(query, {v, static_cast<std::size_t>(m)})});
        }
        std::sort(merged.begin(), merged.end(), [](const Neighbor& a, const Neighbor& b) {
            return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
        });
        if (static_cast<int>(merged.size()) < config.num_neighbors) {
            throw data_error("no valid analogues at test index " + std::to_string(l) +
                             ": exclusion window removed too many rows");
        }

        double sum = 0.0;
        for (int i = 0; i < config.num_neighbors; ++i) {
            const int r = merged[i].id;
            sum += r < tree_rows ? x[first + r + p] : extra_targets[r - tree_rows];
        }
        result.predictions.push_back(sum / config.num_neighbors);
        result.truth.push_back(x[l]);
    }

    result.mase = mase(result.predictions, result.truth, {x.data(), static_cast<std::size_t>(n)});
    return result;
}

} // namespace delaycast
