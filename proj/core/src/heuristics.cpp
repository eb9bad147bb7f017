#include "delaycast/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "delaycast/error.hpp"
#include "delaycast/neighbor_index.hpp"
#include "delaycast/stats.hpp"

namespace delaycast {

namespace {

// Equal-width-histogram mutual information of (x_j, x_{j-tau}) in nats.
// Bin edges span the full series range so the curve is affine-invariant.
double histogram_lag_mi(const std::vector<double>& x, int tau, int bins, double lo, double width) {
    const int n_pairs = static_cast<int>(x.size()) - tau;
    std::vector<int> joint(static_cast<std::size_t>(bins) * bins, 0);
    std::vector<int> ma(bins, 0), mb(bins, 0);

    auto bin_of = [&](double v) {
        int b = static_cast<int>((v - lo) / width);
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        return b;
    };
    for (int j = tau; j < static_cast<int>(x.size()); ++j) {
        const int a = bin_of(x[j]);
        const int b = bin_of(x[j - tau]);
        ++joint[static_cast<std::size_t>(a) * bins + b];
        ++ma[a];
        ++mb[b];
    }

    double mi = 0.0;
    const double inv = 1.0 / n_pairs;
    for (int a = 0; a < bins; ++a) {
        if (ma[a] == 0) continue;
        for (int b = 0; b < bins; ++b) {
            const int c = joint[static_cast<std::size_t>(a) * bins + b];
            if (c == 0 || mb[b] == 0) continue;
            const double pj = c * inv;
            mi += pj * std::log(pj / ((ma[a] * inv) * (mb[b] * inv)));
        }
    }
    return mi;
}

} // namespace

HeuristicResult ami_first_minimum_tau(const TimeSeries& ts, int tau_max, int bins,
                                      double noise_multiplier) {
    if (tau_max < 2) throw std::invalid_argument("ami_first_minimum_tau needs tau_max >= 2");
    if (bins < 2) throw std::invalid_argument("ami_first_minimum_tau needs bins >= 2");
    if (ts.length() <= tau_max + 1) {
        throw data_error("series too short for tau_max = " + std::to_string(tau_max));
    }

    const auto& x = ts.values();
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (range == 0.0) throw data_error("constant series has no mutual-information structure");
    const double width = range / bins;

    HeuristicResult result;
    result.diagnostic_curve.reserve(tau_max);
    for (int tau = 1; tau <= tau_max; ++tau) {
        result.diagnostic_curve.emplace_back(tau, histogram_lag_mi(x, tau, bins, lo, width));
    }

    // First minimum with prominence: track the running minimum and accept it
    // once the curve has risen clear of it by `rise` without first making a
    // new low. Estimation-noise dips are never cleared by that margin, and a
    // curve that decays straight to the bias floor (the chaotic-map
    // pathology) never rises at all, so it is reported as failure.
    const int min_pairs = ts.length() - tau_max;
    const double rise = noise_multiplier * (bins - 1.0) * (bins - 1.0) / (2.0 * min_pairs);

    int best_tau = -1;
    double best_value = std::numeric_limits<double>::infinity();
    for (const auto& [tau, value] : result.diagnostic_curve) {
        if (value < best_value) {
            best_value = value;
            best_tau = tau;
        } else if (best_tau < tau && value >= best_value + rise) {
            result.status = HeuristicResult::Status::ok;
            result.value = best_tau;
            return result;
        }
    }
    result.status = HeuristicResult::Status::failed;
    return result;
}

HeuristicResult fnn_dimension(const TimeSeries& ts, int tau, int m_max, double rtol, double atol,
                              double threshold, int theiler) {
    if (tau < 1) throw std::invalid_argument("fnn_dimension needs tau >= 1");
    if (m_max < 2) throw std::invalid_argument("fnn_dimension needs m_max >= 2");
    const auto& x = ts.values();
    const int n = ts.length();
    if (n <= m_max * tau + 1) {
        throw data_error("series too short for (m_max=" + std::to_string(m_max) + ", tau=" +
                         std::to_string(tau) + ")");
    }

    const double sigma = sample_stddev(x);

    HeuristicResult result;
    result.diagnostic_curve.reserve(m_max);

    for (int m = 1; m <= m_max; ++m) {
        // The appended coordinate sits one tau into the future: a neighbor
        // pair is re-examined inside the (m+1)-dimensional reconstruction
        // based one step later, which is the side that matters for
        // forecasting (the past side of a dissipative attractor separates at
        // the large backward rate and would flag true neighbors).
        const int first = (m - 1) * tau;
        const int rows = n - first - tau;
        RowMatrix points(rows, m);
        for (int r = 0; r < rows; ++r) {
            const int j = first + r;
            auto row = points.row(r);
            for (int c = 0; c < m; ++c) row[c] = x[j - c * tau];
        }
        const NeighborIndex index(points);

        const int window = theiler >= 0 ? theiler : 2 * tau * m;
        long false_count = 0;
        std::vector<Neighbor> nn;
        for (int r = 0; r < rows; ++r) {
            const int e_lo = std::max(0, r - window);
            const int e_hi = std::min(rows - 1, r + window);
            if (e_hi - e_lo + 1 >= rows) break; // window swallowed everything
            index.knn(points.row(r), 1, IdInterval{e_lo, e_hi}, nn);
            const int s = nn[0].id;
            const double d = nn[0].distance;
            const double appended = std::abs(x[first + r + tau] - x[first + s + tau]);
            // Relative criterion written multiplicatively so zero-distance
            // (exactly repeated) neighbors stay well defined; separations at
            // rounding scale are never false.
            const bool relative_false = appended > rtol * d && appended > 1e-8 * sigma;
            const bool absolute_false = std::max(d, appended) > atol * sigma;
            if (relative_false || absolute_false) ++false_count;
        }
        const double fraction = rows > 0 ? static_cast<double>(false_count) / rows : 1.0;
        result.diagnostic_curve.emplace_back(m, fraction);
    }

    for (const auto& [m, fraction] : result.diagnostic_curve) {
        if (fraction < threshold) {
            result.status = HeuristicResult::Status::ok;
            result.value = m;
            return result;
        }
    }
    result.status = HeuristicResult::Status::failed;
    return result;
}

} // namespace delaycast
