#ifndef DELAYCAST_HEURISTICS_HPP
#define DELAYCAST_HEURISTICS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "delaycast/timeseries.hpp"

namespace delaycast {

/// Outcome of a classical parameter heuristic. status == failed leaves value
/// empty; the diagnostic curve is always populated so callers can inspect why.
struct HeuristicResult {
    enum class Status { ok, failed };

    Status status = Status::failed;
    std::optional<int> value;
    std::vector<std::pair<int, double>> diagnostic_curve; // (parameter, statistic)
};

/// Fraser-Swinney style delay selection: the first minimum of the
/// equal-width-histogram mutual information between x_j and x_{j-tau}.
///
/// A minimum counts only once the curve rises clear of it by
/// noise_multiplier * (bins-1)^2 / (2 * pairs) nats (the plug-in estimator's
/// bias scale) before making a new low. Curves that decay to the bias floor
/// with no such rebound, the chaotic-map pathology, report failure.
HeuristicResult ami_first_minimum_tau(const TimeSeries& ts, int tau_max, int bins = 32,
                                      double noise_multiplier = 5.0);

/// False-nearest-neighbor dimension selection: the smallest m whose fraction
/// of false neighbors drops below `threshold`. A neighbor is false when the
/// coordinate appended at dimension m+1 (one tau into the future) inflates
/// the pair's distance beyond rtol * (current distance) or pushes it past
/// atol * (series stddev).
///
/// theiler excludes temporally close rows (|base difference| <= theiler) from
/// the neighbor search; -1 resolves to 2 * tau * m at each dimension.
HeuristicResult fnn_dimension(const TimeSeries& ts, int tau, int m_max, double rtol = 10.0,
                              double atol = 2.0, double threshold = 0.001, int theiler = -1);

} // namespace delaycast

#endif
