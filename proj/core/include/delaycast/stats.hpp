#ifndef DELAYCAST_STATS_HPP
#define DELAYCAST_STATS_HPP

#include <span>
#include <vector>

namespace delaycast {

double mean(std::span<const double> x);
double sample_stddev(std::span<const double> x);

/// Average ranks in [1, n], ties sharing the mean of their rank block.
std::vector<double> average_ranks(std::span<const double> x);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation (Pearson correlation of average ranks).
/// Throws std::invalid_argument on mismatched or too-short inputs.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

} // namespace delaycast

#endif
