#ifndef DELAYCAST_TIMESERIES_HPP
#define DELAYCAST_TIMESERIES_HPP

#include <string>
#include <utility>
#include <vector>

#include "delaycast/matrix.hpp"

namespace delaycast {

/// A uniformly sampled scalar signal. Samples must be finite, at least two of
/// them, and the sample step positive (1.0 for maps). Immutable after
/// construction; safe to share read-only across threads.
class TimeSeries {
public:
    enum class Source { synthetic, file };

    TimeSeries(std::vector<double> values, double sample_step, std::string name, Source source);

    const std::vector<double>& values() const { return values_; }
    double sample_step() const { return sample_step_; }
    const std::string& name() const { return name_; }
    Source source() const { return source_; }

    int length() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }

private:
    std::vector<double> values_;
    double sample_step_ = 1.0;
    std::string name_;
    Source source_ = Source::synthetic;
};

/// Delay reconstruction geometry: embedding dimension m, delay tau (samples),
/// prediction horizon p (samples). All at least 1.
struct ReconstructionParams {
    int m = 1;
    int tau = 1;
    int p = 1;

    /// Smallest series length this parameter set can be applied to is
    /// span() + p + 1 samples (at least one delay vector with a target).
    int span() const { return (m - 1) * tau; }
};

void validate(const ReconstructionParams& params);

/// Aligned (delay-vector, future-target) sample pairs built from one series.
///
/// Row r holds [x_j, x_{j-tau}, ..., x_{j-(m-1)tau}] with j = base_indices[r]
/// (0-based into the source series) and targets[r] = x_{j+p}. Rows are in
/// increasing j order, so base_indices[r] = base_indices[0] + r.
struct DelayMatrix {
    RowMatrix vectors;
    std::vector<double> targets;
    ReconstructionParams params;
    std::vector<int> base_indices;

    int rows() const { return vectors.rows(); }
};

/// Number of (vector, target) rows a series of length n yields:
/// n - (m-1)*tau - p.
int delay_row_count(int series_length, const ReconstructionParams& params);

/// Build the full delay matrix for `ts`. Throws data_error when the series is
/// too short for (m, tau, p).
DelayMatrix build_delay_vectors(const TimeSeries& ts, const ReconstructionParams& params);

/// Split into the first n samples (training) and the next k (test).
/// Throws data_error unless n >= 2, k >= 1 and n + k <= length.
std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries& ts, int n, int k);

/// Map every sample to scale*x + offset (scale > 0); metadata is preserved.
TimeSeries affine_transform(const TimeSeries& ts, double scale, double offset);

} // namespace delaycast

#endif
