#include "delaycast/timeseries.hpp"

#include <cmath>
#include <string>

#include "delaycast/error.hpp"

namespace delaycast {

TimeSeries::TimeSeries(std::vector<double> values, double sample_step, std::string name, Source source)
    : values_(std::move(values)), sample_step_(sample_step), name_(std::move(name)), source_(source) {
    if (values_.size() < 2) {
        throw data_error("time series needs at least 2 samples, got " + std::to_string(values_.size()));
    }
    if (!(sample_step_ > 0.0)) {
        throw data_error("sample_step must be positive");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw data_error("non-finite sample at index " + std::to_string(i));
        }
    }
}

void validate(const ReconstructionParams& params) {
    if (params.m < 1) throw data_error("embedding dimension m must be >= 1");
    if (params.tau < 1) throw data_error("delay tau must be >= 1");
    if (params.p < 1) throw data_error("horizon p must be >= 1");
}

int delay_row_count(int series_length, const ReconstructionParams& params) {
    return series_length - params.span() - params.p;
}

DelayMatrix build_delay_vectors(const TimeSeries& ts, const ReconstructionParams& params) {
    validate(params);
    const int n = ts.length();
    const int rows = delay_row_count(n, params);
    if (rows < 1) {
        throw data_error("series too short: length " + std::to_string(n) + " cannot support (m=" +
                         std::to_string(params.m) + ", tau=" + std::to_string(params.tau) + ", p=" +
                         std::to_string(params.p) + ")");
    }

    DelayMatrix out;
    out.params = params;
    out.vectors = RowMatrix(rows, params.m);
    out.targets.resize(rows);
    out.base_indices.resize(rows);

    const auto& x = ts.values();
    const int first = params.span();
    for (int r = 0; r < rows; ++r) {
        const int j = first + r;
        auto row = out.vectors.row(r);
        for (int c = 0; c < params.m; ++c) {
            row[c] = x[j - c * params.tau];
        }
        out.targets[r] = x[j + params.p];
        out.base_indices[r] = j;
    }
    return out;
}

std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries& ts, int n, int k) {
    if (n < 2 || k < 1) {
        throw data_error("invalid split: need n >= 2 and k >= 1");
    }
    if (n + k > ts.length()) {
        throw data_error("invalid split: n + k = " + std::to_string(n + k) + " exceeds series length " +
                         std::to_string(ts.length()));
    }
    const auto& x = ts.values();
    std::vector<double> train(x.begin(), x.begin() + n);
    std::vector<double> test(x.begin() + n, x.begin() + n + k);
    return {TimeSeries(std::move(train), ts.sample_step(), ts.name(), ts.source()),
            TimeSeries(std::move(test), ts.sample_step(), ts.name(), ts.source())};
}

TimeSeries affine_transform(const TimeSeries& ts, double scale, double offset) {
    if (!(scale > 0.0)) {
        throw data_error("affine_transform needs a positive scale");
    }
    std::vector<double> mapped(ts.values());
    for (double& v : mapped) v = scale * v + offset;
    return TimeSeries(std::move(mapped), ts.sample_step(), ts.name(), ts.source());
}

} // namespace delaycast
