#ifndef DELAYCAST_FORECAST_HPP
#define DELAYCAST_FORECAST_HPP

#include <span>
#include <vector>

#include "delaycast/timeseries.hpp"

namespace delaycast {

/// Configuration of the analogue forecaster.
///
/// exclusion_window guards against temporal self-matches: matrix rows whose
/// base index lies strictly within `exclusion_window` of the query index are
/// not eligible analogues (0 disables the guard entirely). The default -1
/// resolves to (m-1)*tau + p, which removes every row whose delay vector
/// overlaps the query's coordinates.
struct ForecastConfig {
    enum class HorizonMode { rolling_one_step, direct_p_step };

    int num_neighbors = 1;
    int exclusion_window = -1; // -1: resolve to (m-1)*tau + p
    bool rebuild_every_step = true;
    HorizonMode horizon_mode = HorizonMode::rolling_one_step;
};

struct ForecastResult {
    std::vector<double> predictions;
    std::vector<double> truth;
    double mase = 0.0;
    ReconstructionParams params;
    ForecastConfig config;
};

/// Mean absolute scaled error:
///   sum_l |pred_l - truth_l| / [ (k/(n-1)) * sum_{j=2..n} |x_j - x_{j-1}| ]
/// with train = {x_j}. Throws data_error on empty inputs and numerical_error
/// when the training signal is constant (zero denominator).
double mase(std::span<const double> predictions, std::span<const double> truth,
            std::span<const double> train);

/// One method-of-analogues prediction: the mean target of the
/// config.num_neighbors delay vectors nearest to `query` (max norm, ties to
/// the lower row), skipping rows within the exclusion window of
/// query_base_index. Throws data_error when exclusion leaves nothing.
double lma_predict_next(const DelayMatrix& matrix, std::span<const double> query,
                        int query_base_index, const ForecastConfig& config);

/// Rolling analogue forecast of the k samples after the first n.
///
/// For each test index l the model consists of all (vector, target) rows
/// drawn from the true samples up to index l - p; the query is the delay
/// vector ending at l - p. With rebuild_every_step the model grows as test
/// samples become observed; otherwise it stays fixed at the training prefix.
/// rolling_one_step mode requires p == 1; direct_p_step allows any horizon.
ForecastResult rolling_forecast(const TimeSeries& ts, const ReconstructionParams& params, int n,
                                int k, const ForecastConfig& config = {});

} // namespace delaycast

#endif
