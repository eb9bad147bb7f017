#ifndef DELAYCAST_SWEEP_HPP
#define DELAYCAST_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "delaycast/forecast.hpp"
#include "delaycast/infotheory.hpp"
#include "delaycast/matrix.hpp"
#include "delaycast/timeseries.hpp"

namespace delaycast {

/// One (m, tau) grid of SPI values at a fixed horizon, with optional matching
/// MASE scores. Failed cells hold NaN and are listed in `failures`; every
/// cell is exactly one of the two.
struct SweepGrid {
    struct Failure {
        int m = 0;
        int tau = 0;
        std::string error;
    };

    std::vector<int> m_values;
    std::vector<int> tau_values;
    int p = 1;
    RowMatrix spi;                 // |m_values| x |tau_values|
    std::optional<RowMatrix> mase; // same shape when present
    std::vector<Failure> failures;

    bool has_mase() const { return mase.has_value(); }
    bool cell_ok(int mi, int ti) const;
};

struct SweepOptions {
    int k = 4;
    MiEstimator estimator = MiEstimator::ksg2;
    double box_bandwidth = 0.2;
    std::uint64_t jitter_seed = 42;
    int threads = 1;
    double train_fraction = 0.9; // one fixed MASE split shared by all cells
    ForecastConfig forecast;
};

/// Evaluate SPI (and optionally rolling-forecast MASE) on every (m, tau)
/// cell. Cells are independent; per-cell failures are recorded, never fatal.
/// Results are identical for any worker count.
SweepGrid grid_sweep(const TimeSeries& ts, const std::vector<int>& m_values,
                     const std::vector<int>& tau_values, int p, bool compute_mase,
                     const SweepOptions& opts = {});

/// The SPI-optimal cell under the plateau rule: among cells within
/// plateau_fraction of the maximum, the one with smallest m, then smallest
/// tau. rule records whether the plateau actually widened the choice.
struct Selection {
    enum class Rule { global_argmax, plateau_min_m };

    int m = 0;
    int tau = 0;
    double value = 0.0;
    Rule rule = Rule::global_argmax;
};

Selection select_spi_optimal(const SweepGrid& grid, double plateau_fraction = 0.05);

/// Spearman rank correlation between SPI and MASE over cells with
/// m >= m_min_for_region (the low-m band where overfolding breaks the
/// relationship is excluded). Requires >= 10 such cells and a grid with MASE.
double antisymmetry_score(const SweepGrid& grid, int m_min_for_region = 3);

/// Long-form SPI curves over a (p, m or tau) cross-product: one of m/tau is
/// fixed, the other takes `varied` values.
struct HorizonSpec {
    enum class Vary { tau, m };

    Vary vary = Vary::tau;
    int fixed = 2;            // the fixed m (vary == tau) or fixed tau (vary == m)
    std::vector<int> varied;
    std::vector<int> p_values;
};

struct HorizonPoint {
    int p = 0;
    int m = 0;
    int tau = 0;
    double spi = 0.0;
    std::string error; // nonempty marks a failed point
};

std::vector<HorizonPoint> horizon_curves(const TimeSeries& ts, const HorizonSpec& spec,
                                         const SweepOptions& opts = {});

/// SPI on ascending prefix lengths of `ts` for each m at a fixed tau.
struct DataLengthPoint {
    int length = 0;
    int m = 0;
    double spi = 0.0;
    std::string error;
};

std::vector<DataLengthPoint> data_length_curve(const TimeSeries& ts, const std::vector<int>& lengths,
                                               const std::vector<int>& m_set, int tau, int p,
                                               const SweepOptions& opts = {});

} // namespace delaycast

#endif
