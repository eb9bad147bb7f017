#include "delaycast/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "delaycast/error.hpp"
#include "delaycast/parallel.hpp"
#include "delaycast/stats.hpp"

namespace delaycast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive(const std::vector<int>& values, const char* what) {
    if (values.empty()) throw std::invalid_argument(std::string(what) + " range is empty");
    for (int v : values) {
        if (v < 1) throw std::invalid_argument(std::string(what) + " values must be >= 1");
    }
}

} // namespace

bool SweepGrid::cell_ok(int mi, int ti) const {
    return std::isfinite(spi(mi, ti)) && (!mase || std::isfinite((*mase)(mi, ti)));
}

SweepGrid grid_sweep(const TimeSeries& ts, const std::vector<int>& m_values,
                     const std::vector<int>& tau_values, int p, bool compute_mase,
                     const SweepOptions& opts) {
    require_positive(m_values, "m");
    require_positive(tau_values, "tau");
    if (p < 1) throw std::invalid_argument("p must be >= 1");

    const int nm = static_cast<int>(m_values.size());
    const int nt = static_cast<int>(tau_values.size());

    SweepGrid grid;
    grid.m_values = m_values;
    grid.tau_values = tau_values;
    grid.p = p;
    grid.spi = RowMatrix(nm, nt);
    std::fill(grid.spi.data().begin(), grid.spi.data().end(), kNaN);
    if (compute_mase) {
        grid.mase = RowMatrix(nm, nt);
        std::fill(grid.mase->data().begin(), grid.mase->data().end(), kNaN);
    }

    // One fixed train/test split shared by every MASE cell.
    const int n_train = std::max(2, static_cast<int>(ts.length() * opts.train_fraction));
    const int n_test = ts.length() - n_train;
    if (compute_mase && n_test < 1) {
        throw data_error("series too short for a train/test split at fraction " +
                         std::to_string(opts.train_fraction));
    }

    std::mutex failures_mutex;
    parallel_for_index(nm * nt, opts.threads, [&](int cell) {
        const int mi = cell / nt;
        const int ti = cell % nt;
        const ReconstructionParams params{m_values[mi], tau_values[ti], p};
        try {
            SpiRequest req;
            req.params = params;
            req.k = opts.k;
            req.estimator = opts.estimator;
            req.box_bandwidth = opts.box_bandwidth;
            req.options.jitter_seed = opts.jitter_seed;
            req.options.threads = 1; // cells are already parallel
            grid.spi(mi, ti) = spi(ts, req).value;
            if (compute_mase) {
                (*grid.mase)(mi, ti) =
                    rolling_forecast(ts, params, n_train, n_test, opts.forecast).mase;
            }
        } catch (const data_error& e) {
            std::lock_guard<std::mutex> lock(failures_mutex);
            grid.failures.push_back({params.m, params.tau, e.what()});
        } catch (const numerical_error& e) {
            std::lock_guard<std::mutex> lock(failures_mutex);
            grid.failures.push_back({params.m, params.tau, e.what()});
        }
    });

    // Deterministic order regardless of which worker hit the failure.
    std::sort(grid.failures.begin(), grid.failures.end(), [&](const auto& a, const auto& b) {
        return a.m != b.m ? a.m < b.m : a.tau < b.tau;
    });
    return grid;
}

Selection select_spi_optimal(const SweepGrid& grid, double plateau_fraction) {
    if (plateau_fraction < 0.0) throw std::invalid_argument("plateau_fraction must be >= 0");

    const int nm = static_cast<int>(grid.m_values.size());
    const int nt = static_cast<int>(grid.tau_values.size());

    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int mi = 0; mi < nm; ++mi) {
        for (int ti = 0; ti < nt; ++ti) {
            const double v = grid.spi(mi, ti);
            if (std::isfinite(v)) {
                any = true;
                best = std::max(best, v);
            }
        }
    }
    if (!any) throw data_error("select_spi_optimal: all grid cells failed");

    const double cutoff = (1.0 - plateau_fraction) * best;
    int count = 0;
    int sel_mi = -1, sel_ti = -1;
    for (int mi = 0; mi < nm; ++mi) {
        for (int ti = 0; ti < nt; ++ti) {
            const double v = grid.spi(mi, ti);
            if (!std::isfinite(v) || v < cutoff) continue;
            ++count;
            if (sel_mi < 0) { // rows scan m-ascending then tau-ascending
                sel_mi = mi;
                sel_ti = ti;
            }
        }
    }
    if (count == 0) {
        // A negative maximum puts the cutoff above it; fall back to argmax.
        for (int mi = 0; mi < nm && sel_mi < 0; ++mi) {
            for (int ti = 0; ti < nt; ++ti) {
                if (grid.spi(mi, ti) == best) {
                    sel_mi = mi;
                    sel_ti = ti;
                    break;
                }
            }
        }
        count = 1;
    }

    Selection sel;
    sel.m = grid.m_values[sel_mi];
    sel.tau = grid.tau_values[sel_ti];
    sel.value = grid.spi(sel_mi, sel_ti);
    sel.rule = count > 1 ? Selection::Rule::plateau_min_m : Selection::Rule::global_argmax;
    return sel;
}

double antisymmetry_score(const SweepGrid& grid, int m_min_for_region) {
    if (!grid.has_mase()) throw std::invalid_argument("antisymmetry_score needs a grid with MASE");

    std::vector<double> spi_vals, mase_vals;
    for (int mi = 0; mi < static_cast<int>(grid.m_values.size()); ++mi) {
        if (grid.m_values[mi] < m_min_for_region) continue;
        for (int ti = 0; ti < static_cast<int>(grid.tau_values.size()); ++ti) {
            const double s = grid.spi(mi, ti);
            const double e = (*grid.mase)(mi, ti);
            if (std::isfinite(s) && std::isfinite(e)) {
                spi_vals.push_back(s);
                mase_vals.push_back(e);
            }
        }
    }
    if (spi_vals.size() < 10) {
        throw data_error("antisymmetry_score: fewer than 10 usable cells with m >= " +
                         std::to_string(m_min_for_region));
    }
    return spearman_correlation(spi_vals, mase_vals);
}

std::vector<HorizonPoint> horizon_curves(const TimeSeries& ts, const HorizonSpec& spec,
                                         const SweepOptions& opts) {
    require_positive(spec.varied, spec.vary == HorizonSpec::Vary::tau ? "tau" : "m");
    require_positive(spec.p_values, "p");
    if (spec.fixed < 1) throw std::invalid_argument("fixed parameter must be >= 1");

    const int nv = static_cast<int>(spec.varied.size());
    const int np = static_cast<int>(spec.p_values.size());
    std::vector<HorizonPoint> points(static_cast<std::size_t>(nv) * np);

    parallel_for_index(nv * np, opts.threads, [&](int idx) {
        const int vi = idx / np;
        const int pi = idx % np;
        HorizonPoint& point = points[idx];
        point.p = spec.p_values[pi];
        point.m = spec.vary == HorizonSpec::Vary::m ? spec.varied[vi] : spec.fixed;
        point.tau = spec.vary == HorizonSpec::Vary::tau ? spec.varied[vi] : spec.fixed;
        try {
            SpiRequest req;
            req.params = {point.m, point.tau, point.p};
            req.k = opts.k;
            req.estimator = opts.estimator;
            req.box_bandwidth = opts.box_bandwidth;
            req.options.jitter_seed = opts.jitter_seed;
            point.spi = spi(ts, req).value;
        } catch (const data_error& e) {
            point.error = e.what();
        } catch (const numerical_error& e) {
            point.error = e.what();
        }
    });
    return points;
}

std::vector<DataLengthPoint> data_length_curve(const TimeSeries& ts, const std::vector<int>& lengths,
                                               const std::vector<int>& m_set, int tau, int p,
                                               const SweepOptions& opts) {
    if (lengths.empty()) throw std::invalid_argument("lengths list is empty");
    if (!std::is_sorted(lengths.begin(), lengths.end())) {
        throw std::invalid_argument("lengths must be ascending");
    }
    if (lengths.back() > ts.length()) {
        throw data_error("series shorter than the largest requested length");
    }
    require_positive(m_set, "m");
    if (tau < 1 || p < 1) throw std::invalid_argument("tau and p must be >= 1");

    const int nl = static_cast<int>(lengths.size());
    const int nm = static_cast<int>(m_set.size());
    std::vector<DataLengthPoint> points(static_cast<std::size_t>(nl) * nm);

    parallel_for_index(nl * nm, opts.threads, [&](int idx) {
        const int li = idx / nm;
        const int mi = idx % nm;
        DataLengthPoint& point = points[idx];
        point.length = lengths[li];
        point.m = m_set[mi];
        try {
            std::vector<double> prefix(ts.values().begin(), ts.values().begin() + point.length);
            const TimeSeries sub(std::move(prefix), ts.sample_step(), ts.name(), ts.source());
            SpiRequest req;
            req.params = {point.m, tau, p};
            req.k = opts.k;
            req.estimator = opts.estimator;
            req.box_bandwidth = opts.box_bandwidth;
            req.options.jitter_seed = opts.jitter_seed;
            point.spi = spi(sub, req).value;
        } catch (const data_error& e) {
            point.error = e.what();
        } catch (const numerical_error& e) {
            point.error = e.what();
        }
    });
    return points;
}

} // namespace delaycast
