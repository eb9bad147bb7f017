#ifndef DELAYCAST_IO_HPP
#define DELAYCAST_IO_HPP

#include <string>

#include "delaycast/sweep.hpp"
#include "delaycast/timeseries.hpp"

namespace delaycast {

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

/// Read a one-sample-per-line CSV. A single non-numeric first line is
/// treated as a header. Parse failures and non-finite values are reported
/// with their 1-based line number (data_error).
TimeSeries load_timeseries_csv(const std::string& path);

/// Write one sample per line under a "value" header line.
void save_timeseries_csv(const TimeSeries& ts, const std::string& path);

/// Long-form heatmap rows under the header `m,tau,spi,mase`, m-major and
/// tau-minor. A missing MASE leaves the field empty; a failed cell leaves
/// both value fields empty and appends the error text as a quoted fifth
/// field.
void write_heatmap_csv(const SweepGrid& grid, const std::string& path);

/// Inverse of write_heatmap_csv (the horizon p is not part of the file and
/// comes back as 0).
SweepGrid read_heatmap_csv(const std::string& path);

} // namespace delaycast

#endif
