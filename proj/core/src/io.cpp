#include "delaycast/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "delaycast/error.hpp"

namespace delaycast {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

bool parse_double(const std::string& field, double& out) {
    const std::string t = strip(field);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = begin + t.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

// Split one CSV line; only the error field is ever quoted, so quote handling
// is limited to a trailing quoted field.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"' && cur.empty()) {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

} // namespace

TimeSeries load_timeseries_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");

    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = strip(line);
        if (t.empty()) {
            if (in.eof()) break; // trailing newline
            throw data_error("parse error at line " + std::to_string(line_no) + ": empty line");
        }
        double v = 0.0;
        if (!parse_double(t, v)) {
            if (line_no == 1) continue; // single header line
            throw data_error("parse error at line " + std::to_string(line_no) + ": '" + t + "'");
        }
        if (!std::isfinite(v)) {
            throw data_error("non-finite value at line " + std::to_string(line_no));
        }
        values.push_back(v);
    }
    if (values.size() < 2) {
        throw data_error("'" + path + "' holds fewer than 2 samples");
    }
    return TimeSeries(std::move(values), 1.0, path, TimeSeries::Source::file);
}

void save_timeseries_csv(const TimeSeries& ts, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write '" + path + "'");
    out << "value\n";
    for (double v : ts.values()) out << format_double(v) << '\n';
    if (!out) throw data_error("write failed on '" + path + "'");
}

void write_heatmap_csv(const SweepGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write '" + path + "'");
    out << "m,tau,spi,mase\n";

    for (int mi = 0; mi < static_cast<int>(grid.m_values.size()); ++mi) {
        for (int ti = 0; ti < static_cast<int>(grid.tau_values.size()); ++ti) {
            const int m = grid.m_values[mi];
            const int tau = grid.tau_values[ti];
            out << m << ',' << tau << ',';
            const double s = grid.spi(mi, ti);
            if (std::isfinite(s)) {
                out << format_double(s) << ',';
                if (grid.mase && std::isfinite((*grid.mase)(mi, ti))) {
                    out << format_double((*grid.mase)(mi, ti));
                }
                out << '\n';
            } else {
                // failed cell: empty values, error text as a fifth field
                std::string error = "failed";
                for (const auto& f : grid.failures) {
                    if (f.m == m && f.tau == tau) {
                        error = f.error;
                        break;
                    }
                }
                out << ",," << csv_quote(error) << '\n';
            }
        }
    }
    if (!out) throw data_error("write failed on '" + path + "'");
}

SweepGrid read_heatmap_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line) || strip(line) != "m,tau,spi,mase") {
        throw data_error("'" + path + "' is not a heatmap CSV (bad header)");
    }

    struct Row {
        int m, tau;
        double spi, mase;
        bool has_spi, has_mase;
        std::string error;
    };
    std::vector<Row> rows;
    std::set<int> m_set, tau_set;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() < 4) {
            throw data_error("parse error at line " + std::to_string(line_no) + ": expected 4+ fields");
        }
        Row row{};
        double m_val = 0.0, tau_val = 0.0;
        if (!parse_double(fields[0], m_val) || !parse_double(fields[1], tau_val)) {
            throw data_error("parse error at line " + std::to_string(line_no));
        }
        row.m = static_cast<int>(m_val);
        row.tau = static_cast<int>(tau_val);
        row.has_spi = parse_double(fields[2], row.spi);
        row.has_mase = parse_double(fields[3], row.mase);
        if (fields.size() >= 5) row.error = fields[4];
        rows.push_back(row);
        m_set.insert(row.m);
        tau_set.insert(row.tau);
    }

    SweepGrid grid;
    grid.m_values.assign(m_set.begin(), m_set.end());
    grid.tau_values.assign(tau_set.begin(), tau_set.end());
    grid.p = 0; // not recorded in the file
    const int nm = static_cast<int>(grid.m_values.size());
    const int nt = static_cast<int>(grid.tau_values.size());
    grid.spi = RowMatrix(nm, nt);
    std::fill(grid.spi.data().begin(), grid.spi.data().end(),
              std::numeric_limits<double>::quiet_NaN());
    const bool any_mase = std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.has_mase; });
    if (any_mase) {
        grid.mase = RowMatrix(nm, nt);
        std::fill(grid.mase->data().begin(), grid.mase->data().end(),
                  std::numeric_limits<double>::quiet_NaN());
    }

    auto index_of = [](const std::vector<int>& values, int v) {
        return static_cast<int>(std::lower_bound(values.begin(), values.end(), v) - values.begin());
    };
    for (const Row& row : rows) {
        const int mi = index_of(grid.m_values, row.m);
        const int ti = index_of(grid.tau_values, row.tau);
        if (row.has_spi) grid.spi(mi, ti) = row.spi;
        if (row.has_mase && grid.mase) (*grid.mase)(mi, ti) = row.mase;
        if (!row.has_spi) grid.failures.push_back({row.m, row.tau, row.error});
    }
    return grid;
}

} // namespace delaycast
