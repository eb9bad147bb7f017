#include "delaycast/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "delaycast/error.hpp"
#include "delaycast/neighbor_index.hpp"
#include "delaycast/parallel.hpp"

namespace delaycast {

double digamma(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("digamma needs x > 0");
    double result = 0.0;
    while (x < 8.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Asymptotic series with Bernoulli coefficients through x^-10.
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 -
                      inv2 * (1.0 / 120.0 -
                              inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return result;
}

namespace {

// Lexicographic row order; used only to detect exact duplicate rows.
bool rows_equal(const RowMatrix& m, int a, int b) {
    const auto ra = m.row(a);
    const auto rb = m.row(b);
    for (int c = 0; c < m.cols(); ++c) {
        if (ra[c] != rb[c]) return false;
    }
    return true;
}

bool row_less(const RowMatrix& m, int a, int b) {
    const auto ra = m.row(a);
    const auto rb = m.row(b);
    for (int c = 0; c < m.cols(); ++c) {
        if (ra[c] < rb[c]) return true;
        if (ra[c] > rb[c]) return false;
    }
    return false;
}

enum class DuplicateState { none, some, all };

DuplicateState duplicate_state(const RowMatrix& m) {
    std::vector<int> order(m.rows());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return row_less(m, a, b); });
    bool any = false;
    bool all = true;
    for (int i = 1; i < m.rows(); ++i) {
        if (rows_equal(m, order[i - 1], order[i])) {
            any = true;
        } else {
            all = false;
        }
    }
    if (m.rows() >= 2 && all && any) return DuplicateState::all;
    return any ? DuplicateState::some : DuplicateState::none;
}

// Deterministic tie-breaking jitter, amplitude 1e-10 of each column's range.
void apply_jitter(RowMatrix& m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> amplitude(m.cols());
    for (int c = 0; c < m.cols(); ++c) {
        double lo = m(0, c), hi = m(0, c);
        for (int r = 1; r < m.rows(); ++r) {
            lo = std::min(lo, m(r, c));
            hi = std::max(hi, m(r, c));
        }
        const double range = hi - lo;
        amplitude[c] = 1e-10 * (range > 0.0 ? range : 1.0);
    }
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            m(r, c) += amplitude[c] * unit(rng);
        }
    }
}

RowMatrix columns_block(const RowMatrix& m, int first_col, int ncols) {
    RowMatrix out(m.rows(), ncols);
    for (int r = 0; r < m.rows(); ++r) {
        const auto src = m.row(r);
        auto dst = out.row(r);
        for (int c = 0; c < ncols; ++c) dst[c] = src[first_col + c];
    }
    return out;
}

} // namespace

MIEstimate ksg_mi(const RowMatrix& x, const RowMatrix& y, int k, const EstimatorOptions& opts) {
    if (x.rows() != y.rows()) throw std::invalid_argument("ksg_mi: row counts of x and y differ");
    const int n = x.rows();
    if (k < 1) throw std::invalid_argument("ksg_mi needs k >= 1");
    if (n <= k) {
        throw data_error("ksg_mi: too few samples (" + std::to_string(n) + ") for k = " + std::to_string(k));
    }

    RowMatrix joint = hcat(x, y);
    const DuplicateState dup = duplicate_state(joint);
    if (dup == DuplicateState::all) {
        throw numerical_error("ksg_mi: degenerate data, all joint points identical");
    }
    if (dup == DuplicateState::some) {
        apply_jitter(joint, opts.jitter_seed);
    }
    const RowMatrix xs = columns_block(joint, 0, x.cols());
    const RowMatrix ys = columns_block(joint, x.cols(), y.cols());

    const NeighborIndex joint_index(joint);
    const NeighborIndex x_index(xs);
    const NeighborIndex y_index(ys);

    std::vector<double> contrib(n);
    parallel_for_index(n, opts.threads, [&](int i) {
        thread_local std::vector<Neighbor> nn;
        joint_index.knn(joint.row(i), k, IdInterval::single(i), nn);
        // Marginal radii span the smallest axis-aligned rectangle holding all
        // k joint neighbors, so each marginal count is at least k.
        double rx = 0.0, ry = 0.0;
        for (const Neighbor& nb : nn) {
            rx = std::max(rx, chebyshev_distance(xs.row(i), xs.row(nb.id)));
            ry = std::max(ry, chebyshev_distance(ys.row(i), ys.row(nb.id)));
        }
        const long nx = x_index.count_within(xs.row(i), rx, true, IdInterval::single(i));
        const long ny = y_index.count_within(ys.row(i), ry, true, IdInterval::single(i));
        contrib[i] = digamma(static_cast<double>(std::max(nx, 1L))) +
                     digamma(static_cast<double>(std::max(ny, 1L)));
    });

    double sum = 0.0;
    for (double v : contrib) sum += v; // fixed order, schedule independent
    const double value = digamma(k) - 1.0 / k - sum / n + digamma(n);

    MIEstimate out;
    out.value = value;
    out.estimator = MiEstimator::ksg2;
    out.k_or_r = k;
    out.n_samples = n;
    return out;
}

MIEstimate box_kernel_mi(const RowMatrix& x, const RowMatrix& y, double r, const EstimatorOptions& opts) {
    if (x.rows() != y.rows()) throw std::invalid_argument("box_kernel_mi: row counts of x and y differ");
    const int n = x.rows();
    if (n < 2) throw data_error("box_kernel_mi: too few samples");
    if (!(r > 0.0)) throw std::invalid_argument("box_kernel_mi needs a positive bandwidth");

    const RowMatrix joint = hcat(x, y);
    const NeighborIndex joint_index(joint);
    const NeighborIndex x_index(x);
    const NeighborIndex y_index(y);

    std::vector<double> contrib(n);
    parallel_for_index(n, opts.threads, [&](int i) {
        // Proportions include the sample itself, so every count is >= 1.
        const double pj = static_cast<double>(joint_index.count_within(joint.row(i), r, true)) / n;
        const double px = static_cast<double>(x_index.count_within(x.row(i), r, true)) / n;
        const double py = static_cast<double>(y_index.count_within(y.row(i), r, true)) / n;
        contrib[i] = std::log(pj / (px * py));
    });

    double sum = 0.0;
    for (double v : contrib) sum += v;

    MIEstimate out;
    out.value = sum / n;
    out.estimator = MiEstimator::box_kernel;
    out.k_or_r = r;
    out.n_samples = n;
    return out;
}

double knn_entropy(const RowMatrix& x, int k, const EstimatorOptions& opts) {
    const int n = x.rows();
    if (k < 1) throw std::invalid_argument("knn_entropy needs k >= 1");
    if (n <= k) {
        throw data_error("knn_entropy: too few samples (" + std::to_string(n) + ") for k = " +
                         std::to_string(k));
    }

    RowMatrix pts = x;
    const DuplicateState dup = duplicate_state(pts);
    if (dup == DuplicateState::all) {
        throw numerical_error("knn_entropy: degenerate data, all points identical");
    }
    if (dup == DuplicateState::some) {
        apply_jitter(pts, opts.jitter_seed);
    }

    const NeighborIndex index(pts);
    std::vector<double> logs(n);
    parallel_for_index(n, opts.threads, [&](int i) {
        thread_local std::vector<Neighbor> nn;
        index.knn(pts.row(i), k, IdInterval::single(i), nn);
        const double eps = nn[k - 1].distance;
        if (!(eps > 0.0)) {
            throw numerical_error("knn_entropy: zero k-NN distance after jitter");
        }
        logs[i] = std::log(2.0 * eps);
    });

    double sum = 0.0;
    for (double v : logs) sum += v;
    return digamma(n) - digamma(k) + static_cast<double>(x.cols()) * sum / n;
}

MIEstimate spi(const TimeSeries& ts, const SpiRequest& req) {
    const DelayMatrix dm = build_delay_vectors(ts, req.params);
    const RowMatrix targets = column_matrix(dm.targets);
    if (req.estimator == MiEstimator::box_kernel) {
        return box_kernel_mi(dm.vectors, targets, req.box_bandwidth, req.options);
    }
    return ksg_mi(dm.vectors, targets, req.k, req.options);
}

std::vector<HorizonRatioPoint> r_of_p(const TimeSeries& ts, int m, int tau, int p_max, int k,
                                      const EstimatorOptions& opts) {
    if (p_max < 1) throw std::invalid_argument("r_of_p needs p_max >= 1");
    std::vector<HorizonRatioPoint> out;
    out.reserve(p_max);
    for (int p = 1; p <= p_max; ++p) {
        const DelayMatrix dm = build_delay_vectors(ts, ReconstructionParams{m, tau, p});
        const RowMatrix targets = column_matrix(dm.targets);
        HorizonRatioPoint point;
        point.p = p;
        point.spi = ksg_mi(dm.vectors, targets, k, opts).value;
        point.entropy = knn_entropy(targets, k, opts);
        if (point.entropy > 0.0) {
            point.ratio = point.spi / point.entropy;
        }
        out.push_back(point);
    }
    return out;
}

double co_information(const RowMatrix& x, const RowMatrix& y, const RowMatrix& z, int k,
                      const EstimatorOptions& opts) {
    const double ixy = ksg_mi(x, y, k, opts).value;
    const double ixz = ksg_mi(x, z, k, opts).value;
    const double ix_yz = ksg_mi(x, hcat(y, z), k, opts).value;
    return ixy + ixz - ix_yz;
}

double multi_information(const RowMatrix& x, const RowMatrix& y, const RowMatrix& z, int k,
                         const EstimatorOptions& opts) {
    const double ixy = ksg_mi(x, y, k, opts).value;
    const double ixy_z = ksg_mi(hcat(x, y), z, k, opts).value;
    return ixy + ixy_z;
}

} // namespace delaycast
