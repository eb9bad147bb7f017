#ifndef DELAYCAST_INFOTHEORY_HPP
#define DELAYCAST_INFOTHEORY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "delaycast/matrix.hpp"
#include "delaycast/timeseries.hpp"

namespace delaycast {

/// Digamma function for x > 0, accurate to better than 1e-10 (recurrence into
/// the asymptotic Bernoulli series).
double digamma(double x);

enum class MiEstimator { ksg2, box_kernel };

/// A mutual-information or entropy estimate, always in nats.
struct MIEstimate {
    double value = 0.0;
    MiEstimator estimator = MiEstimator::ksg2;
    double k_or_r = 0.0; // neighbor count k (ksg2) or bandwidth r (box kernel)
    int n_samples = 0;
};

/// Knobs shared by the k-NN estimators. Ties in k-NN distances are
/// ill-defined for these estimators, so exact duplicate rows trigger a
/// deterministic jitter of amplitude 1e-10 x (per-column data range), drawn
/// from jitter_seed. threads parallelizes the per-sample loop; the reduction
/// order is fixed, so results do not depend on the worker count.
struct EstimatorOptions {
    std::uint64_t jitter_seed = 42;
    int threads = 1;
};

/// Kraskov-Stuegbauer-Grassberger mutual information, algorithm 2.
///
/// For every sample the k nearest neighbors are located in the joint space
/// under the max norm; the marginal radii r_x, r_y are the half-extents of
/// the smallest axis-aligned rectangle containing those k neighbors; n_x and
/// n_y count marginal neighbors within or on those radii (excluding the
/// sample itself). The estimate is
///     psi(k) - 1/k - <psi(n_x) + psi(n_y)> + psi(n).
/// Rows of x pair with rows of y. Throws data_error when n <= k and
/// numerical_error when all joint points are identical.
MIEstimate ksg_mi(const RowMatrix& x, const RowMatrix& y, int k, const EstimatorOptions& opts = {});

/// Box-kernel (step kernel, max norm) mutual information at bandwidth r:
/// local proportions of points within r in the joint and marginal spaces
/// (the sample itself included), averaged as log(p_joint / (p_x * p_y)).
MIEstimate box_kernel_mi(const RowMatrix& x, const RowMatrix& y, double r,
                         const EstimatorOptions& opts = {});

/// Kozachenko-Leonenko differential entropy in nats:
/// psi(n) - psi(k) + d * <ln(2 * eps_i)>, eps_i the max-norm distance to the
/// k-th neighbor.
double knn_entropy(const RowMatrix& x, int k, const EstimatorOptions& opts = {});

/// Request for a shared-prediction-information evaluation: mutual information
/// between the (m, tau) delay vector and the sample p steps ahead.
struct SpiRequest {
    ReconstructionParams params;
    int k = 4;
    MiEstimator estimator = MiEstimator::ksg2;
    double box_bandwidth = 0.2; // only used when estimator == box_kernel
    EstimatorOptions options;
};

MIEstimate spi(const TimeSeries& ts, const SpiRequest& req);

/// One entry of the predictability-ratio curve: the fraction of the
/// uncertainty in the p-step future resolved by the delay vector. ratio is
/// empty when the entropy estimate is nonpositive (the ratio is then
/// ill-defined and reported as such).
struct HorizonRatioPoint {
    int p = 0;
    double spi = 0.0;
    double entropy = 0.0;
    std::optional<double> ratio;
};

std::vector<HorizonRatioPoint> r_of_p(const TimeSeries& ts, int m, int tau, int p_max, int k,
                                      const EstimatorOptions& opts = {});

/// Three-variable diagnostics, composed from pairwise KSG estimates.
/// Co-information: I(X;Y) + I(X;Z) - I(X;[Y,Z]).
double co_information(const RowMatrix& x, const RowMatrix& y, const RowMatrix& z, int k,
                      const EstimatorOptions& opts = {});
/// Multi-information: I(X;Y) + I([X,Y];Z).
double multi_information(const RowMatrix& x, const RowMatrix& y, const RowMatrix& z, int k,
                         const EstimatorOptions& opts = {});

} // namespace delaycast

#endif
