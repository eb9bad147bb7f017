#ifndef DELAYCAST_NEIGHBOR_INDEX_HPP
#define DELAYCAST_NEIGHBOR_INDEX_HPP

#include <span>
#include <vector>

#include "delaycast/matrix.hpp"

namespace delaycast {

struct Neighbor {
    int id = -1;
    double distance = 0.0;
};

/// Contiguous range of point ids to skip during a query. Covers both uses in
/// this library: self-exclusion ({i, i}) and temporal exclusion windows, which
/// are contiguous in row id because delay-matrix rows are ordered by time.
struct IdInterval {
    int lo = 0;
    int hi = -1; // default-constructed interval is empty

    bool empty() const { return hi < lo; }
    bool contains(int id) const { return id >= lo && id <= hi; }
    static IdInterval single(int id) { return {id, id}; }
};

/// Exact k-nearest-neighbor queries and radius counts under the max
/// (Chebyshev) norm, backed by a bucketed k-d tree with per-node bounding
/// boxes. Results are identical to a brute-force linear scan: distances are
/// exact and ties are broken by lower point id. Immutable after construction;
/// concurrent read-only queries are safe.
class NeighborIndex {
public:
    /// Copies all points. Throws data_error on an empty input and
    /// numerical_error on non-finite coordinates.
    explicit NeighborIndex(const RowMatrix& points, int leaf_size = 24);

    int size() const { return num_points_; }
    int dimension() const { return dim_; }

    /// The k nearest points to `query`, ascending by (distance, id),
    /// skipping ids in `exclude`. Throws std::invalid_argument when k < 1 or
    /// k exceeds the number of admissible points.
    std::vector<Neighbor> knn(std::span<const double> query, int k, IdInterval exclude = {}) const;
    void knn(std::span<const double> query, int k, IdInterval exclude, std::vector<Neighbor>& out) const;

    /// Number of points with distance <= radius (inclusive) or < radius
    /// (exclusive), skipping ids in `exclude`. Throws std::invalid_argument on
    /// a negative radius.
    long count_within(std::span<const double> query, double radius, bool inclusive,
                      IdInterval exclude = {}) const;

    /// Coordinates of the point with original id `id`.
    std::span<const double> point(int id) const;

private:
    struct Node {
        int left = -1;   // child node indices; -1 marks a leaf
        int right = -1;
        int begin = 0;   // range into the permuted point array
        int end = 0;
    };

    int build_node(int begin, int end, int leaf_size);
    double min_distance_to_box(int node, std::span<const double> query) const;
    double max_distance_to_box(int node, std::span<const double> query) const;

    int num_points_ = 0;
    int dim_ = 0;
    std::vector<double> pts_;      // permuted, row-major
    std::vector<int> ids_;         // permuted position -> original id
    std::vector<int> position_of_; // original id -> permuted position
    std::vector<Node> nodes_;
    std::vector<double> boxes_;    // per node: d lows then d highs
};

} // namespace delaycast

#endif
