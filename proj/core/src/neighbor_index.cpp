#include "delaycast/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "delaycast/error.hpp"

namespace delaycast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lexicographic (distance, id) order; the k-NN result is the k smallest
// under this order, which is what makes tie-breaking deterministic.
inline bool better(double d1, int id1, double d2, int id2) {
    return d1 < d2 || (d1 == d2 && id1 < id2);
}

} // namespace

NeighborIndex::NeighborIndex(const RowMatrix& points, int leaf_size) {
    if (points.rows() < 1 || points.cols() < 1) {
        throw data_error("neighbor index needs at least one point with at least one coordinate");
    }
    for (const double v : points.data()) {
        if (!std::isfinite(v)) {
            throw numerical_error("neighbor index given a non-finite coordinate");
        }
    }
    num_points_ = points.rows();
    dim_ = points.cols();
    pts_ = points.data();
    ids_.resize(num_points_);
    std::iota(ids_.begin(), ids_.end(), 0);

    nodes_.reserve(2 * (num_points_ / std::max(leaf_size, 1) + 1));
    build_node(0, num_points_, std::max(leaf_size, 1));

    position_of_.resize(num_points_);
    for (int pos = 0; pos < num_points_; ++pos) position_of_[ids_[pos]] = pos;
}

int NeighborIndex::build_node(int begin, int end, int leaf_size) {
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{-1, -1, begin, end});

    // Exact bounding box of the node's points.
    const std::size_t box_off = static_cast<std::size_t>(node_id) * 2 * dim_;
    boxes_.resize(box_off + 2 * dim_);
    double* lo = boxes_.data() + box_off;
    double* hi = lo + dim_;
    for (int c = 0; c < dim_; ++c) {
        lo[c] = kInf;
        hi[c] = -kInf;
    }
    for (int i = begin; i < end; ++i) {
        const double* p = pts_.data() + static_cast<std::size_t>(i) * dim_;
        for (int c = 0; c < dim_; ++c) {
            lo[c] = std::min(lo[c], p[c]);
            hi[c] = std::max(hi[c], p[c]);
        }
    }

    if (end - begin <= leaf_size) {
        return node_id;
    }

    // Split on the widest extent at the median.
    int split_dim = 0;
    double widest = -1.0;
    for (int c = 0; c < dim_; ++c) {
        const double extent = hi[c] - lo[c];
        if (extent > widest) {
            widest = extent;
            split_dim = c;
        }
    }
    if (widest <= 0.0) {
        return node_id; // all points identical: keep as one leaf
    }

    const int mid = begin + (end - begin) / 2;
    // Reorder point rows and ids together.
    std::vector<int> order(end - begin);
    std::iota(order.begin(), order.end(), begin);
    std::nth_element(order.begin(), order.begin() + (mid - begin), order.end(), [&](int a, int b) {
        const double va = pts_[static_cast<std::size_t>(a) * dim_ + split_dim];
        const double vb = pts_[static_cast<std::size_t>(b) * dim_ + split_dim];
        return va < vb || (va == vb && ids_[a] < ids_[b]);
    });
    std::vector<double> tmp_pts(static_cast<std::size_t>(end - begin) * dim_);
    std::vector<int> tmp_ids(end - begin);
    for (int i = 0; i < end - begin; ++i) {
        const int src = order[i];
        tmp_ids[i] = ids_[src];
        std::copy_n(pts_.data() + static_cast<std::size_t>(src) * dim_, dim_,
                    tmp_pts.data() + static_cast<std::size_t>(i) * dim_);
    }
    std::copy(tmp_ids.begin(), tmp_ids.end(), ids_.begin() + begin);
    std::copy(tmp_pts.begin(), tmp_pts.end(), pts_.begin() + static_cast<std::size_t>(begin) * dim_);

    const int left = build_node(begin, mid, leaf_size);
    const int right = build_node(mid, end, leaf_size);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

double NeighborIndex::min_distance_to_box(int node, std::span<const double> query) const {
    const double* lo = boxes_.data() + static_cast<std::size_t>(node) * 2 * dim_;
    const double* hi = lo + dim_;
    double d = 0.0;
    for (int c = 0; c < dim_; ++c) {
        double gap = 0.0;
        if (query[c] < lo[c]) gap = lo[c] - query[c];
        else if (query[c] > hi[c]) gap = query[c] - hi[c];
        if (gap > d) d = gap;
    }
    return d;
}

double NeighborIndex::max_distance_to_box(int node, std::span<const double> query) const {
    const double* lo = boxes_.data() + static_cast<std::size_t>(node) * 2 * dim_;
    const double* hi = lo + dim_;
    double d = 0.0;
    for (int c = 0; c < dim_; ++c) {
        const double far = std::max(query[c] - lo[c], hi[c] - query[c]);
        if (far > d) d = far;
    }
    return d;
}

std::span<const double> NeighborIndex::point(int id) const {
    const std::size_t pos = static_cast<std::size_t>(position_of_[id]);
    return {pts_.data() + pos * dim_, static_cast<std::size_t>(dim_)};
}

namespace {

// Bounded max-heap of the k best (distance, id) candidates seen so far.
struct BestSet {
    explicit BestSet(int k) : k(k) { heap.reserve(k); }

    int k;
    std::vector<Neighbor> heap;

    static bool heap_less(const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
    }

    bool full() const { return static_cast<int>(heap.size()) == k; }
    double worst_distance() const { return full() ? heap.front().distance : kInf; }

    void offer(int id, double distance) {
        if (!full()) {
            heap.push_back({id, distance});
            std::push_heap(heap.begin(), heap.end(), heap_less);
        } else if (better(distance, id, heap.front().distance, heap.front().id)) {
            std::pop_heap(heap.begin(), heap.end(), heap_less);
            heap.back() = {id, distance};
            std::push_heap(heap.begin(), heap.end(), heap_less);
        }
    }
};

} // namespace

void NeighborIndex::knn(std::span<const double> query, int k, IdInterval exclude,
                        std::vector<Neighbor>& out) const {
    if (k < 1) throw std::invalid_argument("knn needs k >= 1");
    int excluded = 0;
    if (!exclude.empty()) {
        const int lo = std::max(exclude.lo, 0);
        const int hi = std::min(exclude.hi, num_points_ - 1);
        excluded = std::max(0, hi - lo + 1);
    }
    if (k > num_points_ - excluded) {
        throw std::invalid_argument("knn k too large: " + std::to_string(k) + " of " +
                                    std::to_string(num_points_ - excluded) + " admissible points");
    }

    BestSet best(k);

    // Iterative nearest-first descent with an explicit stack of
    // (node, lower bound on distance) entries.
    struct Entry {
        int node;
        double bound;
    };
    std::vector<Entry> stack;
    stack.reserve(64);
    stack.push_back({0, min_distance_to_box(0, query)});

    while (!stack.empty()) {
        const Entry e = stack.back();
        stack.pop_back();
        if (best.full() && e.bound > best.worst_distance()) continue;

        const Node& node = nodes_[e.node];
        if (node.left < 0) {
            double abandon = best.worst_distance();
            for (int i = node.begin; i < node.end; ++i) {
                const int id = ids_[i];
                if (exclude.contains(id)) continue;
                const double* p = pts_.data() + static_cast<std::size_t>(i) * dim_;
                double d = 0.0;
                bool alive = true;
                for (int c = 0; c < dim_; ++c) {
                    const double diff = query[c] < p[c] ? p[c] - query[c] : query[c] - p[c];
                    if (diff > d) {
                        d = diff;
                        if (d > abandon) {
                            alive = false;
                            break;
                        }
                    }
                }
                if (alive) {
                    best.offer(id, d);
                    abandon = best.worst_distance();
                }
            }
            continue;
        }

        const double dl = min_distance_to_box(node.left, query);
        const double dr = min_distance_to_box(node.right, query);
        // Push the farther child first so the nearer one is processed next.
        if (dl <= dr) {
            stack.push_back({node.right, dr});
            stack.push_back({node.left, dl});
        } else {
            stack.push_back({node.left, dl});
            stack.push_back({node.right, dr});
        }
    }

    out = std::move(best.heap);
    std::sort(out.begin(), out.end(), BestSet::heap_less);
}

std::vector<Neighbor> NeighborIndex::knn(std::span<const double> query, int k, IdInterval exclude) const {
    std::vector<Neighbor> out;
    knn(query, k, exclude, out);
    return out;
}

long NeighborIndex::count_within(std::span<const double> query, double radius, bool inclusive,
                                 IdInterval exclude) const {
    if (radius < 0.0) throw std::invalid_argument("count_within needs a non-negative radius");

    const auto admits = [&](double d) { return inclusive ? d <= radius : d < radius; };

    long count = 0;
    std::vector<int> stack;
    stack.reserve(64);
    stack.push_back(0);
    while (!stack.empty()) {
        const int node_id = stack.back();
        stack.pop_back();
        const double lo = min_distance_to_box(node_id, query);
        if (!admits(lo)) continue;
        const Node& node = nodes_[node_id];
        if (admits(max_distance_to_box(node_id, query))) {
            count += node.end - node.begin; // whole subtree inside the ball
            continue;
        }
        if (node.left < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const double* p = pts_.data() + static_cast<std::size_t>(i) * dim_;
                double d = 0.0;
                for (int c = 0; c < dim_; ++c) {
                    const double diff = query[c] < p[c] ? p[c] - query[c] : query[c] - p[c];
                    if (diff > d) d = diff;
                }
                if (admits(d)) ++count;
            }
        } else {
            stack.push_back(node.left);
            stack.push_back(node.right);
        }
    }

    // Exclusions are corrected afterwards: the interval is small in practice
    // (self-exclusion), so testing each excluded id directly stays exact.
    if (!exclude.empty()) {
        const int lo = std::max(exclude.lo, 0);
        const int hi = std::min(exclude.hi, num_points_ - 1);
        for (int id = lo; id <= hi; ++id) {
            if (admits(chebyshev_distance(query, point(id)))) --count;
        }
    }
    return count;
}

} // namespace delaycast
