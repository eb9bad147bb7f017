#ifndef DELAYCAST_MATRIX_HPP
#define DELAYCAST_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace delaycast {

/// Dense row-major matrix of doubles. Rows are the samples, columns the
/// coordinates; kept deliberately minimal (contiguous storage plus row views).
class RowMatrix {
public:
    RowMatrix() = default;
    RowMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}
    RowMatrix(int rows, int cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::span<double> row(int r) { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const double> row(int r) const { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Chebyshev (max-norm) distance between two equal-length coordinate views.
inline double chebyshev_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] < b[i] ? b[i] - a[i] : a[i] - b[i];
        if (diff > d) d = diff;
    }
    return d;
}

/// Concatenate the columns of two matrices with equal row counts.
inline RowMatrix hcat(const RowMatrix& a, const RowMatrix& b) {
    RowMatrix out(a.rows(), a.cols() + b.cols());
    for (int r = 0; r < a.rows(); ++r) {
        auto dst = out.row(r);
        auto ra = a.row(r);
        auto rb = b.row(r);
        for (int c = 0; c < a.cols(); ++c) dst[c] = ra[c];
        for (int c = 0; c < b.cols(); ++c) dst[a.cols() + c] = rb[c];
    }
    return out;
}

/// Wrap a flat vector as a single-column matrix (copies).
inline RowMatrix column_matrix(const std::vector<double>& v) {
    return RowMatrix(static_cast<int>(v.size()), 1, v);
}

} // namespace delaycast

#endif
