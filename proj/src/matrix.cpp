#include "fmm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fmm {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::size_t leadingDim)
    : rows_(rows), cols_(cols), ld_(leadingDim), buf_(rows * leadingDim, 0.0) {
    if (leadingDim < cols) throw std::invalid_argument("DenseMatrix: leadingDim < cols");
}

void DenseMatrix::fill(double v) {
    for (std::size_t r = 0; r < rows_; ++r) std::fill_n(buf_.data() + r * ld_, cols_, v);
}

bool DenseMatrix::operator==(const DenseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if ((*this)(r, c) != other(r, c)) return false;
    return true;
}

void fill_uniform(MatrixView m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = dist(rng);
}

void fill_integers(MatrixView m, std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = static_cast<double>(dist(rng));
}

double max_abs(ConstMatrixView m) {
    double v = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) v = std::max(v, std::abs(m(r, c)));
    return v;
}

double normalized_error(ConstMatrixView C, ConstMatrixView Cref, ConstMatrixView A, ConstMatrixView B) {
    if (C.rows != Cref.rows || C.cols != Cref.cols)
        throw std::invalid_argument("normalized_error: shape mismatch");
    double diff = 0.0;
    for (std::size_t r = 0; r < C.rows; ++r)
        for (std::size_t c = 0; c < C.cols; ++c) diff = std::max(diff, std::abs(C(r, c) - Cref(r, c)));
    const double scale = static_cast<double>(A.cols) * max_abs(A) * max_abs(B);
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace fmm
