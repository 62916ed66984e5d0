#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace fmm {

// Non-owning row-major view with a leading dimension (row stride).
template <typename T>
struct BasicMatrixView {
    T* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t ld = 0;

    T& operator()(std::size_t r, std::size_t c) const { return data[r * ld + c]; }

    BasicMatrixView sub(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        return {data + r0 * ld + c0, nr, nc, ld};
    }

    operator BasicMatrixView<const T>() const { return {data, rows, cols, ld}; }
};

using MatrixView = BasicMatrixView<double>;
using ConstMatrixView = BasicMatrixView<const double>;

/// Owning dense double-precision matrix, row-major, leadingDim >= cols.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : DenseMatrix(rows, cols, cols) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::size_t leadingDim);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t leadingDim() const { return ld_; }

    double& operator()(std::size_t r, std::size_t c) { return buf_[r * ld_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return buf_[r * ld_ + c]; }

    MatrixView view() { return {buf_.data(), rows_, cols_, ld_}; }
    ConstMatrixView view() const { return {buf_.data(), rows_, cols_, ld_}; }
    operator MatrixView() { return view(); }
    operator ConstMatrixView() const { return view(); }

    void fill(double v);

    // Compares logical contents only (padding past cols is ignored).
    bool operator==(const DenseMatrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t ld_ = 0;
    std::vector<double> buf_;
};

// Entries uniform in [-1, 1].
void fill_uniform(MatrixView m, std::mt19937_64& rng);
// Integer entries uniform in [lo, hi].
void fill_integers(MatrixView m, std::mt19937_64& rng, std::int64_t lo = -8, std::int64_t hi = 8);

double max_abs(ConstMatrixView m);

/// max |C - Cref| / (k * max|A| * max|B|); the raw max difference when the
/// normalizer vanishes.
double normalized_error(ConstMatrixView C, ConstMatrixView Cref, ConstMatrixView A, ConstMatrixView B);

}  // namespace fmm
