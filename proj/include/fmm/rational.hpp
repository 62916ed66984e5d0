#pragma once

#include <boost/rational.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace fmm {

// Exact coefficient scalar. boost::rational keeps the denominator positive and
// the fraction reduced after every operation.
using Rational = boost::rational<std::int64_t>;

// Parses `INT` or `INT/POSINT`. Throws std::invalid_argument on malformed text
// or a zero denominator.
Rational parse_rational(std::string_view token);

// Inverse of parse_rational: `-1`, `1/2`, `0`.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

// boost::rational's mixed integer comparisons recurse under C++20 rewritten
// operators; compare through these instead.
inline bool is_zero(const Rational& q) { return q.numerator() == 0; }
inline bool is_one(const Rational& q) { return q.numerator() == 1 && q.denominator() == 1; }

/// Dense row-major matrix of exact rationals. Used for U, V, W and their
/// Kronecker products; never on the hot path.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols);
    RationalMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

    static RationalMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const RationalMatrix&) const = default;

    RationalMatrix operator*(const RationalMatrix& rhs) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

std::size_t nnz(const RationalMatrix& m);

}  // namespace fmm
