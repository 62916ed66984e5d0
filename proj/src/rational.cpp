#include "fmm/rational.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace fmm {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t value = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (s.empty() || ec != std::errc{} || ptr != last) {
        throw std::invalid_argument("unparseable coefficient '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Rational parse_rational(std::string_view token) {
    const auto slash = token.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(token, token));

    const std::int64_t num = parse_int(token.substr(0, slash), token);
    const auto den_text = token.substr(slash + 1);
    if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) {
        throw std::invalid_argument("denominator must be a positive integer in '" +
                                    std::string(token) + "'");
    }
    const std::int64_t den = parse_int(den_text, token);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(token) + "'");
    return Rational(num, den);
}

std::string to_string(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw std::invalid_argument("ragged RationalMatrix initializer");
        for (auto v : row) data_.emplace_back(v);
    }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("RationalMatrix product: dimension mismatch");
    RationalMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (is_zero(a)) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

std::size_t nnz(const RationalMatrix& m) {
    std::size_t count = 0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (!is_zero(m(r, c))) ++count;
    return count;
}

}  // namespace fmm
