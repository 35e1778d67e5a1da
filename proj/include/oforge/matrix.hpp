#pragma once

#include "oforge/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace oforge {

// Dense matrix of exact rationals. Most callers keep entries nonnegative
// (transition matrices); the solver below works for any entries.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static RatMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Rational& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    bool nonnegative() const;
    bool is_zero() const;

    RatMatrix operator*(const RatMatrix& other) const;
    RatMatrix operator-(const RatMatrix& other) const;

    std::vector<Rational> apply(const std::vector<Rational>& v) const;

    bool operator==(const RatMatrix& other) const = default;

    // Exact rational grid, rows separated by newlines.
    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

// Solves A·X = B exactly by fraction-free (Bareiss) elimination on the
// denominator-cleared system. Returns nullopt when A is singular.
// Throws std::overflow_error when an intermediate entry exceeds max_bits.
std::optional<RatMatrix> solve_linear(const RatMatrix& a, const RatMatrix& b,
                                      std::size_t max_bits = 1u << 20);

// (I - W)^{-1}, or nullopt when I - W is singular.
std::optional<RatMatrix> neumann_inverse(const RatMatrix& w,
                                         std::size_t max_bits = 1u << 20);

}  // namespace oforge
