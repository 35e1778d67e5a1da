#include "oforge/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace oforge {

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool RatMatrix::nonnegative() const {
    for (const auto& e : entries_)
        if (e < 0) return false;
    return true;
}

bool RatMatrix::is_zero() const {
    for (const auto& e : entries_)
        if (e != 0) return false;
    return true;
}

RatMatrix RatMatrix::operator*(const RatMatrix& other) const {
    if (cols_ != other.rows_)
        throw std::invalid_argument("matrix product: dimension mismatch");
    RatMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) {
                const Rational& b = other.at(k, j);
                if (b != 0) out.at(i, j) += a * b;
            }
        }
    return out;
}

RatMatrix RatMatrix::operator-(const RatMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix difference: dimension mismatch");
    RatMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = entries_[i] - other.entries_[i];
    return out;
}

std::vector<Rational> RatMatrix::apply(const std::vector<Rational>& v) const {
    if (v.size() != cols_)
        throw std::invalid_argument("matrix apply: dimension mismatch");
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != 0) out[i] += at(i, j) * v[j];
    return out;
}

std::string RatMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << format_rational(at(i, j));
        }
        if (i + 1 < rows_) os << '\n';
    }
    return os.str();
}

namespace {

std::size_t integer_bits(const Integer& v) {
    if (v == 0) return 0;
    return msb(abs(v)) + 1;
}

}  // namespace

std::optional<RatMatrix> solve_linear(const RatMatrix& a, const RatMatrix& b,
                                      std::size_t max_bits) {
    if (!a.square() || a.rows() != b.rows())
        throw std::invalid_argument("solve_linear: shape mismatch");
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    if (n == 0) return RatMatrix(0, m);

    // Clear denominators row by row: scaling row i of [A|B] by the lcm of
    // its denominators leaves the solution unchanged.
    std::vector<std::vector<Integer>> t(n, std::vector<Integer>(n + m));
    for (std::size_t i = 0; i < n; ++i) {
        Integer l = 1;
        for (std::size_t j = 0; j < n; ++j) l = lcm(l, denominator(a.at(i, j)));
        for (std::size_t j = 0; j < m; ++j) l = lcm(l, denominator(b.at(i, j)));
        for (std::size_t j = 0; j < n; ++j) {
            Rational s = a.at(i, j) * l;
            t[i][j] = numerator(s);
        }
        for (std::size_t j = 0; j < m; ++j) {
            Rational s = b.at(i, j) * l;
            t[i][n + j] = numerator(s);
        }
    }

    // Bareiss fraction-free forward elimination.
    Integer prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && t[pivot][k] == 0) ++pivot;
        if (pivot == n) return std::nullopt;  // singular
        if (pivot != k) std::swap(t[pivot], t[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n + m; ++j) {
                t[i][j] = (t[k][k] * t[i][j] - t[i][k] * t[k][j]) / prev;
                if (integer_bits(t[i][j]) > max_bits)
                    throw std::overflow_error(
                        "solve_linear: entry exceeded bit-size guard");
            }
            t[i][k] = 0;
        }
        prev = t[k][k];
    }

    // Back substitution in rationals.
    RatMatrix x(n, m);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t i = n; i-- > 0;) {
            Rational acc(t[i][n + c]);
            for (std::size_t j = i + 1; j < n; ++j)
                acc -= Rational(t[i][j]) * x.at(j, c);
            x.at(i, c) = acc / Rational(t[i][i]);
        }
    }
    return x;
}

std::optional<RatMatrix> neumann_inverse(const RatMatrix& w,
                                         std::size_t max_bits) {
    if (!w.square()) throw std::invalid_argument("neumann_inverse: non-square");
    RatMatrix lhs = RatMatrix::identity(w.rows()) - w;
    return solve_linear(lhs, RatMatrix::identity(w.rows()), max_bits);
}

}  // namespace oforge
