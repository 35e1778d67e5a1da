#include "oforge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oforge {

namespace {

std::vector<double> to_doubles(const RatMatrix& w) {
    std::vector<double> a(w.rows() * w.cols());
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j)
            a[i * w.cols() + j] = static_cast<double>(w.at(i, j));
    return a;
}

// Gelfand estimate via repeated squaring with max-row-sum normalization:
// sp(A) = lim ||A^m||^{1/m}. Sixty squarings (m = 2^60) push the norm
// overestimate factor poly(m)^{1/m} far below any requested tolerance.
double gelfand_radius(std::vector<double> b, std::size_t n) {
    auto row_norm = [n](const std::vector<double>& m) {
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += std::fabs(m[i * n + j]);
            best = std::max(best, s);
        }
        return best;
    };
    double s = row_norm(b);
    if (s == 0.0) return 0.0;
    for (auto& e : b) e /= s;
    // Invariant: log_sp = log||A^{2^k}|| / 2^k with b = A^{2^k} normalized.
    double log_sp = std::log(s);
    double scale = 2.0;
    const int squarings = 60;
    std::vector<double> sq(n * n);
    for (int k = 1; k <= squarings; ++k) {
        std::fill(sq.begin(), sq.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                const double v = b[i * n + l];
                if (v == 0.0) continue;
                for (std::size_t j = 0; j < n; ++j)
                    sq[i * n + j] += v * b[l * n + j];
            }
        const double t = row_norm(sq);
        if (t == 0.0) return 0.0;
        for (auto& e : sq) e /= t;
        b.swap(sq);
        log_sp += std::log(t) / scale;
        scale *= 2.0;
    }
    return std::exp(log_sp);
}

}  // namespace

double power_lambda(const RatMatrix& w, double tol) {
    if (!w.square()) throw std::invalid_argument("power_lambda: non-square");
    if (!w.nonnegative())
        throw std::invalid_argument("power_lambda: negative entry");
    const std::size_t n = w.rows();
    if (n == 0) return 0.0;
    if (n == 1) return static_cast<double>(w.at(0, 0));

    // Shift by eps so the iteration vector stays strictly positive:
    // sp(W + eps·I) = sp(W) + eps for nonnegative W.
    const double eps = tol / 4.0;
    std::vector<double> a = to_doubles(w);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] += eps;

    std::vector<double> x(n, 1.0), y(n);
    for (int iter = 0; iter < 20000; ++iter) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
            y[i] = s;
            const double r = s / x[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            peak = std::max(peak, s);
        }
        if (hi - lo <= tol / 2.0)
            return std::max(0.0, (lo + hi) / 2.0 - eps);
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / peak;
    }
    // Reducible matrices can keep the Collatz-Wielandt bracket open; fall
    // back to the norm-root limit, which needs no positivity.
    return std::max(0.0, gelfand_radius(to_doubles(w), n));
}

bool is_contracting(const RatMatrix& w, std::size_t max_bits) {
    if (!w.square()) throw std::invalid_argument("is_contracting: non-square");
    if (!w.nonnegative())
        throw std::invalid_argument("is_contracting: negative entry");
    auto inv = neumann_inverse(w, max_bits);
    return inv.has_value() && inv->nonnegative();
}

std::vector<Rational> contraction_vector(const RatMatrix& w,
                                         std::size_t max_bits) {
    auto inv = neumann_inverse(w, max_bits);
    if (!inv || !inv->nonnegative())
        throw std::domain_error("contraction_vector: matrix is not contracting");
    std::vector<Rational> v(w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) v[i] += inv->at(i, j);
    return v;
}

std::vector<double> cyclic_spectral_radii(const std::vector<RatMatrix>& blocks,
                                          double tol) {
    const std::size_t k = blocks.size();
    if (k == 0) return {};
    for (std::size_t i = 0; i < k; ++i)
        if (blocks[i].cols() != blocks[(i + 1) % k].rows())
            throw std::invalid_argument(
                "cyclic_spectral_radii: block shapes do not chain");
    std::vector<double> out(k);
    for (std::size_t r = 0; r < k; ++r) {
        RatMatrix p = blocks[r];
        for (std::size_t s = 1; s < k; ++s) p = p * blocks[(r + s) % k];
        out[r] = power_lambda(p, tol);
    }
    return out;
}

CyclicInvarianceReport cyclic_sp_invariance(const std::vector<RatMatrix>& blocks,
                                            double tol) {
    CyclicInvarianceReport rep;
    rep.radii = cyclic_spectral_radii(blocks, tol);
    if (rep.radii.empty()) {
        rep.agree = true;
        return rep;
    }
    const auto [lo, hi] = std::minmax_element(rep.radii.begin(), rep.radii.end());
    rep.max_spread = *hi - *lo;
    rep.agree = rep.max_spread <= tol;
    return rep;
}

bool is_nilpotent(const RatMatrix& w) {
    if (!w.square()) throw std::invalid_argument("is_nilpotent: non-square");
    RatMatrix p = w;
    for (std::size_t i = 0; i + 1 < w.rows(); ++i) {
        if (p.is_zero()) return true;
        p = p * w;
    }
    return p.is_zero();
}

}  // namespace oforge
