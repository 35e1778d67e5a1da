#pragma once

#include "oforge/matrix.hpp"

#include <vector>

namespace oforge {

// Spectral radius of a nonnegative square matrix, accurate to within tol.
// Uses Collatz-Wielandt bracketing on W + (tol/4)·I with a Gelfand
// repeated-squaring fallback for reducible matrices. The 0x0 matrix has
// spectral radius 0.
double power_lambda(const RatMatrix& w, double tol = 1e-9);

// Exact decision: spectral radius < 1. For a nonnegative W this holds iff
// I - W is invertible with nonnegative inverse (Neumann series criterion).
// Throws std::overflow_error if the exact elimination exceeds max_bits.
bool is_contracting(const RatMatrix& w, std::size_t max_bits = 1u << 20);

// v = (I - W)^{-1}·1 for a contracting W; satisfies W·v = v - 1 exactly
// and v >= 1 entrywise. Throws std::domain_error when W is not contracting.
std::vector<Rational> contraction_vector(const RatMatrix& w,
                                         std::size_t max_bits = 1u << 20);

// Spectral radii of all cyclic rotations of the product B_0·B_1···B_{k-1}.
// The factors may be rectangular as long as consecutive shapes chain and
// the cycle closes. All returned values agree within tol of each other.
std::vector<double> cyclic_spectral_radii(const std::vector<RatMatrix>& blocks,
                                          double tol = 1e-9);

struct CyclicInvarianceReport {
    std::vector<double> radii;  // one per cyclic rotation
    double max_spread = 0.0;
    bool agree = false;  // max_spread <= tol
};

// Computes cyclic_spectral_radii and asserts pairwise agreement within tol.
CyclicInvarianceReport cyclic_sp_invariance(const std::vector<RatMatrix>& blocks,
                                            double tol = 1e-9);

// Exact nilpotency test: W^n == 0 where n is the matrix size.
bool is_nilpotent(const RatMatrix& w);

}  // namespace oforge
