#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "lambdacav/errors.hpp"

// Self-contained numerical kernels: Gauss-Legendre rules, adaptive panel
// quadrature, a complex Hermitian Jacobi eigensolver (n <= 9), a one-sided
// Jacobi SVD for 3x3 complex matrices, and Newton polishing of polynomial
// roots. No external linear-algebra dependency.

namespace lambdacav::num {

using Complex = std::complex<double>;

struct QuadratureRule {
    std::vector<double> nodes;   // abscissae in (-1, 1), strictly increasing
    std::vector<double> weights; // positive, sum to 2
};

// Nodes/weights by Newton iteration on P_n with asymptotic initial guesses.
// Rules are cached behind a read-only table; 1 <= n <= 512.
const QuadratureRule& gauss_legendre(int n);

// Adaptive panel Gauss-Legendre over [a, b]. Each panel is accepted when the
// order-16 vs order-32 estimates agree within the panel's share of the global
// absolute budget; panels are bisected otherwise, up to depth 24. The budget
// is rel_tol times an internal first-pass magnitude estimate, or abs_budget
// when a caller coordinates several subranges under one error allowance.
Complex adaptive_integrate(const std::function<Complex(double)>& f, double a,
                           double b, double rel_tol, double abs_budget = 0.0);

struct HermitianSpectrum {
    std::vector<double> eigenvalues;      // ascending
    std::vector<Complex> eigenvectors;    // column-major n*n, empty unless requested
    int n = 0;
};

// Cyclic complex Jacobi rotations; intended for n <= 9.
// Throws NotHermitian when max |A - A^dag| exceeds 1e-10 * max(1, |A|_max).
HermitianSpectrum hermitian_eigen(const std::vector<Complex>& a, int n,
                                  bool want_vectors = false);

// Singular values of a 3x3 complex matrix (row-major), descending.
// One-sided Jacobi: orthogonalizes column pairs, sigma = column norms.
std::array<double, 3> svd3(const std::array<Complex, 9>& m);

// Newton refinement of a polynomial root. coeffs[k] multiplies s^k.
// Succeeds when |p(root)| <= 1e-12 * max(1, max_k |coeffs[k]|).
Complex newton_polish(const std::vector<Complex>& coeffs, Complex guess,
                      int max_iter = 50);

} // namespace lambdacav::num
