#pragma once

// Shared test-side utilities. The eigenvalue routine here is an independent
// oracle (shifted QR on the Hessenberg form) used to cross-check the library
// root finder; it must not share code with the implementation under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace testsup {

using Complex = std::complex<double>;

// splitmix64-based uniform generator; identical streams on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    Complex unit_complex() {
        const double re = uniform(-1.0, 1.0), im = uniform(-1.0, 1.0);
        return {re, im};
    }

  private:
    std::uint64_t state_;
};

// Eigenvalues of a small dense complex matrix (row-major) by single-shift QR
// with Givens rotations after Householder-free Hessenberg reduction (the
// matrices used in tests are <= 9x9; companion matrices are already
// Hessenberg).
inline std::vector<Complex> small_eigenvalues(std::vector<Complex> h, int n) {
    // Hessenberg reduction by Gaussian similarity transforms.
    auto at = [&](int i, int j) -> Complex& { return h[i * n + j]; };
    for (int k = 1; k + 1 < n; ++k) {
        int piv = k;
        for (int i = k; i < n; ++i)
            if (std::abs(at(i, k - 1)) > std::abs(at(piv, k - 1))) piv = i;
        if (std::abs(at(piv, k - 1)) == 0.0) continue;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(at(piv, j), at(k, j));
            for (int i = 0; i < n; ++i) std::swap(at(i, piv), at(i, k));
        }
        for (int i = k + 1; i < n; ++i) {
            const Complex m = at(i, k - 1) / at(k, k - 1);
            if (m == Complex{}) continue;
            for (int j = 0; j < n; ++j) at(i, j) -= m * at(k, j);
            for (int j = 0; j < n; ++j) at(j, k) += m * at(j, i);
            at(i, k - 1) = {0.0, 0.0};
        }
    }

    std::vector<Complex> eig;
    int hi = n - 1;
    int guard = 0;
    while (hi >= 0 && ++guard < 10000) {
        if (hi == 0) {
            eig.push_back(at(0, 0));
            break;
        }
        // Deflate converged subdiagonals.
        int lo = hi;
        while (lo > 0 && std::abs(at(lo, lo - 1)) >
                             1e-15 * (std::abs(at(lo - 1, lo - 1)) +
                                      std::abs(at(lo, lo)) + 1e-300))
            --lo;
        if (lo == hi) {
            eig.push_back(at(hi, hi));
            --hi;
            continue;
        }
        if (lo == hi - 1) {
            // Closed-form 2x2 block.
            const Complex a = at(lo, lo), b = at(lo, hi), c = at(hi, lo),
                          d = at(hi, hi);
            const Complex tr = a + d;
            const Complex disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
            eig.push_back((tr + disc) / 2.0);
            eig.push_back((tr - disc) / 2.0);
            hi = lo - 1;
            continue;
        }
        // Wilkinson shift from the trailing 2x2 of the active block.
        const Complex a = at(hi - 1, hi - 1), b = at(hi - 1, hi),
                      c = at(hi, hi - 1), d = at(hi, hi);
        const Complex tr = a + d;
        const Complex disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
        Complex s1 = (tr + disc) / 2.0, s2 = (tr - disc) / 2.0;
        Complex shift = (std::abs(s1 - d) < std::abs(s2 - d)) ? s1 : s2;

        for (int i = lo; i <= hi; ++i) at(i, i) -= shift;
        // QR by Givens on the Hessenberg band, then RQ.
        std::vector<std::array<Complex, 2>> rot(hi - lo);
        for (int k = lo; k < hi; ++k) {
            Complex x = at(k, k), y = at(k + 1, k);
            double r = std::sqrt(std::norm(x) + std::norm(y));
            Complex cs{1.0, 0.0}, sn{0.0, 0.0};
            if (r > 0.0) {
                cs = std::conj(x) / r;
                sn = std::conj(y) / r;
            }
            rot[k - lo] = {cs, sn};
            for (int j = k; j <= hi; ++j) {
                const Complex t1 = at(k, j), t2 = at(k + 1, j);
                at(k, j) = cs * t1 + sn * t2;
                at(k + 1, j) = -std::conj(sn) * t1 + std::conj(cs) * t2;
            }
        }
        for (int k = lo; k < hi; ++k) {
            const Complex cs = rot[k - lo][0], sn = rot[k - lo][1];
            for (int i = lo; i <= std::min(hi, k + 2); ++i) {
                const Complex t1 = at(i, k), t2 = at(i, k + 1);
                at(i, k) = t1 * std::conj(cs) + t2 * std::conj(sn);
                at(i, k + 1) = -t1 * sn + t2 * cs;
            }
        }
        for (int i = lo; i <= hi; ++i) at(i, i) += shift;
    }
    return eig;
}

// Roots of the monic cubic s^3 + a2 s^2 + a1 s + a0 via the companion matrix.
inline std::vector<Complex> companion_cubic_roots(Complex a2, Complex a1,
                                                  Complex a0) {
    std::vector<Complex> c(9, Complex{0.0, 0.0});
    c[0 * 3 + 2] = -a0;
    c[1 * 3 + 0] = {1.0, 0.0};
    c[1 * 3 + 2] = -a1;
    c[2 * 3 + 1] = {1.0, 0.0};
    c[2 * 3 + 2] = -a2;
    return small_eigenvalues(std::move(c), 3);
}

// Greedy set match: max over one set of the distance to the nearest element
// of the other.
inline double set_distance(std::vector<Complex> a, std::vector<Complex> b) {
    double worst = 0.0;
    for (const Complex& x : a) {
        double best = 1e300;
        for (const Complex& y : b) best = std::min(best, std::abs(x - y));
        worst = std::max(worst, best);
    }
    return worst;
}

// Complex linear solve by Gaussian elimination with partial pivoting.
inline std::vector<Complex> solve_dense(std::vector<Complex> a,
                                        std::vector<Complex> rhs, int n) {
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[k * n + j]);
            std::swap(rhs[piv], rhs[k]);
        }
        for (int i = k + 1; i < n; ++i) {
            const Complex m = a[i * n + k] / a[k * n + k];
            for (int j = k; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
            rhs[i] -= m * rhs[k];
        }
    }
    std::vector<Complex> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Complex s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
        x[i] = s / a[i * n + i];
    }
    return x;
}

// det(A - lambda I) for the Sturm-style eigenvalue counting oracle.
inline Complex char_poly_det(const std::vector<Complex>& a0, int n,
                             double lambda) {
    std::vector<Complex> a = a0;
    for (int i = 0; i < n; ++i) a[i * n + i] -= lambda;
    Complex det{1.0, 0.0};
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
        if (std::abs(a[piv * n + k]) == 0.0) return {0.0, 0.0};
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[k * n + j]);
            det = -det;
        }
        det *= a[k * n + k];
        for (int i = k + 1; i < n; ++i) {
            const Complex m = a[i * n + k] / a[k * n + k];
            for (int j = k; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
        }
    }
    return det;
}

} // namespace testsup
