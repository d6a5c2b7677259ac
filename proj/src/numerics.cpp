#include "lambdacav/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace lambdacav::num {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    if (n == 0) return {1.0, 0.0};
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

QuadratureRule build_rule(int n) {
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n / 2 + n % 2; ++i) {
        // Tricomi-style initial guess, then Newton.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(n, x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        auto [p, dp] = legendre(n, x);
        (void)p;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x; // guesses come out descending; store ascending halves
        r.weights[i] = w;
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        r.nodes[n / 2] = 0.0;
        auto [p, dp] = legendre(n, 0.0);
        (void)p;
        r.weights[n / 2] = 2.0 / (dp * dp);
    }
    return r;
}

} // namespace

const QuadratureRule& gauss_legendre(int n) {
    if (n < 1 || n > 512) throw InvalidInput("gauss_legendre: order must be in [1, 512]");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

namespace {

Complex panel(const std::function<Complex(double)>& f, double a, double b,
              const QuadratureRule& rule) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Complex acc{0.0, 0.0};
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * acc;
}

struct AdaptiveCtx {
    const std::function<Complex(double)>& f;
    const QuadratureRule& lo;
    const QuadratureRule& hi;
    double budget; // absolute error budget for the whole interval
    double width;  // total interval width
};

Complex refine(const AdaptiveCtx& ctx, double a, double b, int depth) {
    Complex ilo = panel(ctx.f, a, b, ctx.lo);
    Complex ihi = panel(ctx.f, a, b, ctx.hi);
    double err = std::abs(ihi - ilo);
    if (err <= ctx.budget * (b - a) / ctx.width) return ihi;
    if (depth >= 24)
        throw QuadratureNotConverged("adaptive_integrate: max depth 24 reached");
    double mid = 0.5 * (a + b);
    return refine(ctx, a, mid, depth + 1) + refine(ctx, mid, b, depth + 1);
}

} // namespace

Complex adaptive_integrate(const std::function<Complex(double)>& f, double a,
                           double b, double rel_tol, double abs_budget) {
    if (!(a < b)) throw InvalidInput("adaptive_integrate: need a < b");
    const QuadratureRule& lo = gauss_legendre(16);
    const QuadratureRule& hi = gauss_legendre(32);
    const int n0 = 8;
    double budget = abs_budget;
    if (budget <= 0.0) {
        // First pass sets the scale for the relative tolerance.
        Complex est{0.0, 0.0};
        double magsum = 0.0;
        for (int i = 0; i < n0; ++i) {
            double pa = a + (b - a) * i / n0;
            double pb = a + (b - a) * (i + 1) / n0;
            Complex p = panel(f, pa, pb, hi);
            est += p;
            magsum += std::abs(p);
        }
        double scale = std::max(std::abs(est), 1e-3 * magsum);
        if (scale == 0.0) scale = 1e-300; // zero integrands converge at once
        budget = rel_tol * scale;
    }
    AdaptiveCtx ctx{f, lo, hi, budget, b - a};
    Complex total{0.0, 0.0};
    for (int i = 0; i < n0; ++i) {
        double pa = a + (b - a) * i / n0;
        double pb = a + (b - a) * (i + 1) / n0;
        total += refine(ctx, pa, pb, 0);
    }
    return total;
}

HermitianSpectrum hermitian_eigen(const std::vector<Complex>& a, int n,
                                  bool want_vectors) {
    if (n < 1 || static_cast<size_t>(n) * n != a.size())
        throw InvalidInput("hermitian_eigen: bad dimensions");
    double amax = 0.0, defect = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            amax = std::max(amax, std::abs(a[i * n + j]));
            defect = std::max(defect, std::abs(a[i * n + j] - std::conj(a[j * n + i])));
        }
    if (defect > 1e-10 * std::max(1.0, amax))
        throw NotHermitian("hermitian_eigen: matrix is not Hermitian");

    std::vector<Complex> m = a;
    std::vector<Complex> v;
    if (want_vectors) {
        v.assign(static_cast<size_t>(n) * n, Complex{0.0, 0.0});
        for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
    }
    auto off = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += std::norm(m[i * n + j]);
        return std::sqrt(s);
    };
    const double tol = 1e-15 * std::max(1.0, amax) * n;
    for (int sweep = 0; sweep < 100 && off() > tol; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                Complex apq = m[p * n + q];
                double mag = std::abs(apq);
                if (mag == 0.0) continue;
                double app = m[p * n + p].real();
                double aqq = m[q * n + q].real();
                // Phase factor turns the pivot real; then a classical rotation.
                Complex phase = apq / mag;
                double tau = (aqq - app) / (2.0 * mag);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                Complex sp = s * phase;
                // Rows/columns p and q of the unitary J: J_pp = c, J_pq = s*phase,
                // J_qp = -s*conj(phase), J_qq = c. Update m <- J^dag m J.
                for (int k = 0; k < n; ++k) {
                    Complex mkp = m[k * n + p], mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - std::conj(sp) * mkq;
                    m[k * n + q] = sp * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    Complex mpk = m[p * n + k], mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - sp * mqk;
                    m[q * n + k] = std::conj(sp) * mpk + c * mqk;
                }
                m[p * n + q] = Complex{0.0, 0.0};
                m[q * n + p] = Complex{0.0, 0.0};
                m[p * n + p] = Complex{m[p * n + p].real(), 0.0};
                m[q * n + q] = Complex{m[q * n + q].real(), 0.0};
                if (want_vectors) {
                    for (int k = 0; k < n; ++k) {
                        Complex vkp = v[k * n + p], vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - std::conj(sp) * vkq;
                        v[k * n + q] = sp * vkp + c * vkq;
                    }
                }
            }
        }
    }

    HermitianSpectrum spec;
    spec.n = n;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = m[i * n + i].real();
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return diag[i] < diag[j]; });
    spec.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) spec.eigenvalues[i] = diag[order[i]];
    if (want_vectors) {
        spec.eigenvectors.resize(static_cast<size_t>(n) * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                spec.eigenvectors[i * n + j] = v[i * n + order[j]];
    }
    return spec;
}

std::array<double, 3> svd3(const std::array<Complex, 9>& m) {
    // Columns of a working copy; one-sided Jacobi on column pairs.
    std::array<std::array<Complex, 3>, 3> col;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) col[j][i] = m[i * 3 + j];

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                double app = 0.0, aqq = 0.0;
                Complex apq{0.0, 0.0};
                for (int i = 0; i < 3; ++i) {
                    app += std::norm(col[p][i]);
                    aqq += std::norm(col[q][i]);
                    apq += std::conj(col[p][i]) * col[q][i];
                }
                double mag = std::abs(apq);
                if (mag <= 1e-300 || mag * mag <= 1e-32 * app * aqq) continue;
                rotated = true;
                Complex phase = apq / mag;
                double tau = (aqq - app) / (2.0 * mag);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                Complex sp = s * phase;
                for (int i = 0; i < 3; ++i) {
                    Complex cp = col[p][i], cq = col[q][i];
                    col[p][i] = c * cp - std::conj(sp) * cq;
                    col[q][i] = sp * cp + c * cq;
                }
            }
        }
        if (!rotated) break;
    }
    std::array<double, 3> sv;
    for (int j = 0; j < 3; ++j) {
        double s2 = 0.0;
        for (int i = 0; i < 3; ++i) s2 += std::norm(col[j][i]);
        sv[j] = std::sqrt(s2);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

Complex newton_polish(const std::vector<Complex>& coeffs, Complex guess,
                      int max_iter) {
    if (coeffs.size() < 2) throw InvalidInput("newton_polish: degree must be >= 1");
    double scale = 1.0;
    for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
    const double target = 1e-12 * scale;

    auto eval = [&](Complex s) {
        Complex p{0.0, 0.0}, dp{0.0, 0.0};
        for (size_t k = coeffs.size(); k-- > 0;) {
            dp = dp * s + p;
            p = p * s + coeffs[k];
        }
        return std::pair{p, dp};
    };

    Complex x = guess;
    for (int it = 0; it < max_iter; ++it) {
        auto [p, dp] = eval(x);
        if (std::abs(p) <= target) return x;
        if (dp == Complex{0.0, 0.0})
            throw NoConvergence("newton_polish: vanishing derivative");
        x -= p / dp;
    }
    auto [p, dp] = eval(x);
    (void)dp;
    if (std::abs(p) <= target) return x;
    throw NoConvergence("newton_polish: no convergence within iteration limit");
}

} // namespace lambdacav::num
