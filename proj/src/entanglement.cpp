#include "lambdacav/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "lambdacav/numerics.hpp"

namespace lambdacav {

namespace {

constexpr double kNoPhotonThreshold = 1e-20;

Mat3 density_from_amplitudes(Complex E, Complex F, Complex G) {
    Mat3 rho{};
    rho[0 * 3 + 0] = std::norm(E);
    rho[0 * 3 + 1] = E * std::conj(F);
    rho[0 * 3 + 2] = E * std::conj(G);
    rho[1 * 3 + 0] = F * std::conj(E);
    rho[1 * 3 + 1] = std::norm(F);
    rho[1 * 3 + 2] = F * std::conj(G);
    rho[2 * 3 + 0] = G * std::conj(E);
    rho[2 * 3 + 1] = G * std::conj(F);
    // The |g> population collects both the |g>|0> and the one-photon sector.
    rho[2 * 3 + 2] = 1.0 - std::norm(E) - std::norm(F);
    return rho;
}

} // namespace

Mat3 reduced_density(const AmplitudeSolver& solver, const InitialAtomState& init,
                     double t) {
    init.validate();
    const double f0 = init.f0();
    return density_from_amplitudes(f0 * solver.e_factor(t),
                                   f0 * solver.f_factor(t), init.g0());
}

Mat3 reduced_density(const PhysicalParams& p, const InitialAtomState& init,
                     double t) {
    return reduced_density(AmplitudeSolver(p), init, t);
}

double linear_entropy(const Mat3& rho) {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    double tr2 = 0.0;
    for (const Complex& v : rho) tr2 += std::norm(v);
    return 1.0 - tr2;
}

namespace {

double avg_linear_entropy_once(const AmplitudeSolver& solver, double t,
                               int n_theta, int n_phi) {
    const auto& rule = num::gauss_legendre(n_theta);
    const Complex e = solver.e_factor(t);
    const Complex f = solver.f_factor(t);
    double total = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double mu = rule.nodes[i]; // cos(theta)
        const double c = std::sqrt((1.0 + mu) / 2.0); // cos(theta/2)
        const double s = std::sqrt((1.0 - mu) / 2.0);
        double phi_sum = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / n_phi;
            const Complex G = s * std::exp(Complex{0.0, phi});
            phi_sum += linear_entropy(density_from_amplitudes(c * e, c * f, G));
        }
        total += rule.weights[i] * phi_sum * (2.0 * std::numbers::pi / n_phi);
    }
    return total / (4.0 * std::numbers::pi);
}

} // namespace

double avg_linear_entropy(const AmplitudeSolver& solver, double t, int n_theta,
                          int n_phi, bool check_convergence) {
    if (n_theta < 8) throw InvalidInput("avg_linear_entropy: order must be >= 8");
    double v = avg_linear_entropy_once(solver, t, n_theta, n_phi);
    if (check_convergence) {
        double v2 = avg_linear_entropy_once(solver, t, 2 * n_theta, 2 * n_phi);
        if (std::abs(v2 - v) > 1e-8)
            throw QuadratureNotConverged(
                "avg_linear_entropy: order doubling moved the value by > 1e-8");
        return v2;
    }
    return v;
}

double avg_linear_entropy(const PhysicalParams& p, double t, int n_theta,
                          int n_phi, bool check_convergence) {
    return avg_linear_entropy(AmplitudeSolver(p), t, n_theta, n_phi,
                              check_convergence);
}

namespace {

TwoAtomPureState bsm_assemble_raw(Complex e_t, Complex f_t, Complex w_t,
                                  double f01, Complex g01, double f02,
                                  Complex g02) {
    const Complex o1 = f01 * w_t, o2 = f02 * w_t;
    const Complex x12 = f01 * e_t * o2, x21 = f02 * e_t * o1;
    const Complex y12 = f01 * f_t * o2, y21 = f02 * f_t * o1;
    const Complex z12 = g01 * o2, z21 = g02 * o1;

    Mat3 m{};
    m[0 * 3 + 2] = x12;
    m[2 * 3 + 0] = -x21;
    m[1 * 3 + 2] = y12;
    m[2 * 3 + 1] = -y21;
    m[2 * 3 + 2] = z12 - z21;

    double n = 0.0;
    for (const Complex& v : m) n += std::norm(v);
    if (n < kNoPhotonThreshold)
        throw NoPhoton("bsm_project: no photon amplitude to project on");

    // Phase gauge: first entry within 1e-6 of the max magnitude turns real
    // positive, so the arbitrary phase of w(t) cancels.
    double maxmag = 0.0;
    for (const Complex& v : m) maxmag = std::max(maxmag, std::abs(v));
    Complex gauge{1.0, 0.0};
    for (const Complex& v : m) {
        if (std::abs(v) >= 1e-6 * maxmag) {
            gauge = std::conj(v) / std::abs(v);
            break;
        }
    }
    const double inv = 1.0 / std::sqrt(n);
    TwoAtomPureState state;
    for (int i = 0; i < 9; ++i) state.coeffs[i] = m[i] * gauge * inv;
    state.weight = n;
    return state;
}

} // namespace

TwoAtomPureState bsm_assemble(Complex e_t, Complex f_t, Complex w_t,
                              const InitialAtomState& init1,
                              const InitialAtomState& init2) {
    return bsm_assemble_raw(e_t, f_t, w_t, init1.f0(), init1.g0(), init2.f0(),
                            init2.g0());
}

TwoAtomPureState bsm_project(const PhysicalParams& p,
                             const InitialAtomState& init1,
                             const InitialAtomState& init2, double t,
                             const PulseShape& pulse, double window,
                             double rel_tol) {
    init1.validate();
    init2.validate();
    if (!(t > 0.0)) throw NoPhoton("bsm_project: no photon at t <= 0");
    AmplitudeSolver solver(p);
    const Complex w = solver.overlap_w(t, pulse, window, rel_tol);
    return bsm_assemble(solver.e_factor(t), solver.f_factor(t), w, init1, init2);
}

double negativity(const TwoAtomPureState& state) {
    const auto sv = num::svd3(state.coeffs);
    const double s = sv[0] + sv[1] + sv[2];
    return std::max(0.0, (s * s - 1.0) / 2.0);
}

Mat9 two_atom_density(const TwoAtomPureState& state) {
    Mat9 rho{};
    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b)
            rho[a * 9 + b] = state.coeffs[a] * std::conj(state.coeffs[b]);
    return rho;
}

Mat9 partial_transpose_a(const Mat9& rho) {
    Mat9 pt{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    pt[(i * 3 + j) * 9 + (k * 3 + l)] =
                        rho[(k * 3 + j) * 9 + (i * 3 + l)];
    return pt;
}

double negativity_via_pt(const TwoAtomPureState& state) {
    const Mat9 pt = partial_transpose_a(two_atom_density(state));
    std::vector<Complex> a(pt.begin(), pt.end());
    const auto spec = num::hermitian_eigen(a, 9, false);
    double neg = 0.0;
    for (double lam : spec.eigenvalues)
        if (lam < 0.0) neg -= lam;
    return neg;
}

namespace {

double avg_negativity_once(const AmplitudeSolver& solver, double t, int n_theta,
                           int n_phi, int threads) {
    const auto& rule = num::gauss_legendre(n_theta);
    const Complex e = solver.e_factor(t);
    const Complex f = solver.f_factor(t);
    // The normalized state does not depend on w(t); any nonzero stand-in
    // gives the same negativity, and w = 0 (t = 0) makes every node NoPhoton.
    const Complex w = t > 0.0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};

    // Node tables: f0 = cos(theta/2) = sqrt((1+mu)/2), |g0| = sqrt((1-mu)/2).
    std::vector<double> f0(n_theta), g0mag(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        f0[i] = std::sqrt((1.0 + rule.nodes[i]) / 2.0);
        g0mag[i] = std::sqrt((1.0 - rule.nodes[i]) / 2.0);
    }
    std::vector<Complex> eiphi(n_phi);
    for (int j = 0; j < n_phi; ++j)
        eiphi[j] = std::exp(Complex{0.0, 2.0 * std::numbers::pi * j / n_phi});

    // Partial sums per outer theta node keep the reduction order fixed, so
    // results are identical for any thread count.
    std::vector<double> partial(n_theta, 0.0);
    auto work = [&](int i_begin, int i_end) {
        for (int i1 = i_begin; i1 < i_end; ++i1) {
            double acc = 0.0;
            for (int j1 = 0; j1 < n_phi; ++j1) {
                const Complex g01 = g0mag[i1] * eiphi[j1];
                for (int i2 = 0; i2 < n_theta; ++i2) {
                    for (int j2 = 0; j2 < n_phi; ++j2) {
                        const Complex g02 = g0mag[i2] * eiphi[j2];
                        double neg = 0.0;
                        try {
                            neg = negativity(bsm_assemble_raw(
                                e, f, w, f0[i1], g01, f0[i2], g02));
                        } catch (const NoPhoton&) {
                            neg = 0.0; // measure-zero corner, contributes 0
                        }
                        acc += rule.weights[i2] * neg;
                    }
                }
            }
            partial[i1] = acc * rule.weights[i1];
        }
    };

    const int nthreads = std::clamp(threads, 1, n_theta);
    if (nthreads == 1) {
        work(0, n_theta);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n_theta + nthreads - 1) / nthreads;
        for (int k = 0; k < nthreads; ++k) {
            int b = k * chunk, e2 = std::min(n_theta, b + chunk);
            if (b < e2) pool.emplace_back(work, b, e2);
        }
        for (auto& th : pool) th.join();
    }

    double total = 0.0;
    for (double v : partial) total += v;
    const double wphi = 2.0 * std::numbers::pi / n_phi;
    return total * wphi * wphi / (16.0 * std::numbers::pi * std::numbers::pi);
}

} // namespace

double avg_negativity(const AmplitudeSolver& solver, double t, int n_theta,
                      int n_phi, bool check_convergence, int threads) {
    if (!(t > 0.0)) throw NoPhoton("avg_negativity: undefined at t <= 0");
    if (n_theta < 8) throw InvalidInput("avg_negativity: order must be >= 8");
    double v = avg_negativity_once(solver, t, n_theta, n_phi, threads);
    if (check_convergence) {
        double v2 =
            avg_negativity_once(solver, t, 2 * n_theta, 2 * n_phi, threads);
        if (std::abs(v2 - v) > 1e-6)
            throw QuadratureNotConverged(
                "avg_negativity: order doubling moved the value by > 1e-6");
        return v2;
    }
    return v;
}

double avg_negativity(const PhysicalParams& p, double t, int n_theta, int n_phi,
                      bool check_convergence, int threads) {
    return avg_negativity(AmplitudeSolver(p), t, n_theta, n_phi,
                          check_convergence, threads);
}

} // namespace lambdacav
