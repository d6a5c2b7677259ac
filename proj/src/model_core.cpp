#include "lambdacav/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lambdacav/numerics.hpp"

namespace lambdacav {

void PhysicalParams::validate() const {
    if (!(g >= 0.0) || !std::isfinite(g))
        throw InvalidInput("PhysicalParams: g must be finite and >= 0");
    if (!(omega_drive >= 0.0) || !std::isfinite(omega_drive))
        throw InvalidInput("PhysicalParams: omega_drive must be finite and >= 0");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InvalidInput("PhysicalParams: kappa must be finite and > 0");
    if (!std::isfinite(delta) || !std::isfinite(delta_l))
        throw InvalidInput("PhysicalParams: detunings must be finite");
}

void InitialAtomState::validate() const {
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw InvalidInput("InitialAtomState: theta must lie in [0, pi]");
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
        throw InvalidInput("InitialAtomState: phi must lie in [0, 2*pi)");
}

std::array<Complex, 3> cubic_coefficients(const PhysicalParams& p) {
    p.validate();
    const Complex i{0.0, 1.0};
    const double g2 = p.g * p.g;
    const double om2 = p.omega_drive * p.omega_drive;
    const Complex idk = i * p.delta + p.kappa;
    Complex a2 = i * (p.delta + p.delta_l) + p.kappa;
    Complex a1 = g2 + om2 + i * p.delta_l * idk;
    Complex a0 = om2 * idk + i * g2 * p.delta_l;
    return {a2, a1, a0};
}

namespace {

// Cardano seeds for the depressed cubic t^3 + p t + q, any complex branch.
std::array<Complex, 3> cardano_seeds(Complex a2, Complex a1, Complex a0) {
    const Complex shift = a2 / 3.0;
    const Complex p = a1 - a2 * a2 / 3.0;
    const Complex q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const Complex disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    Complex u3 = -q / 2.0 + disc;
    if (std::abs(u3) < std::abs(-q / 2.0 - disc)) u3 = -q / 2.0 - disc;
    std::array<Complex, 3> t;
    if (std::abs(u3) == 0.0) {
        // p == 0 branch: three cube roots of -q.
        Complex r = std::pow(-q, 1.0 / 3.0);
        const Complex w{-0.5, std::sqrt(3.0) / 2.0};
        t = {r, r * w, r * w * w};
    } else {
        Complex u = std::pow(u3, 1.0 / 3.0);
        const Complex w{-0.5, std::sqrt(3.0) / 2.0};
        for (int k = 0; k < 3; ++k) {
            Complex uk = u;
            if (k == 1) uk = u * w;
            if (k == 2) uk = u * w * w;
            t[k] = uk - p / (3.0 * uk);
        }
    }
    for (Complex& x : t) x -= shift;
    return t;
}

} // namespace

std::array<Complex, 3> solve_cubic(const std::array<Complex, 3>& coeffs) {
    const Complex a2 = coeffs[0], a1 = coeffs[1], a0 = coeffs[2];
    for (const Complex& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw InvalidInput("solve_cubic: coefficients must be finite");

    std::array<Complex, 3> r = cardano_seeds(a2, a1, a0);
    const std::vector<Complex> poly{a0, a1, a2, Complex{1.0, 0.0}};
    for (Complex& root : r) root = num::newton_polish(poly, root);

    std::sort(r.begin(), r.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });

    double maxmag = 0.0;
    for (const Complex& root : r) maxmag = std::max(maxmag, std::abs(root));
    double mindist = std::abs(r[0] - r[1]);
    mindist = std::min(mindist, std::abs(r[0] - r[2]));
    mindist = std::min(mindist, std::abs(r[1] - r[2]));
    if (mindist < 1e-9 * std::max(maxmag, 1e-30))
        throw NearDegenerateRoots(
            "solve_cubic: roots too close for stable residues");
    // Clustered roots are also refused when the achievable root accuracy
    // (|p| tolerance over |p'|) is no longer small against the gap.
    double scale = 1.0;
    for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
    for (const Complex& root : r) {
        const Complex dp = (3.0 * root + 2.0 * a2) * root + a1;
        const double uncertainty = 1e-12 * scale / std::max(std::abs(dp), 1e-300);
        if (uncertainty > 1e-4 * mindist)
            throw NearDegenerateRoots(
                "solve_cubic: root cluster beyond residue accuracy");
    }
    return r;
}

std::array<Complex, 3> residues(const PhysicalParams& p,
                                const std::array<Complex, 3>& roots) {
    p.validate();
    const Complex i{0.0, 1.0};
    const Complex idk = i * p.delta + p.kappa;
    double maxmag = 0.0;
    for (const Complex& s : roots) maxmag = std::max(maxmag, std::abs(s));
    std::array<Complex, 3> c;
    for (int k = 0; k < 3; ++k) {
        const Complex& sk = roots[k];
        Complex denom{1.0, 0.0};
        for (int j = 0; j < 3; ++j) {
            if (j == k) continue;
            if (std::abs(sk - roots[j]) < 1e-9 * std::max(maxmag, 1e-30))
                throw NearDegenerateRoots("residues: near-degenerate roots");
            denom *= sk - roots[j];
        }
        c[k] = -i * p.omega_drive * (sk + idk) / denom;
    }
    return c;
}

CubicSolution solve_system(const PhysicalParams& p) {
    CubicSolution sol;
    sol.roots = solve_cubic(cubic_coefficients(p));
    sol.residues = residues(p, sol.roots);
    return sol;
}

Regime classify_regime(const PhysicalParams& p) {
    p.validate();
    if (p.g == 0.0)
        throw UndefinedRegime("classify_regime: undefined for g = 0");
    // tau_kappa >= 10 tau_g  <=>  g >= 10 kappa, and symmetrically.
    if (p.g >= 10.0 * p.kappa) return Regime::NonMarkovian;
    if (p.kappa >= 10.0 * p.g) return Regime::Markovian;
    return Regime::Intermediate;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Markovian: return "Markovian";
        case Regime::NonMarkovian: return "NonMarkovian";
        case Regime::Intermediate: return "Intermediate";
    }
    return "unknown";
}

} // namespace lambdacav
