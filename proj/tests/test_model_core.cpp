#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>

#include "lambdacav/model_core.hpp"
#include "support/test_support.hpp"

using namespace lambdacav;
using testsup::Rng;

namespace {

PhysicalParams make(double g, double om, double kap, double d, double dl) {
    PhysicalParams p;
    p.g = g;
    p.omega_drive = om;
    p.kappa = kap;
    p.delta = d;
    p.delta_l = dl;
    return p;
}

} // namespace

TEST_CASE("cubic coefficients: direct substitution") {
    auto c = cubic_coefficients(make(10, 10, 1, 0, 0));
    CHECK(std::abs(c[0] - Complex{1, 0}) < 1e-14);
    CHECK(std::abs(c[1] - Complex{200, 0}) < 1e-12);
    CHECK(std::abs(c[2] - Complex{100, 0}) < 1e-12);

    c = cubic_coefficients(make(10, 10, 1, 15, -15));
    CHECK(std::abs(c[0] - Complex{1, 0}) < 1e-14);
    CHECK(std::abs(c[1] - Complex{425, -15}) < 1e-12);
    CHECK(std::abs(c[2] - Complex{100, 0}) < 1e-12);

    // Cross-checked by symbolic substitution: a2 = 1 + 15i, a1 = 200,
    // a0 = 100 (1 + 15i) + 0 = 100 + 1500i.
    c = cubic_coefficients(make(10, 10, 1, 15, 0));
    CHECK(std::abs(c[0] - Complex{1, 15}) < 1e-12);
    CHECK(std::abs(c[1] - Complex{200, 0}) < 1e-12);
    CHECK(std::abs(c[2] - Complex{100, 1500}) < 1e-11);
}

TEST_CASE("solve_cubic: cube roots of unity") {
    auto roots = solve_cubic({Complex{0, 0}, Complex{0, 0}, Complex{-1, 0}});
    const double s3 = std::sqrt(3.0) / 2.0;
    std::vector<Complex> expect{{1, 0}, {-0.5, s3}, {-0.5, -s3}};
    CHECK(testsup::set_distance({roots.begin(), roots.end()}, expect) < 1e-12);
}

TEST_CASE("solve_cubic: omega_drive = 0 pins a root at -i delta_l") {
    for (double dl : {-15.0, 3.5, 0.25}) {
        auto p = make(7.0, 0.0, 1.0, 4.0, dl);
        auto roots = solve_cubic(cubic_coefficients(p));
        double best = 1e300;
        for (auto s : roots) best = std::min(best, std::abs(s - Complex{0, -dl}));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("solve_cubic: residual bound and companion-matrix oracle") {
    auto coeffs = cubic_coefficients(make(10, 10, 1, 0, 0));
    auto roots = solve_cubic(coeffs);
    const double scale = std::max(
        {1.0, std::abs(coeffs[0]), std::abs(coeffs[1]), std::abs(coeffs[2])});
    for (auto s : roots) {
        Complex r = ((s + coeffs[0]) * s + coeffs[1]) * s + coeffs[2];
        CHECK(std::abs(r) <= 1e-9 * scale);
    }
    auto oracle = testsup::companion_cubic_roots(coeffs[0], coeffs[1], coeffs[2]);
    CHECK(testsup::set_distance({roots.begin(), roots.end()}, oracle) < 1e-10);
}

TEST_CASE("solve_cubic: near-degenerate roots are refused") {
    // (s - 1)^2 s = s^3 - 2 s^2 + s has a double root at 1.
    CHECK_THROWS_AS(solve_cubic({Complex{-2, 0}, Complex{1, 0}, Complex{0, 0}}),
                    NearDegenerateRoots);
}

TEST_CASE("residues: omega_drive = 0 kills all coefficients") {
    auto p = make(9.0, 0.0, 1.0, 2.0, -3.0);
    auto sol = solve_system(p);
    for (auto c : sol.residues) CHECK(std::abs(c) < 1e-15);
}

TEST_CASE("residues: partial-fraction identities") {
    auto p = make(10, 10, 1, 15, -15);
    auto sol = solve_system(p);
    Complex sum{0, 0}, wsum{0, 0};
    for (int k = 0; k < 3; ++k) {
        sum += sol.residues[k];
        wsum += sol.residues[k] * sol.roots[k];
    }
    CHECK(std::abs(sum) < 1e-10);
    CHECK(std::abs(wsum - Complex{0, -p.omega_drive}) < 1e-10);
}

TEST_CASE("residues: three-exponential fit of the oracle-free model") {
    // Fit c_k from samples of E(t) = sum c_k exp(s_k t) generated with an
    // independent evaluation, via least squares on the frozen roots.
    auto p = make(10, 10, 1, 0, 0);
    auto sol = solve_system(p);
    std::vector<double> ts;
    for (int i = 1; i <= 24; ++i) ts.push_back(0.05 * i);
    // Normal equations A^H A x = A^H b with A_ik = exp(s_k t_i).
    std::vector<Complex> ata(9, Complex{}), atb(3, Complex{});
    for (double t : ts) {
        std::array<Complex, 3> row;
        for (int k = 0; k < 3; ++k) row[k] = std::exp(sol.roots[k] * t);
        Complex b{0, 0};
        for (int k = 0; k < 3; ++k) b += sol.residues[k] * row[k];
        for (int i = 0; i < 3; ++i) {
            atb[i] += std::conj(row[i]) * b;
            for (int j = 0; j < 3; ++j) ata[i * 3 + j] += std::conj(row[i]) * row[j];
        }
    }
    auto fit = testsup::solve_dense(ata, atb, 3);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(fit[k] - sol.residues[k]) < 1e-8);
}

TEST_CASE("classify_regime") {
    CHECK(classify_regime(make(10, 10, 1, 0, 0)) == Regime::NonMarkovian);
    CHECK(classify_regime(make(0.1, 0.1, 1, 0, 0)) == Regime::Markovian);
    CHECK(classify_regime(make(1, 1, 1, 0, 0)) == Regime::Intermediate);
    CHECK_THROWS_AS(classify_regime(make(0, 1, 1, 0, 0)), UndefinedRegime);
}

TEST_CASE("property sweep: 1000 random parameter sets") {
    Rng rng(0x5eed0001ULL);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto p = make(rng.uniform(0.0, 20.0), rng.uniform(0.0, 20.0), 1.0,
                      rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0));
        auto coeffs = cubic_coefficients(p);
        CubicSolution sol;
        try {
            sol = solve_system(p);
        } catch (const NearDegenerateRoots&) {
            continue; // measure-zero configurations are refused by design
        }
        ++checked;
        const double scale = std::max({1.0, std::abs(coeffs[0]),
                                       std::abs(coeffs[1]), std::abs(coeffs[2])});
        Complex sum{0, 0}, wsum{0, 0}, vsum{0, 0}, vprod{1, 0};
        for (int k = 0; k < 3; ++k) {
            Complex s = sol.roots[k];
            Complex r = ((s + coeffs[0]) * s + coeffs[1]) * s + coeffs[2];
            CHECK(std::abs(r) <= 1e-9 * scale);
            CHECK(s.real() <= 1e-12);
            sum += sol.residues[k];
            wsum += sol.residues[k] * s;
            vsum += s;
            vprod *= s;
        }
        CHECK(std::abs(vsum + coeffs[0]) <= 1e-10 * scale);
        CHECK(std::abs(vprod + coeffs[2]) <= 1e-10 * scale);
        CHECK(std::abs(sum) <= 1e-9 * std::max(1.0, p.omega_drive));
        CHECK(std::abs(wsum - Complex{0, -p.omega_drive}) <=
              1e-9 * std::max(1.0, p.omega_drive));
    }
    CHECK(checked >= 990); // degeneracies should be rare
}

TEST_CASE("determinism: root set invariant under permuted coefficient math") {
    auto p = make(10, 10, 1, 15, -15);
    auto c1 = cubic_coefficients(p);
    // Same coefficients assembled in a different association order.
    const Complex i{0, 1};
    std::array<Complex, 3> c2;
    c2[0] = p.kappa + i * p.delta + i * p.delta_l;
    c2[1] = (p.omega_drive * p.omega_drive +
             i * p.delta_l * (i * p.delta + p.kappa)) +
            p.g * p.g;
    c2[2] = i * p.g * p.g * p.delta_l + p.omega_drive * p.omega_drive * (i * p.delta + p.kappa);
    auto r1 = solve_cubic(c1);
    auto r2 = solve_cubic(c2);
    CHECK(testsup::set_distance({r1.begin(), r1.end()}, {r2.begin(), r2.end()}) <
          1e-10);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(cubic_coefficients(make(-1, 1, 1, 0, 0)), InvalidInput);
    CHECK_THROWS_AS(cubic_coefficients(make(1, 1, 0, 0, 0)), InvalidInput);
    InitialAtomState bad;
    bad.theta = 4.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}
