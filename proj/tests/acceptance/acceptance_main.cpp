// Acceptance suite: runs each release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.
//
// Usage: acceptance_tests <cli-binary> <preset-dir> <work-dir>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lambdacav/amplitudes.hpp"
#include "lambdacav/entanglement.hpp"
#include "lambdacav/oracle.hpp"
#include "support/test_support.hpp"

namespace fs = std::filesystem;
using namespace lambdacav;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  (%s)\n", pass ? "PASS" : "FAIL", idx,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

PhysicalParams make(double g, double om, double d, double dl) {
    PhysicalParams p;
    p.g = g;
    p.omega_drive = om;
    p.delta = d;
    p.delta_l = dl;
    return p;
}

const PhysicalParams kDetuned = make(10, 10, 15, -15);
const PhysicalParams kResonant = make(10, 10, 0, 0);

std::string g_cli;
fs::path g_work;

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1. Cubic and residue identities on 1000 random parameter sets, < 5 s.
void criterion_1() {
    const auto t0 = Clock::now();
    testsup::Rng rng(0xacce0001ULL);
    double worst = 0.0;
    int evaluated = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto p = make(rng.uniform(0, 20), rng.uniform(0, 20),
                      rng.uniform(-20, 20), rng.uniform(-20, 20));
        auto coeffs = cubic_coefficients(p);
        CubicSolution sol;
        try {
            sol = solve_system(p);
        } catch (const NearDegenerateRoots&) {
            continue;
        }
        ++evaluated;
        const double scale = std::max({1.0, std::abs(coeffs[0]),
                                       std::abs(coeffs[1]), std::abs(coeffs[2])});
        Complex vsum{0, 0}, vprod{1, 0}, csum{0, 0}, cwsum{0, 0};
        for (int k = 0; k < 3; ++k) {
            vsum += sol.roots[k];
            vprod *= sol.roots[k];
            csum += sol.residues[k];
            cwsum += sol.residues[k] * sol.roots[k];
        }
        worst = std::max({worst, std::abs(vsum + coeffs[0]) / scale,
                          std::abs(vprod + coeffs[2]) / scale, std::abs(csum),
                          std::abs(cwsum + Complex{0, 1} * p.omega_drive)});
    }
    const double dt = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "worst identity residual %.3g <= 1e-9, %d sets, %.2f s < 5 s",
                  worst, evaluated, dt);
    report(1, "cubic/residue identities", worst <= 1e-9 && dt < 5.0, detail);
}

// 2. Closed forms vs the grid oracle at the Fig. 2 parameters, < 2 min.
void criterion_2() {
    const auto t0 = Clock::now();
    oracle::FrequencyGrid grid; // +-200, 4001 modes
    InitialAtomState init;      // theta = 0
    auto traj = oracle::integrate_schrodinger(kDetuned, init, grid, 5.0, 5e-4,
                                              101);
    auto [dev_e, dev_f] = oracle::max_deviation(traj, kDetuned, init);
    const double dt = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "dev_E %.3g, dev_F %.3g <= 1e-3, %.1f s < 120 s", dev_e,
                  dev_f, dt);
    report(2, "oracle equivalence", dev_e <= 1e-3 && dev_f <= 1e-3 && dt < 120,
           detail);
}

// 3. Norm conservation via photon-sector quadrature.
void criterion_3() {
    testsup::Rng rng(0xacce0003ULL);
    double worst = 0.0;
    for (int set = 0; set < 20; ++set) {
        auto p = make(rng.uniform(0, 20), rng.uniform(0, 20),
                      rng.uniform(-20, 20), rng.uniform(-20, 20));
        AmplitudeSolver solver(p);
        InitialAtomState init;
        init.theta = rng.uniform(0, std::numbers::pi);
        init.phi = rng.uniform(0, 6.28);
        const double f02 = init.f0() * init.f0();
        for (int i = 0; i < 50; ++i) {
            const double t = rng.uniform(0.0, 5.0);
            const auto a = solver.at(init, t);
            const double quad = f02 * solver.photon_norm_integral(t);
            worst = std::max(worst, std::abs(quad - a.photon_weight));
        }
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "worst |quad - closed| %.3g <= 1e-6 over 20x50 samples", worst);
    report(3, "norm conservation", worst <= 1e-6, detail);
}

// 4. Population transfer: first crossings of P_g_total.
void criterion_4() {
    auto first_crossing = [](const PhysicalParams& p, double level,
                             double t_max) {
        AmplitudeSolver solver(p);
        const int n = 40000;
        for (int i = 1; i <= n; ++i) {
            const double t = t_max * i / n;
            const double pg = 1.0 - std::norm(solver.e_factor(t)) -
                              std::norm(solver.f_factor(t));
            if (pg >= level) return t;
        }
        return 1e300;
    };
    const double t_res_99 = first_crossing(kResonant, 0.99, 5.0);
    const double t_res_90 = first_crossing(kResonant, 0.9, 100.0);
    const double t_det_90 = first_crossing(kDetuned, 0.9, 100.0);
    const bool pass = t_res_99 <= 5.0 && t_det_90 > t_res_90;
    char detail[180];
    std::snprintf(detail, sizeof(detail),
                  "resonant reaches 0.99 at tau %.3f (<= 5); 0.9 crossings: "
                  "detuned %.2f > resonant %.3f",
                  t_res_99, t_det_90, t_res_90);
    report(4, "population transfer", pass, detail);
}

// 5. Detuning-sign effect on the 61x61 sweep at tau = 15.
void criterion_5() {
    const double tau = 15.0;
    InitialAtomState f0; // |f>
    double best = -1.0, best_d = 0.0, best_dl = 0.0;
    double s_opposite = 0.0, s_same = 0.0;
    for (int i = 0; i < 61; ++i) {
        const double d = -30.0 + i;
        for (int j = 0; j < 61; ++j) {
            const double dl = -30.0 + j;
            const double s = linear_entropy(
                reduced_density(make(10, 10, d, dl), f0, tau));
            if (s > best) {
                best = s;
                best_d = d;
                best_dl = dl;
            }
            if (d == 15.0 && dl == -15.0) s_opposite = s;
            if (d == 15.0 && dl == 15.0) s_same = s;
        }
    }
    const bool max_in_opposite_quadrant = best_d * best_dl < 0.0;
    const bool ordering = s_opposite > s_same;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "grid max %.9f at (delta=%g, delta_l=%g), quadrant %s; "
                  "S(15,-15)=%.4f > S(15,15)=%.4f %s",
                  best, best_d, best_dl,
                  max_in_opposite_quadrant ? "opposite-sign" : "same-sign",
                  s_opposite, s_same, ordering ? "holds" : "violated");
    report(5, "detuning-sign effect", max_in_opposite_quadrant && ordering,
           detail);
}

// 6. Stationary Bell plateau at tau = 10.
void criterion_6() {
    InitialAtomState f0;
    auto st = bsm_project(kDetuned, f0, f0, 10.0,
                          PulseShape::lorentzian_matched(1.0));
    const double n = negativity(st);
    char detail[120];
    std::snprintf(detail, sizeof(detail), "|N - 0.5| = %.3g <= 1e-3",
                  std::abs(n - 0.5));
    report(6, "stationary Bell plateau", std::abs(n - 0.5) <= 1e-3, detail);
}

// 7. Negativity route equivalence on random states and figure presets.
void criterion_7() {
    testsup::Rng rng(0xacce0007ULL);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        TwoAtomPureState st;
        double n = 0.0;
        for (auto& c : st.coeffs) {
            c = rng.unit_complex();
            n += std::norm(c);
        }
        for (auto& c : st.coeffs) c /= std::sqrt(n);
        st.weight = n;
        worst = std::max(worst, std::abs(negativity(st) - negativity_via_pt(st)));
    }
    // Figure-preset initial states in both regimes.
    const double hp = std::numbers::pi / 2, qp = std::numbers::pi / 4;
    const double pi = std::numbers::pi;
    struct Init4 { double t1, p1, t2, p2; };
    const Init4 inits[4] = {{0, 0, 0, 0}, {hp, 0, 0, 0}, {hp, 0, qp, 0},
                            {hp, pi, qp, 0}};
    auto pulse = PulseShape::lorentzian_matched(1.0);
    for (const auto& [params, times] :
         {std::pair{kDetuned, std::vector<double>{1.0, 5.0, 10.0}},
          std::pair{make(0.1, 0.1, 0.15, -0.15),
                    std::vector<double>{10.0, 50.0, 100.0}}}) {
        for (const auto& in : inits) {
            InitialAtomState s1, s2;
            s1.theta = in.t1;
            s1.phi = in.p1;
            s2.theta = in.t2;
            s2.phi = in.p2;
            for (double t : times) {
                auto st = bsm_project(params, s1, s2, t, pulse);
                worst = std::max(
                    worst, std::abs(negativity(st) - negativity_via_pt(st)));
            }
        }
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "worst |SVD - PT| %.3g <= 1e-10 (100 random + presets)",
                  worst);
    report(7, "negativity route equivalence", worst <= 1e-10, detail);
}

// 8. Pulse-shape independence of the normalized post-BSM state.
void criterion_8() {
    InitialAtomState s1, s2;
    s1.theta = 0.8;
    s1.phi = 0.3;
    s2.theta = 2.1;
    s2.phi = 4.0;
    double worst = 0.0;
    for (double t : {0.4, 1.2, 3.0}) {
        auto a = bsm_project(kDetuned, s1, s2, t,
                             PulseShape::lorentzian_matched(1.0));
        auto b = bsm_project(kDetuned, s1, s2, t, PulseShape::flat_band(50.0));
        for (int i = 0; i < 9; ++i)
            worst = std::max(worst, std::abs(a.coeffs[i] - b.coeffs[i]));
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "worst coefficient difference %.3g <= 1e-10", worst);
    report(8, "pulse-shape independence", worst <= 1e-10, detail);
}

// 9. Markovian vs non-Markovian extrema of S_A(tau = g t) on (0, 5].
void criterion_9() {
    auto extrema = [](double g) {
        AmplitudeSolver solver(make(g, g, 0, 0));
        InitialAtomState f0;
        const int n = 2000;
        std::vector<double> sa(n);
        for (int i = 0; i < n; ++i) {
            const double t = 5.0 * (i + 1) / n / g;
            sa[i] = linear_entropy(reduced_density(solver, f0, t));
        }
        int count = 0;
        double last = sa[0];
        for (int i = 1; i + 1 < n; ++i) {
            const double d0 = sa[i] - sa[i - 1], d1 = sa[i + 1] - sa[i];
            if (d0 * d1 < 0 && std::abs(sa[i] - last) > 1e-4) {
                ++count;
                last = sa[i];
            }
        }
        return count;
    };
    const int nm = extrema(10.0);
    const int m = extrema(0.1);
    char detail[120];
    std::snprintf(detail, sizeof(detail),
                  "extrema: g=10k -> %d (>= 3), g=0.1k -> %d (<= 1)", nm, m);
    report(9, "Markovian/non-Markovian contrast", nm >= 3 && m <= 1, detail);
}

// 10. Determinism of figure fig2 and validate runtimes.
void criterion_10() {
    const auto out1 = g_work / "fig2_a.csv";
    const auto out2 = g_work / "fig2_b.csv";
    bool ok = run_cli("figure fig2 --out " + out1.string()) == 0 &&
              run_cli("figure fig2 --out " + out2.string()) == 0;
    const bool identical = ok && slurp(out1) == slurp(out2) &&
                           !slurp(out1).empty();

    auto t0 = Clock::now();
    const int quick = run_cli("validate --level quick");
    const double t_quick = seconds_since(t0);
    t0 = Clock::now();
    const int full = run_cli("validate --level full --threads 4");
    const double t_full = seconds_since(t0);
    const bool pass = identical && quick == 0 && t_quick < 10.0 && full == 0 &&
                      t_full < 300.0;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "fig2 bytes %s; validate quick %.1f s < 10 s (exit %d), "
                  "full %.1f s < 300 s (exit %d)",
                  identical ? "identical" : "DIFFER", t_quick, quick, t_full,
                  full);
    report(10, "determinism and validate runtime", pass, detail);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::fprintf(stderr,
                     "usage: acceptance_tests <cli> <preset-dir> <work-dir>\n");
        return 2;
    }
    g_cli = argv[1];
    const std::string presets = argv[2];
    g_work = argv[3];
    fs::create_directories(g_work);
    setenv("LAMBDACAV_PRESET_DIR", presets.c_str(), 1);

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
