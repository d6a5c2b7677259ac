#include "lambdacav/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lambdacav/amplitudes.hpp"
#include "lambdacav/errors.hpp"

namespace lambdacav::oracle {

void FrequencyGrid::validate() const {
    if (!(x_min < 0.0 && 0.0 < x_max))
        throw InvalidInput("FrequencyGrid: window must straddle x = 0");
    if (n_modes < 2) throw InvalidInput("FrequencyGrid: need >= 2 modes");
}

namespace {

struct State {
    Complex e, f;
    std::vector<Complex> u;
};

} // namespace

OracleTrajectory integrate_schrodinger(const PhysicalParams& p,
                                       const InitialAtomState& init,
                                       const FrequencyGrid& grid, double t_end,
                                       double dt, int n_store) {
    p.validate();
    init.validate();
    grid.validate();
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw InvalidInput("integrate_schrodinger: need t_end > 0 and dt > 0");
    if (t_end > 10.0 / p.kappa + 1e-12)
        throw InvalidInput("integrate_schrodinger: t_end must be <= 10/kappa");
    const double x_abs = std::max(std::abs(grid.x_min), std::abs(grid.x_max));
    const double rate = std::max({p.g, p.omega_drive, std::abs(p.delta) + x_abs,
                                  std::abs(p.delta_l), p.kappa});
    if (dt > 0.2 / rate + 1e-15)
        throw InvalidInput("integrate_schrodinger: dt too large for the "
                           "fastest phase on the grid");
    if (n_store < 2) n_store = 2;

    const int n = grid.n_modes;
    const double dx = grid.spacing();
    std::vector<double> x(n);
    std::vector<Complex> gm(n);
    for (int m = 0; m < n; ++m) {
        x[m] = grid.x_min + m * dx;
        const Complex alpha =
            std::sqrt(p.kappa / std::numbers::pi) / Complex{x[m], p.kappa};
        gm[m] = p.g * alpha * std::sqrt(dx);
    }

    // Phase bookkeeping: ph[m] = exp(i (delta + x_m) t); advanced by fixed
    // half-step factors, recomputed periodically to cancel rounding drift.
    std::vector<Complex> ph(n), ph_half(n);
    Complex dph{1.0, 0.0}; // exp(-i delta_l t)
    const Complex dph_half = std::exp(Complex{0.0, -p.delta_l * dt / 2.0});
    auto reset_phases = [&](double t) {
        for (int m = 0; m < n; ++m)
            ph[m] = std::exp(Complex{0.0, (p.delta + x[m]) * t});
        dph = std::exp(Complex{0.0, -p.delta_l * t});
    };
    for (int m = 0; m < n; ++m)
        ph_half[m] = std::exp(Complex{0.0, (p.delta + x[m]) * dt / 2.0});
    reset_phases(0.0);

    State y;
    y.e = {0.0, 0.0};
    y.f = {init.f0(), 0.0};
    y.u.assign(n, Complex{0.0, 0.0});
    const Complex g_amp = init.g0();
    const double g_pop = std::norm(g_amp);

    const Complex iunit{0.0, 1.0};
    const double om = p.omega_drive;

    // d/dt at a stage with phases (phm[], dphase):
    //   dE = -i sum_m conj(g_m) conj(ph_m) U_m - i Omega dphase F
    //   dF = -i Omega conj(dphase) E
    //   dU_m = -i g_m ph_m E
    State k1, k2, k3, k4, tmp;
    for (State* s : {&k1, &k2, &k3, &k4, &tmp}) s->u.assign(n, Complex{});
    std::vector<Complex> ph_mid(n), ph_end(n);

    auto deriv = [&](const State& s, const std::vector<Complex>& phm,
                     Complex dphase, State& out) {
        Complex acc{0.0, 0.0};
        for (int m = 0; m < n; ++m) acc += std::conj(gm[m] * phm[m]) * s.u[m];
        out.e = -iunit * acc - iunit * om * dphase * s.f;
        out.f = -iunit * om * std::conj(dphase) * s.e;
        const Complex mie = -iunit * s.e;
        for (int m = 0; m < n; ++m) out.u[m] = gm[m] * phm[m] * mie;
    };

    const long n_steps = std::lround(t_end / dt);
    const long store_every = std::max<long>(1, n_steps / (n_store - 1));

    OracleTrajectory traj;
    traj.g = g_amp;
    traj.mode_x = x;
    auto store = [&](double t) {
        traj.times.push_back(t);
        traj.e.push_back(y.e);
        traj.f.push_back(y.f);
        traj.u_modes.push_back(y.u);
        double un = 0.0;
        for (const Complex& v : y.u) un += std::norm(v);
        traj.norm.push_back(std::norm(y.e) + std::norm(y.f) + g_pop + un);
        if (std::abs(traj.norm.back() - 1.0) > 1e-4)
            throw StepTooLarge("integrate_schrodinger: norm drift exceeds 1e-4");
    };
    store(0.0);

    double t = 0.0;
    for (long step = 0; step < n_steps; ++step) {
        if (step % 512 == 0) reset_phases(t);
        for (int m = 0; m < n; ++m) {
            ph_mid[m] = ph[m] * ph_half[m];
            ph_end[m] = ph_mid[m] * ph_half[m];
        }
        const Complex dph_mid = dph * dph_half;
        const Complex dph_end = dph_mid * dph_half;

        deriv(y, ph, dph, k1);
        tmp.e = y.e + 0.5 * dt * k1.e;
        tmp.f = y.f + 0.5 * dt * k1.f;
        for (int m = 0; m < n; ++m) tmp.u[m] = y.u[m] + 0.5 * dt * k1.u[m];
        deriv(tmp, ph_mid, dph_mid, k2);
        tmp.e = y.e + 0.5 * dt * k2.e;
        tmp.f = y.f + 0.5 * dt * k2.f;
        for (int m = 0; m < n; ++m) tmp.u[m] = y.u[m] + 0.5 * dt * k2.u[m];
        deriv(tmp, ph_mid, dph_mid, k3);
        tmp.e = y.e + dt * k3.e;
        tmp.f = y.f + dt * k3.f;
        for (int m = 0; m < n; ++m) tmp.u[m] = y.u[m] + dt * k3.u[m];
        deriv(tmp, ph_end, dph_end, k4);

        y.e += dt / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e);
        y.f += dt / 6.0 * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f);
        for (int m = 0; m < n; ++m)
            y.u[m] += dt / 6.0 * (k1.u[m] + 2.0 * k2.u[m] + 2.0 * k3.u[m] + k4.u[m]);

        for (int m = 0; m < n; ++m) ph[m] = ph_end[m];
        dph = dph_end;
        t = (step + 1) * dt;
        if ((step + 1) % store_every == 0 || step + 1 == n_steps) store(t);
    }
    return traj;
}

std::pair<double, double> max_deviation(const OracleTrajectory& traj,
                                        const PhysicalParams& p,
                                        const InitialAtomState& init) {
    AmplitudeSolver solver(p);
    const double f0 = init.f0();
    double dev_e = 0.0, dev_f = 0.0;
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        dev_e = std::max(dev_e, std::abs(f0 * solver.e_factor(t) - traj.e[i]));
        dev_f = std::max(dev_f, std::abs(f0 * solver.f_factor(t) - traj.f[i]));
    }
    return {dev_e, dev_f};
}

} // namespace lambdacav::oracle
