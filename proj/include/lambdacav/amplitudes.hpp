#pragma once

#include <array>
#include <complex>

#include "lambdacav/model_core.hpp"
#include "lambdacav/pulse.hpp"

// Closed-form time-dependent amplitudes of the single-excitation sector.
// All amplitudes are linear in F(0), so the solver exposes the reduced
// factors e(t) = E/F(0), f(t) = F/F(0), u(x,t) = U/F(0); the thin wrappers
// below reattach the initial state.

namespace lambdacav {

struct AmplitudeSet {
    double t = 0.0;
    Complex e, f, g;
    double photon_weight = 0.0; // 1 - |E|^2 - |F|^2 - |G|^2
};

struct Populations {
    double p_e = 0.0;
    double p_f = 0.0;
    double p_g_total = 0.0; // |G|^2 + photon weight
    double photon_weight = 0.0;
};

class AmplitudeSolver {
  public:
    explicit AmplitudeSolver(const PhysicalParams& p);

    const PhysicalParams& params() const { return params_; }
    const CubicSolution& cubic() const { return cubic_; }

    // e(t) = sum_k c_k exp(s_k t)
    Complex e_factor(double t) const;
    // f(t) = 1 - i Omega sum_k c_k (exp((s_k + i dl) t) - 1)/(s_k + i dl),
    // with the removable singularity evaluated by a 4-term Taylor series.
    Complex f_factor(double t) const;
    // u(x,t) = -i g alpha(x) sum_k c_k (exp((s_k + i(d + x)) t) - 1)/(s_k + i(d + x))
    Complex u_factor(double x, double t) const;

    AmplitudeSet at(const InitialAtomState& init, double t) const;
    Populations populations(const InitialAtomState& init, double t) const;

    // int |u(x,t)|^2 dx by adaptive quadrature. window <= 0 selects a window
    // wide enough that the Lorentzian tail truncation stays below ~1e-8.
    double photon_norm_integral(double t, double window = 0.0,
                                double rel_tol = 1e-8) const;

    // w(t) = int u(x,t) Theta^*(x) dx over the pulse support clipped to
    // [-window, window]; O_j(t) = F_j(0) w(t).
    Complex overlap_w(double t, const PulseShape& pulse, double window = 200.0,
                      double rel_tol = 1e-8) const;

    double auto_window() const;

  private:
    PhysicalParams params_;
    CubicSolution cubic_;
};

Complex amp_E(const PhysicalParams& p, const InitialAtomState& init, double t);
Complex amp_F(const PhysicalParams& p, const InitialAtomState& init, double t);
Complex amp_G(const InitialAtomState& init, double t);
Complex amp_U(const PhysicalParams& p, const InitialAtomState& init, double t,
              double x);
Populations populations(const PhysicalParams& p, const InitialAtomState& init,
                        double t);
Complex overlap_w(const PhysicalParams& p, double t, const PulseShape& pulse,
                  double window = 200.0, double rel_tol = 1e-8);

// (exp(z t) - 1)/z; |z| < 1e-9 switches to t (1 + zt/2 + (zt)^2/6 + (zt)^3/24).
Complex expm1_over_z(Complex z, double t);

} // namespace lambdacav
