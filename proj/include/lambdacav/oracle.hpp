#pragma once

#include <complex>
#include <vector>

#include "lambdacav/model_core.hpp"

// Brute-force reference: the reservoir continuum is discretized on a uniform
// frequency grid and the coupled amplitude equations are integrated directly
// with fixed-step RK4, for cross-validation of every closed form.

namespace lambdacav::oracle {

using lambdacav::Complex;

struct FrequencyGrid {
    double x_min = -200.0;
    double x_max = 200.0;
    int n_modes = 4001;

    void validate() const;
    double spacing() const { return (x_max - x_min) / (n_modes - 1); }
};

struct OracleTrajectory {
    std::vector<double> times;
    std::vector<Complex> e, f; // full amplitudes, F(0) included
    Complex g;                 // constant in time
    std::vector<double> mode_x;
    std::vector<std::vector<Complex>> u_modes; // one row per stored time
    std::vector<double> norm;                  // total norm per stored time
};

// Integrates the mode-discretized equations in the interaction picture with
// explicit phases exp(i (delta + x_m) t) and exp(-i delta_l t). Per-mode
// coupling g_m = g alpha(x_m) sqrt(dx). Stores ~n_store samples.
// Preconditions: dt <= 0.2 / max(g, Omega, |delta| + |x|_max, |delta_l|, kappa)
// and t_end <= 10 / kappa. Throws StepTooLarge when the norm drifts > 1e-4.
OracleTrajectory integrate_schrodinger(const PhysicalParams& p,
                                       const InitialAtomState& init,
                                       const FrequencyGrid& grid, double t_end,
                                       double dt, int n_store = 101);

// Suprema over the stored times of |closed-form - oracle| for E and F.
std::pair<double, double> max_deviation(const OracleTrajectory& traj,
                                        const PhysicalParams& p,
                                        const InitialAtomState& init);

} // namespace lambdacav::oracle
