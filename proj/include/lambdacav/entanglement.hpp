#pragma once

#include <array>
#include <complex>

#include "lambdacav/amplitudes.hpp"
#include "lambdacav/model_core.hpp"
#include "lambdacav/pulse.hpp"

// Atom-field reduced density matrix and linear entropy, BSM-projected
// two-atom states, negativity, and Bloch-sphere averages of both measures.
// Basis order is (e, f, g) everywhere; two-atom indices are row-major over
// (e, f, g) x (e, f, g).

namespace lambdacav {

using Mat3 = std::array<Complex, 9>;
using Mat9 = std::array<Complex, 81>;

// Post-BSM pure state of the two atoms. coeffs is the normalized coefficient
// matrix M[i*3+j] of |i>_1 |j>_2 with a fixed phase gauge (the first entry
// above 1e-6 of the max magnitude, in row-major scan order, is made real
// positive); weight is the pre-normalization squared norm N(t).
struct TwoAtomPureState {
    Mat3 coeffs{};
    double weight = 0.0;
};

Mat3 reduced_density(const PhysicalParams& p, const InitialAtomState& init,
                     double t);
Mat3 reduced_density(const AmplitudeSolver& solver, const InitialAtomState& init,
                     double t);

// S_A = 1 - Tr(rho^2); 0 for pure states, 2/3 for the maximally mixed qutrit.
double linear_entropy(const Mat3& rho);

// Bloch-sphere average of S_A: product Gauss-Legendre in cos(theta) and
// periodic trapezoid in phi. check_convergence doubles both orders and
// throws QuadratureNotConverged when the two estimates differ by > 1e-8.
double avg_linear_entropy(const PhysicalParams& p, double t, int n_theta = 64,
                          int n_phi = 32, bool check_convergence = false);
double avg_linear_entropy(const AmplitudeSolver& solver, double t,
                          int n_theta = 64, int n_phi = 32,
                          bool check_convergence = false);

// Projection of the two-subsystem product state onto the photonic Bell state
// (|0>_1 |1>_2 - |1>_1 |0>_2)/sqrt(2) with detection pulse `pulse`.
// Throws NoPhoton when N(t) < 1e-20.
TwoAtomPureState bsm_project(const PhysicalParams& p,
                             const InitialAtomState& init1,
                             const InitialAtomState& init2, double t,
                             const PulseShape& pulse, double window = 200.0,
                             double rel_tol = 1e-8);

// Assembly from precomputed shared factors (both cavities identical):
// X_ij = F_i(0) e(t) F_j(0) w(t), Y_ij = F_i(0) f(t) F_j(0) w(t),
// Z_ij = G_i(0) F_j(0) w(t).
TwoAtomPureState bsm_assemble(Complex e_t, Complex f_t, Complex w_t,
                              const InitialAtomState& init1,
                              const InitialAtomState& init2);

// Negativity of a pure two-qutrit state from the singular values of its
// coefficient matrix: ((sum sigma)^2 - 1)/2, in [0, 1].
double negativity(const TwoAtomPureState& state);

// Oracle route: 9x9 density matrix, partial transpose over atom 1, Hermitian
// eigendecomposition, sum of |negative eigenvalues|.
double negativity_via_pt(const TwoAtomPureState& state);

// Rank-1 projector of the normalized state.
Mat9 two_atom_density(const TwoAtomPureState& state);

Mat9 partial_transpose_a(const Mat9& rho);

// Average of the negativity over both input Bloch spheres (Eq.-literal
// product rule, weight 1/(16 pi^2)). Nodes with N(t) below the NoPhoton
// threshold contribute 0. check_convergence doubles both orders and demands
// agreement within 1e-6.
double avg_negativity(const PhysicalParams& p, double t, int n_theta = 64,
                      int n_phi = 32, bool check_convergence = false,
                      int threads = 1);
double avg_negativity(const AmplitudeSolver& solver, double t, int n_theta = 64,
                      int n_phi = 32, bool check_convergence = false,
                      int threads = 1);

} // namespace lambdacav
