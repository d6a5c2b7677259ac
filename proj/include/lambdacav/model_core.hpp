#pragma once

#include <array>
#include <complex>

#include "lambdacav/errors.hpp"

// Characteristic cubic of the Laplace-transformed single-excitation dynamics
// and its residue coefficients. All rates are in units of the cavity decay
// rate kappa; kappa itself stays explicit so callers may rescale.

namespace lambdacav {

using Complex = std::complex<double>;

struct PhysicalParams {
    double g = 10.0;          // atom-cavity coupling
    double omega_drive = 10.0; // classical-drive Rabi coupling
    double kappa = 1.0;       // cavity decay rate (reference scale)
    double delta = 0.0;       // cavity detuning, omega_c - omega_e + omega_g
    double delta_l = 0.0;     // drive detuning, omega_l - (omega_e - omega_f)

    void validate() const;
};

struct InitialAtomState {
    double theta = 0.0; // polar angle in [0, pi]
    double phi = 0.0;   // azimuthal angle in [0, 2*pi)

    void validate() const;
    // F(0) = cos(theta/2), G(0) = sin(theta/2) e^{i phi}, E(0) = 0.
    double f0() const { return std::cos(theta / 2.0); }
    Complex g0() const {
        return std::sin(theta / 2.0) * std::exp(Complex{0.0, phi});
    }
};

struct CubicSolution {
    std::array<Complex, 3> roots;    // s_k, sorted by (Re, Im)
    std::array<Complex, 3> residues; // c_k, matching order
};

enum class Regime { Markovian, NonMarkovian, Intermediate };

// Monic cubic s^3 + a2 s^2 + a1 s + a0 of the Laplace denominator:
//   a2 = i(delta + delta_l) + kappa
//   a1 = g^2 + Omega^2 + i delta_l (i delta + kappa)
//   a0 = Omega^2 (i delta + kappa) + i g^2 delta_l
std::array<Complex, 3> cubic_coefficients(const PhysicalParams& p);

// Roots of s^3 + a2 s^2 + a1 s + a0 (coeffs = {a2, a1, a0}); Cardano seeds
// polished by Newton, returned sorted by (Re, Im). Residual of each root is
// <= 1e-9 * max(1, |a2|, |a1|, |a0|). Throws NearDegenerateRoots when the
// minimum pairwise distance falls under 1e-9 * max |root|.
std::array<Complex, 3> solve_cubic(const std::array<Complex, 3>& coeffs);

// c_k = -i Omega (s_k + i delta + kappa) / prod_{j != k} (s_k - s_j).
// Identities sum c_k = 0 and sum c_k s_k = -i Omega hold by construction.
std::array<Complex, 3> residues(const PhysicalParams& p,
                                const std::array<Complex, 3>& roots);

CubicSolution solve_system(const PhysicalParams& p);

// tau_g = 1/g vs tau_kappa = 1/kappa with a factor-10 threshold:
// NonMarkovian when g >= 10 kappa, Markovian when g <= kappa/10.
Regime classify_regime(const PhysicalParams& p);

const char* regime_name(Regime r);

} // namespace lambdacav
