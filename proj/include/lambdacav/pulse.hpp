#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "lambdacav/errors.hpp"

namespace lambdacav {

using Complex = std::complex<double>;

// Detection pulse shape Theta(x) over the relative frequency x = omega - omega_c,
// normalized to int |Theta|^2 dx = 1.
class PulseShape {
  public:
    enum class Kind { LorentzianMatched, FlatBand, Tabulated };

    // Theta(x) = sqrt(kappa/pi) / (x + i kappa): the cavity emission line.
    static PulseShape lorentzian_matched(double kappa = 1.0);
    // Theta(x) = 1/sqrt(2 W) on [-W, W], zero outside.
    static PulseShape flat_band(double halfwidth);
    // Piecewise-linear interpolation of samples, zero outside; samples are
    // rescaled on construction so the quadrature norm is 1.
    static PulseShape tabulated(std::vector<std::pair<double, Complex>> samples);

    Kind kind() const { return kind_; }
    Complex theta(double x) const;
    // Support clipped to [-window, window]; infinite support clips fully.
    std::pair<double, double> support(double window) const;
    // int |Theta|^2 over support(window), by adaptive quadrature.
    double norm_quadrature(double window = 200.0, double rel_tol = 1e-10) const;

  private:
    PulseShape() = default;
    Kind kind_ = Kind::LorentzianMatched;
    double kappa_ = 1.0;
    double halfwidth_ = 50.0;
    std::vector<std::pair<double, Complex>> samples_;
};

} // namespace lambdacav
