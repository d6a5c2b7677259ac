#include "lambdacav/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lambdacav/numerics.hpp"

namespace lambdacav {

PulseShape PulseShape::lorentzian_matched(double kappa) {
    if (!(kappa > 0.0)) throw InvalidInput("PulseShape: kappa must be > 0");
    PulseShape p;
    p.kind_ = Kind::LorentzianMatched;
    p.kappa_ = kappa;
    return p;
}

PulseShape PulseShape::flat_band(double halfwidth) {
    if (!(halfwidth > 0.0)) throw InvalidInput("PulseShape: halfwidth must be > 0");
    PulseShape p;
    p.kind_ = Kind::FlatBand;
    p.halfwidth_ = halfwidth;
    return p;
}

PulseShape PulseShape::tabulated(std::vector<std::pair<double, Complex>> samples) {
    if (samples.size() < 2)
        throw InvalidInput("PulseShape: tabulated pulse needs >= 2 samples");
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    PulseShape p;
    p.kind_ = Kind::Tabulated;
    p.samples_ = std::move(samples);
    double n2 = p.norm_quadrature(std::abs(p.samples_.back().first) +
                                  std::abs(p.samples_.front().first) + 1.0);
    if (!(n2 > 0.0))
        throw InvalidInput("PulseShape: tabulated pulse has zero norm");
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& s : p.samples_) s.second *= scale;
    return p;
}

Complex PulseShape::theta(double x) const {
    switch (kind_) {
        case Kind::LorentzianMatched:
            return std::sqrt(kappa_ / std::numbers::pi) / Complex{x, kappa_};
        case Kind::FlatBand:
            return std::abs(x) <= halfwidth_
                       ? Complex{1.0 / std::sqrt(2.0 * halfwidth_), 0.0}
                       : Complex{0.0, 0.0};
        case Kind::Tabulated: {
            if (x <= samples_.front().first || x >= samples_.back().first) {
                if (x == samples_.front().first) return samples_.front().second;
                if (x == samples_.back().first) return samples_.back().second;
                return {0.0, 0.0};
            }
            auto it = std::upper_bound(
                samples_.begin(), samples_.end(), x,
                [](double v, const auto& s) { return v < s.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double u = (x - lo.first) / (hi.first - lo.first);
            return lo.second + u * (hi.second - lo.second);
        }
    }
    return {0.0, 0.0};
}

std::pair<double, double> PulseShape::support(double window) const {
    double lo = -window, hi = window;
    if (kind_ == Kind::FlatBand) {
        lo = std::max(lo, -halfwidth_);
        hi = std::min(hi, halfwidth_);
    } else if (kind_ == Kind::Tabulated) {
        lo = std::max(lo, samples_.front().first);
        hi = std::min(hi, samples_.back().first);
    }
    return {lo, hi};
}

double PulseShape::norm_quadrature(double window, double rel_tol) const {
    auto [lo, hi] = support(window);
    Complex n = num::adaptive_integrate(
        [this](double x) { return Complex{std::norm(theta(x)), 0.0}; }, lo, hi,
        rel_tol);
    return n.real();
}

} // namespace lambdacav
