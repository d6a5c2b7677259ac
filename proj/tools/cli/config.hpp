#pragma once

#include <string>

#include "lambdacav/model_core.hpp"
#include "lambdacav/pulse.hpp"

namespace lambdacav::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AxisSpec {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    bool set = false;
};

// One scenario = one dataset. Values are dimensionless in units of kappa
// unless units = g, in which case every rate is a multiple of g and times
// are tau = g t (kappa then holds kappa/g); normalize() rescales back to
// kappa units.
struct RunConfig {
    std::string mode = "amplitudes"; // amplitudes|entropy|negativity|sweep|density
    std::string units = "kappa";     // kappa | g
    double g = 10.0, omega = 10.0, kappa = 1.0, delta = 0.0, delta_l = 0.0;
    double theta = 0.0, phi = 0.0, theta2 = 0.0, phi2 = 0.0;
    std::string pulse = "lorentzian"; // lorentzian | flat
    double pulse_halfwidth = 50.0;
    double t_start = 0.0, t_end = 10.0;
    int n_points = 201;
    int quad_theta = 64, quad_phi = 32;
    bool average = false;
    double x_window = 200.0;
    std::string time_scale = "kappa"; // kappa | g
    int threads = 1;
    std::string observable = "linear_entropy";
    double tau = 15.0;
    AxisSpec axis1, axis2;
    std::string out;

    void apply_line(const std::string& key, const std::string& value);
    void normalize(); // units conversion + validation
    PhysicalParams params() const;
    InitialAtomState init1() const;
    InitialAtomState init2() const;
    PulseShape make_pulse() const;
};

RunConfig load_config_file(const std::string& path, RunConfig base = {});
AxisSpec parse_axis(const std::string& text);

} // namespace lambdacav::cli
