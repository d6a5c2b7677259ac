#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lambdacav::cli {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        if (!std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + key + "': " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("invalid boolean for '" + key + "': " + v);
}

bool is_rate_axis(const std::string& name) {
    return name == "g" || name == "omega" || name == "delta" ||
           name == "delta_l";
}

} // namespace

AxisSpec parse_axis(const std::string& text) {
    AxisSpec a;
    std::stringstream ss(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() != 4)
        throw ConfigError("axis must be 'name:min:max:count': " + text);
    a.name = parts[0];
    a.min = parse_double("axis min", parts[1]);
    a.max = parse_double("axis max", parts[2]);
    a.count = parse_int("axis count", parts[3]);
    a.set = true;
    if (a.count < 2) throw ConfigError("axis count must be >= 2: " + text);
    static const char* kAxes[] = {"g",     "omega",  "delta", "delta_l", "theta",
                                  "phi",   "theta2", "phi2",  "tau"};
    if (std::find_if(std::begin(kAxes), std::end(kAxes), [&](const char* n) {
            return a.name == n;
        }) == std::end(kAxes))
        throw ConfigError("unknown axis parameter: " + a.name);
    return a;
}

void RunConfig::apply_line(const std::string& key, const std::string& value) {
    if (key == "mode") mode = value;
    else if (key == "units") units = value;
    else if (key == "g") g = parse_double(key, value);
    else if (key == "omega") omega = parse_double(key, value);
    else if (key == "kappa") kappa = parse_double(key, value);
    else if (key == "delta") delta = parse_double(key, value);
    else if (key == "delta_l") delta_l = parse_double(key, value);
    else if (key == "theta") theta = parse_double(key, value);
    else if (key == "phi") phi = parse_double(key, value);
    else if (key == "theta2") theta2 = parse_double(key, value);
    else if (key == "phi2") phi2 = parse_double(key, value);
    else if (key == "pulse") pulse = value;
    else if (key == "pulse_halfwidth") pulse_halfwidth = parse_double(key, value);
    else if (key == "t_start") t_start = parse_double(key, value);
    else if (key == "t_end") t_end = parse_double(key, value);
    else if (key == "n_points") n_points = parse_int(key, value);
    else if (key == "quad_theta") quad_theta = parse_int(key, value);
    else if (key == "quad_phi") quad_phi = parse_int(key, value);
    else if (key == "average") average = parse_bool(key, value);
    else if (key == "x_window") x_window = parse_double(key, value);
    else if (key == "time_scale") time_scale = value;
    else if (key == "threads") threads = parse_int(key, value);
    else if (key == "observable") observable = value;
    else if (key == "tau") tau = parse_double(key, value);
    else if (key == "axis1") axis1 = parse_axis(value);
    else if (key == "axis2") axis2 = parse_axis(value);
    else if (key == "out") out = value;
    else throw ConfigError("unknown config key: " + key);
}

void RunConfig::normalize() {
    static const char* kModes[] = {"amplitudes", "entropy", "negativity",
                                   "sweep", "density"};
    if (std::find_if(std::begin(kModes), std::end(kModes), [&](const char* m) {
            return mode == m;
        }) == std::end(kModes))
        throw ConfigError("unknown mode: " + mode);
    if (units == "g") {
        // File values are multiples of g and tau = g t; kappa holds kappa/g.
        if (!(kappa > 0.0)) throw ConfigError("units=g requires kappa > 0");
        const double kg = kappa;
        g /= kg;
        omega /= kg;
        delta /= kg;
        delta_l /= kg;
        t_start *= kg;
        t_end *= kg;
        tau *= kg;
        auto rescale_axis = [&](AxisSpec& a) {
            if (!a.set) return;
            if (is_rate_axis(a.name)) {
                a.min /= kg;
                a.max /= kg;
            } else if (a.name == "tau") {
                a.min *= kg;
                a.max *= kg;
            }
        };
        rescale_axis(axis1);
        rescale_axis(axis2);
        kappa = 1.0;
        units = "kappa";
    } else if (units != "kappa") {
        throw ConfigError("units must be 'kappa' or 'g'");
    }
    if (time_scale != "kappa" && time_scale != "g")
        throw ConfigError("time_scale must be 'kappa' or 'g'");
    if (pulse != "lorentzian" && pulse != "flat")
        throw ConfigError("pulse must be 'lorentzian' or 'flat'");
    if (n_points < 2) throw ConfigError("n_points must be >= 2");
    if (!(t_end > t_start) || t_start < 0.0)
        throw ConfigError("need t_end > t_start >= 0");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (quad_theta < 8 || quad_phi < 2)
        throw ConfigError("quadrature orders too small");
    if (mode == "sweep") {
        if (!axis1.set) throw ConfigError("sweep needs axis1");
        if (axis2.set && axis1.name == axis2.name)
            throw ConfigError("sweep axes must reference distinct parameters");
        static const char* kObs[] = {"linear_entropy", "avg_linear_entropy",
                                     "negativity", "avg_negativity",
                                     "populations"};
        if (std::find_if(std::begin(kObs), std::end(kObs), [&](const char* o) {
                return observable == o;
            }) == std::end(kObs))
            throw ConfigError("unknown observable: " + observable);
    }
    try {
        params().validate();
        init1().validate();
        init2().validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
}

PhysicalParams RunConfig::params() const {
    PhysicalParams p;
    p.g = g;
    p.omega_drive = omega;
    p.kappa = kappa;
    p.delta = delta;
    p.delta_l = delta_l;
    return p;
}

InitialAtomState RunConfig::init1() const {
    InitialAtomState s;
    s.theta = theta;
    s.phi = phi;
    return s;
}

InitialAtomState RunConfig::init2() const {
    InitialAtomState s;
    s.theta = theta2;
    s.phi = phi2;
    return s;
}

PulseShape RunConfig::make_pulse() const {
    if (pulse == "flat") return PulseShape::flat_band(pulse_halfwidth);
    return PulseShape::lorentzian_matched(kappa);
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        base.apply_line(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

} // namespace lambdacav::cli
