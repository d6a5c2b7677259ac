#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli/config.hpp"
#include "cli/runners.hpp"
#include "lambdacav/errors.hpp"

namespace fs = std::filesystem;
using namespace lambdacav;
using namespace lambdacav::cli;

#ifndef LAMBDACAV_SOURCE_PRESETS
#define LAMBDACAV_SOURCE_PRESETS ""
#endif

namespace {

struct FlagOverrides {
    CLI::App* cmd = nullptr;
    std::string config_path, out, pulse, time_scale, units, observable;
    std::string axis1, axis2;
    double g = 0, omega = 0, kappa = 0, delta = 0, delta_l = 0;
    double theta = 0, phi = 0, theta2 = 0, phi2 = 0;
    double t_start = 0, t_end = 0, tau = 0, pulse_halfwidth = 0;
    int n_points = 0, quad_order = 0, threads = 0;
    bool average = false;

    void attach(CLI::App* app, bool with_axes) {
        cmd = app;
        app->add_option("--config", config_path, "key = value config file");
        app->add_option("--out", out, "output CSV path");
        app->add_option("--g", g, "atom-cavity coupling");
        app->add_option("--omega", omega, "classical drive coupling");
        app->add_option("--kappa", kappa, "cavity decay rate");
        app->add_option("--delta", delta, "cavity detuning");
        app->add_option("--delta-l", delta_l, "drive detuning");
        app->add_option("--theta", theta, "atom 1 polar angle");
        app->add_option("--phi", phi, "atom 1 azimuthal angle");
        app->add_option("--theta2", theta2, "atom 2 polar angle");
        app->add_option("--phi2", phi2, "atom 2 azimuthal angle");
        app->add_option("--t-start", t_start, "first time point");
        app->add_option("--t-end", t_end, "last time point");
        app->add_option("--n-points", n_points, "number of time points");
        app->add_option("--quad-order", quad_order,
                        "Bloch-sphere quadrature order (phi order is half)");
        app->add_option("--pulse", pulse, "detection pulse: lorentzian|flat");
        app->add_option("--pulse-halfwidth", pulse_halfwidth,
                        "flat pulse half-width");
        app->add_option("--time-scale", time_scale,
                        "emitted time column: kappa|g");
        app->add_option("--units", units, "input units: kappa|g");
        app->add_option("--threads", threads, "worker threads");
        app->add_flag("--average", average, "include the Bloch-sphere average");
        if (with_axes) {
            app->add_option("--observable", observable, "sweep observable");
            app->add_option("--tau", tau, "sweep/density evaluation time");
            app->add_option("--axis1", axis1, "sweep axis: name:min:max:count");
            app->add_option("--axis2", axis2, "second sweep axis");
        }
    }

    RunConfig merge(RunConfig cfg) const {
        auto used = [this](const std::string& name) {
            const CLI::Option* opt = cmd->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        if (used("--out")) cfg.out = out;
        if (used("--g")) cfg.g = g;
        if (used("--omega")) cfg.omega = omega;
        if (used("--kappa")) cfg.kappa = kappa;
        if (used("--delta")) cfg.delta = delta;
        if (used("--delta-l")) cfg.delta_l = delta_l;
        if (used("--theta")) cfg.theta = theta;
        if (used("--phi")) cfg.phi = phi;
        if (used("--theta2")) cfg.theta2 = theta2;
        if (used("--phi2")) cfg.phi2 = phi2;
        if (used("--t-start")) cfg.t_start = t_start;
        if (used("--t-end")) cfg.t_end = t_end;
        if (used("--n-points")) cfg.n_points = n_points;
        if (used("--quad-order")) {
            cfg.quad_theta = quad_order;
            cfg.quad_phi = std::max(2, quad_order / 2);
        }
        if (used("--pulse")) cfg.pulse = pulse;
        if (used("--pulse-halfwidth")) cfg.pulse_halfwidth = pulse_halfwidth;
        if (used("--time-scale")) cfg.time_scale = time_scale;
        if (used("--units")) cfg.units = units;
        if (used("--threads")) cfg.threads = threads;
        if (used("--average")) cfg.average = true;
        if (used("--observable")) cfg.observable = observable;
        if (used("--tau")) cfg.tau = tau;
        if (used("--axis1")) cfg.axis1 = parse_axis(axis1);
        if (used("--axis2")) cfg.axis2 = parse_axis(axis2);
        return cfg;
    }
};

fs::path resolve_out(const std::string& requested, const std::string& fallback) {
    fs::path p = requested.empty() ? fs::path(fallback) : fs::path(requested);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("LAMBDACAV_OUT_DIR"))
            p = fs::path(dir) / p;
    }
    return p;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path.string());
    out << content;
}

int run_single(const RunConfig& cfg, const std::string& default_name) {
    RunConfig c = cfg;
    c.normalize();
    auto result = run_mode(c);
    const fs::path path = resolve_out(c.out, default_name);
    write_file(path, result.csv);
    std::cerr << "wrote " << path.string();
    if (result.warnings > 0)
        std::cerr << "  (" << result.warnings << " cell warning(s))";
    std::cerr << "\n";
    return 0;
}

fs::path find_preset_dir(const std::string& override_dir) {
    std::vector<fs::path> candidates;
    if (!override_dir.empty()) candidates.emplace_back(override_dir);
    if (const char* env = std::getenv("LAMBDACAV_PRESET_DIR"))
        candidates.emplace_back(env);
    candidates.emplace_back("presets");
    if (std::string(LAMBDACAV_SOURCE_PRESETS).size() > 0)
        candidates.emplace_back(LAMBDACAV_SOURCE_PRESETS);
    for (const auto& c : candidates)
        if (fs::is_directory(c)) return c;
    throw ConfigError("no preset directory found; use --preset-dir");
}

int run_figure(const std::string& preset, const std::string& preset_dir,
               const FlagOverrides& flags) {
    const fs::path dir = find_preset_dir(preset_dir) / preset;
    if (!fs::is_directory(dir))
        throw ConfigError("unknown figure preset: " + preset + " (looked in " +
                          dir.parent_path().string() + ")");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".cfg") files.push_back(entry.path());
    if (files.empty()) throw ConfigError("preset has no .cfg files: " + preset);
    std::sort(files.begin(), files.end());

    if (files.size() == 1) {
        RunConfig cfg = flags.merge(load_config_file(files[0].string()));
        return run_single(cfg, preset + ".csv");
    }
    // Multi-curve preset: one block per config, labelled by file stem.
    std::string merged;
    std::string header;
    int warnings = 0;
    for (const auto& file : files) {
        RunConfig cfg = flags.merge(load_config_file(file.string()));
        cfg.out.clear();
        cfg.normalize();
        auto result = run_mode(cfg);
        warnings += result.warnings;
        const std::string& csv = result.csv;
        const size_t nl = csv.find('\n');
        const std::string this_header = csv.substr(0, nl);
        if (header.empty()) {
            header = this_header;
            merged = "curve," + header + "\n";
        } else if (header != this_header) {
            throw ConfigError("preset mixes incompatible modes: " + preset);
        }
        const std::string stem = file.stem().string();
        size_t pos = nl + 1;
        while (pos < csv.size()) {
            size_t next = csv.find('\n', pos);
            merged += stem + "," + csv.substr(pos, next - pos) + "\n";
            pos = next + 1;
        }
    }
    const fs::path path = resolve_out(flags.out, preset + ".csv");
    write_file(path, merged);
    std::cerr << "wrote " << path.string();
    if (warnings > 0) std::cerr << "  (" << warnings << " cell warning(s))";
    std::cerr << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for two driven three-level atoms in leaky "
                 "cavities coupled to Lorentzian reservoirs"};
    app.require_subcommand(1);

    FlagOverrides amp_flags, ent_flags, neg_flags, sweep_flags, fig_flags;
    auto* amp = app.add_subcommand("amplitudes",
                                   "time series of E, F, G and populations");
    amp_flags.attach(amp, false);
    auto* ent = app.add_subcommand("entropy",
                                   "linear entropy and its Bloch average");
    ent_flags.attach(ent, false);
    auto* neg = app.add_subcommand("negativity",
                                   "post-BSM two-atom negativity");
    neg_flags.attach(neg, false);
    auto* swp = app.add_subcommand("sweep", "parameter sweep grid");
    sweep_flags.attach(swp, true);

    auto* val = app.add_subcommand("validate", "run the invariant checks");
    std::string level = "quick";
    int val_threads = 1;
    val->add_option("--level", level, "quick|full");
    val->add_option("--threads", val_threads, "worker threads");

    auto* fig = app.add_subcommand("figure", "reproduce a named dataset");
    std::string preset, preset_dir;
    fig->add_option("preset", preset, "preset name, e.g. fig2")->required();
    fig->add_option("--preset-dir", preset_dir, "preset directory");
    fig_flags.attach(fig, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (val->parsed()) {
            const int failures = run_validate(level, val_threads, std::cout);
            return failures == 0 ? 0 : 1;
        }
        if (fig->parsed()) return run_figure(preset, preset_dir, fig_flags);

        FlagOverrides* flags = nullptr;
        std::string mode;
        if (amp->parsed()) { flags = &amp_flags; mode = "amplitudes"; }
        else if (ent->parsed()) { flags = &ent_flags; mode = "entropy"; }
        else if (neg->parsed()) { flags = &neg_flags; mode = "negativity"; }
        else { flags = &sweep_flags; mode = "sweep"; }

        RunConfig cfg;
        if (!flags->config_path.empty())
            cfg = load_config_file(flags->config_path);
        cfg = flags->merge(cfg);
        cfg.mode = mode;
        return run_single(cfg, mode + ".csv");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
