// crossguide command-line front end.
//
// Subcommands: solve, sweep, smatrix, timedomain, validate. Options can come
// from a config file (--config) and/or flags; flags override file values.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 I/O failure.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crossguide/runner.hpp"
#include "crossguide/version.hpp"

namespace {

struct CliOptions {
    std::optional<std::filesystem::path> config_path;
    std::map<std::string, std::string> overrides;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option_function<std::string>(
           "--config", [&opt](const std::string& v) { opt.config_path = v; },
           "configuration file (sectioned key = value)");
    auto forward = [&opt, cmd](const std::string& flag, const std::string& key,
                               const std::string& help) {
        cmd->add_option_function<std::string>(
               flag, [&opt, key](const std::string& v) { opt.overrides[key] = v; }, help);
    };
    forward("--a1", "geometry.a1", "half-width of the horizontal channels");
    forward("--a2", "geometry.a2", "half-width of the vertical channels");
    forward("--b1", "geometry.b1", "half-height of the junction rectangle");
    forward("--b2", "geometry.b2", "half-width of the junction rectangle");
    forward("--k", "run.k", "frequency / wavenumber");
    forward("--k-min", "run.k_min", "sweep start frequency");
    forward("--k-max", "run.k_max", "sweep / quadrature end frequency");
    forward("--n-k", "run.n_k", "number of frequency samples");
    forward("--bc", "run.bc", "sub-problem (NN, DD, ND or DN); default all four");
    forward("--parity", "run.parity", "incident parity for time synthesis (even|odd)");
    forward("--p", "run.p", "incident mode index");
    forward("--N", "run.n", "series truncation (default 100)");
    forward("--out", "output.dir", "output directory");
    forward("--jobs", "run.jobs", "worker threads");
    forward("--seed", "run.seed", "seed for randomized validation sampling");
    forward("--samples", "run.samples", "randomized oracle samples in validate mode");
    forward("--nx", "grid.nx", "grid resolution in x");
    forward("--ny", "grid.ny", "grid resolution in y");
    forward("--channel-length", "grid.channel_length", "rendered channel length");
    forward("--times", "time.t_values", "comma-separated snapshot times");
    forward("--spectrum-center", "spectrum.center", "Gaussian spectrum center");
    forward("--spectrum-rate", "spectrum.rate", "Gaussian spectrum decay rate");
    forward("--spectrum-scale", "spectrum.scale", "Gaussian spectrum scale");
    forward("--spectrum-file", "spectrum.file", "tabulated spectrum file (k,re[,im] rows)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency- and time-domain solver for wave scattering at a "
                 "rectangular four-waveguide junction"};
    app.set_version_flag("--version", crossguide::kVersion);
    app.require_subcommand(1);

    const std::map<std::string, std::string> modes = {
        {"solve", "solve the quadrant sub-problems at one frequency"},
        {"sweep", "diagnostics (and scattering matrices) over a frequency range"},
        {"smatrix", "build the junction scattering matrix"},
        {"timedomain", "synthesize pulse snapshots from frequency solutions"},
        {"validate", "run the randomized invariant suite"},
    };
    std::map<std::string, CliOptions> options;
    for (const auto& [name, help] : modes) add_common_flags(app.add_subcommand(name, help), options[name]);

    CLI11_PARSE(app, argc, argv);

    const std::string mode = app.get_subcommands().front()->get_name();
    CliOptions& opt = options[mode];
    opt.overrides["run.mode"] = mode;

    try {
        crossguide::RunContext ctx;
        ctx.cfg = crossguide::parse_config(opt.config_path, opt.overrides, &ctx.config_echo,
                                           &ctx.override_notes);
        for (const auto& note : ctx.override_notes) std::cerr << "note: " << note << "\n";
        return crossguide::run(ctx);
    } catch (const crossguide::ParseError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const crossguide::ValidationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const crossguide::NonPositiveDimension& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const crossguide::ChannelWiderThanJunction& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const crossguide::InvalidIncidentMode& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const crossguide::GeometryRestriction& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const crossguide::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const crossguide::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
