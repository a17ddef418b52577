// Command-line front end: plasmon <spectral|spectrum|dynamics|concurrence|selftest> --config FILE

#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "plasmon/errors.hpp"
#include "plasmon/format.hpp"
#include "plasmon/scenario.hpp"
#include "plasmon/selftest.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
    using namespace plasmon;

    CLI::App app{"Emitters above a metal surface with d-parameter corrections"};
    app.require_subcommand(0, 1);
    bool print_defaults = false;
    app.add_flag("--print-default-config", print_defaults, "Print every config key with its default and exit");

    std::string config_path;
    std::string out_dir;
    unsigned threads = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Scenario file (INI)")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (default: [output] directory)");
        sub->add_option("--threads", threads, "Worker threads for table builds (0: hardware)");
    };
    auto* spectral = app.add_subcommand("spectral", "Spectral density table and peak report");
    auto* spectrum = app.add_subcommand("spectrum", "Bound states, optional z0/R sweep");
    auto* dynamics = app.add_subcommand("dynamics", "Volterra amplitudes and decay rate");
    auto* conc = app.add_subcommand("concurrence", "Two-emitter concurrence and steady branches");
    auto* selftest = app.add_subcommand("selftest", "Run the oracle suite");
    for (auto* s : {spectral, spectrum, dynamics, conc}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (print_defaults) {
        std::cout << default_config_text();
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kExitConfig;
    }

    try {
        if (selftest->parsed()) {
            bool ok = true;
            for (const auto& r : run_selftest()) {
                std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
                ok = ok && r.passed;
            }
            return ok ? 0 : kExitNumerical;
        }

        const ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : load_config_file(config_path);
        const std::filesystem::path out = std::filesystem::path(out_dir.empty() ? cfg.output_dir : out_dir);
        if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

        if (spectral->parsed()) {
            const auto r = run_spectral(cfg, out, threads);
            std::cout << "peak " << format_double(r.peak.omega_peak) << " eV, FWHM " << format_double(r.peak.fwhm)
                      << " eV, J/Gamma0 " << format_double(r.peak.ratio_to_gamma0) << '\n';
        } else if (spectrum->parsed()) {
            const auto r = run_spectrum(cfg, out, threads);
            std::cout << r.states.size() << " bound state(s)\n";
            for (const auto& b : r.states)
                std::cout << "  channel " << b.channel << ": varpi_b " << format_double(b.varpi_b) << " eV, L "
                          << format_double(b.weight_L) << '\n';
        } else if (dynamics->parsed()) {
            const auto r = run_dynamics(cfg, out, threads);
            const std::size_t last = r.trajectory.size() - 1;
            std::cout << r.trajectory.size() << " steps, |a1(T)|^2 = "
                      << format_double(r.trajectory.population(last, 0)) << '\n';
        } else if (conc->parsed()) {
            const auto r = run_concurrence(cfg, out, threads);
            std::cout << r.states.size() << " bound state(s); late C in [" << format_double(r.late_min) << ", "
                      << format_double(r.late_max) << "], max deviation from steady "
                      << format_double(r.late_max_deviation) << '\n';
        }
        std::cout << "wrote " << out.string() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
