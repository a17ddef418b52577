#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "plasmon/dynamics.hpp"
#include "plasmon/spectrum.hpp"

namespace plasmon {

enum class DSourceKind { lra, surrogate, table };

/// One simulation scenario, read from an INI-style file with the sections
/// [material], [geometry], [emitter], [grid], [tolerance] and [output].
struct ScenarioConfig {
    // [material]
    DrudeParams drude{};
    DSourceKind dsource = DSourceKind::surrogate;
    std::string dtable_path;
    SurrogateDPerp surrogate{};

    // [geometry]
    double eps_d = 1.0;
    double z0 = 2.9;               // nm
    std::size_t n_emitters = 1;
    double separation = 10.0;      // nm, spacing along x for N >= 2
    std::vector<double> z0_sweep;          // nm, spectrum subcommand only
    std::vector<double> separation_sweep;  // nm, spectrum subcommand only

    // [emitter]
    EmitterParams emitter{};
    std::vector<cplx> initial;     // empty: (1, 0, ..., 0)

    // [grid]
    GridSpec grid{};
    double t_max = 1000.0;         // hbar/eV
    double dt = 0.0125;            // hbar/eV
    std::size_t output_stride = 8;

    // [tolerance]
    QuadratureSpec quadrature{};
    RootOptions root{};

    // [output]
    std::string output_dir = "out";

    void validate() const;

    InterfaceModel interface_model() const;
    Geometry geometry() const;
    std::vector<cplx> initial_amplitudes() const;
};

ScenarioConfig load_config(std::istream& in);
ScenarioConfig load_config_file(const std::filesystem::path& path);

/// INI text that load_config reads back to `cfg`.
std::string format_config(const ScenarioConfig& cfg);

/// Commented listing of every key with its default value.
std::string default_config_text();

struct SpectralRun {
    SpectralTable table;
    PeakReport peak;
    double gamma0 = 0.0;
};

struct SpectrumRun {
    SpectralTable table;
    std::vector<BoundState> states;
};

struct DynamicsRun {
    SpectralTable table;
    AmplitudeTrajectory trajectory;
    std::vector<BoundState> states;  // N <= 2 only
};

struct ConcurrenceRun {
    SpectralTable table;
    AmplitudeTrajectory trajectory;
    std::vector<BoundState> states;
    double late_window_start = 0.0;
    double late_min = 0.0;
    double late_max = 0.0;
    double late_mean = 0.0;
    double late_max_deviation = 0.0;  // max |C - steady prediction| on the late window
};

/// Pipeline stages. Each writes its CSV files and run.json into `out_dir`
/// (created if missing) and returns the computed objects.
SpectralRun run_spectral(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, unsigned threads);
SpectrumRun run_spectrum(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, unsigned threads);
DynamicsRun run_dynamics(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, unsigned threads);
ConcurrenceRun run_concurrence(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, unsigned threads);

}  // namespace plasmon
