#include "plasmon/scenario.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "plasmon/analysis.hpp"
#include "plasmon/entanglement.hpp"
#include "plasmon/errors.hpp"
#include "plasmon/format.hpp"
#include "plasmon/simd/kernels.hpp"
#include "plasmon/version.hpp"

namespace plasmon {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- parsing

double parse_double(const std::string& key, std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError("key '" + key + "': '" + std::string(text) + "' is not a finite number");
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (v < 0.0 || v != std::floor(v) || v > 1e12)
        throw ConfigError("key '" + key + "': '" + text + "' is not a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::string token;
    std::istringstream ss(text);
    while (ss >> token) {
        std::string_view t(token);
        while (!t.empty() && t.back() == ',') t.remove_suffix(1);
        if (!t.empty()) out.push_back(parse_double(key, t));
    }
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ' ';
        s += format_double(v[k]);
    }
    return s;
}

std::string dsource_name(DSourceKind k) {
    switch (k) {
        case DSourceKind::lra: return "lra";
        case DSourceKind::surrogate: return "surrogate";
        case DSourceKind::table: return "table";
    }
    return "lra";
}

DSourceKind parse_dsource(const std::string& text) {
    if (text == "lra" || text == "none") return DSourceKind::lra;
    if (text == "surrogate") return DSourceKind::surrogate;
    if (text == "table") return DSourceKind::table;
    throw ConfigError("material.dsource must be lra, surrogate or table, got '" + text + "'");
}

// One configuration key: how to print it, how to read it, and what it means.
struct Key {
    std::string section;
    std::string name;
    std::string comment;
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, const std::string&)> set;
};

const std::vector<Key>& keys() {
    static const std::vector<Key> k = [] {
        std::vector<Key> v;
        auto num = [&v](std::string sec, std::string name, std::string comment, auto member) {
            v.push_back({sec, name, comment,
                         [member](const ScenarioConfig& c) { return format_double(member(const_cast<ScenarioConfig&>(c))); },
                         [member, full = sec + "." + name](ScenarioConfig& c, const std::string& s) {
                             member(c) = parse_double(full, s);
                         }});
        };
        auto cnt = [&v](std::string sec, std::string name, std::string comment, auto member) {
            v.push_back({sec, name, comment,
                         [member](const ScenarioConfig& c) {
                             return std::to_string(member(const_cast<ScenarioConfig&>(c)));
                         },
                         [member, full = sec + "." + name](ScenarioConfig& c, const std::string& s) {
                             member(c) = parse_count(full, s);
                         }});
        };
        auto lst = [&v](std::string sec, std::string name, std::string comment, auto member) {
            v.push_back({sec, name, comment,
                         [member](const ScenarioConfig& c) { return format_list(member(const_cast<ScenarioConfig&>(c))); },
                         [member, full = sec + "." + name](ScenarioConfig& c, const std::string& s) {
                             member(c) = parse_list(full, s);
                         }});
        };

        num("material", "omega_p_ev", "Drude plasma energy", [](ScenarioConfig& c) -> double& { return c.drude.omega_p; });
        num("material", "gamma_p_ev", "Drude damping", [](ScenarioConfig& c) -> double& { return c.drude.gamma_p; });
        v.push_back({"material", "dsource", "surface response: lra | surrogate | table",
                     [](const ScenarioConfig& c) { return dsource_name(c.dsource); },
                     [](ScenarioConfig& c, const std::string& s) { c.dsource = parse_dsource(s); }});
        v.push_back({"material", "dtable_path", "d-parameter CSV, used when dsource = table",
                     [](const ScenarioConfig& c) { return c.dtable_path; },
                     [](ScenarioConfig& c, const std::string& s) { c.dtable_path = s; }});
        auto d_inf_re = [](ScenarioConfig& c, const std::string& s) {
            c.surrogate.d_inf = {parse_double("material.surrogate_d_inf_re_nm", s), c.surrogate.d_inf.imag()};
        };
        auto d_inf_im = [](ScenarioConfig& c, const std::string& s) {
            c.surrogate.d_inf = {c.surrogate.d_inf.real(), parse_double("material.surrogate_d_inf_im_nm", s)};
        };
        v.push_back({"material", "surrogate_d_inf_re_nm", "surrogate d_perp: d_inf + A / (w_s^2 - w^2 - i w g_s)",
                     [](const ScenarioConfig& c) { return format_double(c.surrogate.d_inf.real()); }, d_inf_re});
        v.push_back({"material", "surrogate_d_inf_im_nm", "",
                     [](const ScenarioConfig& c) { return format_double(c.surrogate.d_inf.imag()); }, d_inf_im});
        v.push_back({"material", "surrogate_amplitude_ev2_nm", "A, real and non-negative",
                     [](const ScenarioConfig& c) { return format_double(c.surrogate.amplitude.real()); },
                     [](ScenarioConfig& c, const std::string& s) {
                         c.surrogate.amplitude = {parse_double("material.surrogate_amplitude_ev2_nm", s), 0.0};
                     }});
        num("material", "surrogate_pole_ev", "w_s", [](ScenarioConfig& c) -> double& { return c.surrogate.pole_omega; });
        num("material", "surrogate_width_ev", "g_s", [](ScenarioConfig& c) -> double& { return c.surrogate.pole_width; });

        num("geometry", "eps_d", "dielectric permittivity above the metal", [](ScenarioConfig& c) -> double& { return c.eps_d; });
        num("geometry", "z0_nm", "emitter height", [](ScenarioConfig& c) -> double& { return c.z0; });
        cnt("geometry", "n_emitters", "emitters on a line along x", [](ScenarioConfig& c) -> std::size_t& { return c.n_emitters; });
        num("geometry", "separation_nm", "emitter spacing R", [](ScenarioConfig& c) -> double& { return c.separation; });
        lst("geometry", "z0_sweep_nm", "optional heights for the spectrum sweep", [](ScenarioConfig& c) -> std::vector<double>& { return c.z0_sweep; });
        lst("geometry", "separation_sweep_nm", "optional spacings for the spectrum sweep", [](ScenarioConfig& c) -> std::vector<double>& { return c.separation_sweep; });

        num("emitter", "omega0_ev", "transition energy", [](ScenarioConfig& c) -> double& { return c.emitter.omega_0; });
        num("emitter", "alpha_ev_nm3", "coupling scale mu^2 / (pi hbar eps0)", [](ScenarioConfig& c) -> double& { return c.emitter.coupling_alpha; });
        v.push_back({"emitter", "initial_re", "initial amplitudes, one per emitter (empty: 1 0 ...)",
                     [](const ScenarioConfig& c) {
                         std::vector<double> r;
                         for (cplx a : c.initial) r.push_back(a.real());
                         return format_list(r);
                     },
                     [](ScenarioConfig& c, const std::string& s) {
                         const auto r = parse_list("emitter.initial_re", s);
                         c.initial.resize(std::max(c.initial.size(), r.size()));
                         for (std::size_t k = 0; k < r.size(); ++k) c.initial[k] = {r[k], c.initial[k].imag()};
                     }});
        v.push_back({"emitter", "initial_im", "",
                     [](const ScenarioConfig& c) {
                         std::vector<double> r;
                         for (cplx a : c.initial) r.push_back(a.imag());
                         return format_list(r);
                     },
                     [](ScenarioConfig& c, const std::string& s) {
                         const auto r = parse_list("emitter.initial_im", s);
                         c.initial.resize(std::max(c.initial.size(), r.size()));
                         for (std::size_t k = 0; k < r.size(); ++k) c.initial[k] = {c.initial[k].real(), r[k]};
                     }});

        num("grid", "omega_min_ev", "", [](ScenarioConfig& c) -> double& { return c.grid.omega_min; });
        num("grid", "omega_max_ev", "", [](ScenarioConfig& c) -> double& { return c.grid.omega_max; });
        cnt("grid", "count", "uniform nodes", [](ScenarioConfig& c) -> std::size_t& { return c.grid.count; });
        cnt("grid", "refine_count", "extra nodes on the plasmon window", [](ScenarioConfig& c) -> std::size_t& { return c.grid.refine_count; });
        num("grid", "refine_center_ev", "0: omega_p / sqrt(1 + eps_d)", [](ScenarioConfig& c) -> double& { return c.grid.refine_center; });
        num("grid", "refine_halfwidth_ev", "0: 5 gamma_p", [](ScenarioConfig& c) -> double& { return c.grid.refine_halfwidth; });
        num("grid", "t_max_hbar_per_ev", "dynamics horizon T", [](ScenarioConfig& c) -> double& { return c.t_max; });
        num("grid", "dt_hbar_per_ev", "time step, at most 0.1 / omega_max", [](ScenarioConfig& c) -> double& { return c.dt; });
        cnt("grid", "output_stride", "write every n-th time step", [](ScenarioConfig& c) -> std::size_t& { return c.output_stride; });

        num("tolerance", "rel_tol", "Sommerfeld quadrature", [](ScenarioConfig& c) -> double& { return c.quadrature.rel_tol; });
        num("tolerance", "abs_tol_per_nm", "", [](ScenarioConfig& c) -> double& { return c.quadrature.abs_tol; });
        num("tolerance", "tail_cut_tol", "", [](ScenarioConfig& c) -> double& { return c.quadrature.tail_cut_tol; });
        cnt("tolerance", "max_panels", "", [](ScenarioConfig& c) -> std::size_t& { return c.quadrature.max_panels; });
        num("tolerance", "root_tol_ev", "bound-state bisection width", [](ScenarioConfig& c) -> double& { return c.root.tolerance; });
        num("tolerance", "root_zero_offset_ev", "Y(0) is taken at -offset", [](ScenarioConfig& c) -> double& { return c.root.zero_offset; });

        v.push_back({"output", "directory", "used when --out is not given",
                     [](const ScenarioConfig& c) { return c.output_dir; },
                     [](ScenarioConfig& c, const std::string& s) { c.output_dir = s; }});
        return v;
    }();
    return k;
}

std::string render(const ScenarioConfig& cfg, bool comments) {
    std::ostringstream out;
    std::string section;
    for (const auto& k : keys()) {
        if (k.section != section) {
            if (!section.empty()) out << '\n';
            section = k.section;
            out << '[' << section << "]\n";
        }
        if (comments && !k.comment.empty()) out << "; " << k.comment << '\n';
        out << k.name << " = " << k.get(cfg) << '\n';
    }
    return out.str();
}

ordered_json config_json(const ScenarioConfig& cfg) {
    ordered_json j = ordered_json::object();
    for (const auto& k : keys()) j[k.section][k.name] = k.get(cfg);
    return j;
}

// ---------------------------------------------------------------- output

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    return f;
}

void write_run_json(const fs::path& dir, const std::string& command, const ScenarioConfig& cfg,
                    const SpectralTable& table, ordered_json results) {
    ordered_json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["simd"] = std::string(simd::isa_name(simd::active_kernels().isa));
    j["config"] = config_json(cfg);
    j["grid_nodes"] = table.size();
    j["tolerances"] = {{"quadrature_rel_tol", cfg.quadrature.rel_tol},
                       {"quadrature_max_error_estimate_ev", table.max_error_estimate()},
                       {"root_tol_ev", cfg.root.tolerance}};
    j["results"] = std::move(results);
    auto f = open_output(dir / "run.json");
    f << j.dump(2) << '\n';
}

ordered_json states_json(const std::vector<BoundState>& states) {
    ordered_json a = ordered_json::array();
    for (const auto& b : states)
        a.push_back({{"channel", b.channel}, {"varpi_b_ev", b.varpi_b}, {"weight_L", b.weight_L}});
    return a;
}

SpectralTable build_table(const ScenarioConfig& cfg, unsigned threads) {
    return build_spectral_table(cfg.interface_model(), cfg.geometry(), cfg.quadrature, cfg.emitter, cfg.grid,
                                threads);
}

void require_pair_or_single(const ScenarioConfig& cfg, const char* what) {
    if (cfg.n_emitters > 2)
        throw UnsupportedError(std::string(what) + " supports N = 1 or 2 emitters, got N = " +
                               std::to_string(cfg.n_emitters));
}

}  // namespace

// ---------------------------------------------------------------- config

void ScenarioConfig::validate() const {
    try {
        drude.validate();
        if (dsource == DSourceKind::surrogate) surrogate.validate();
        if (dsource == DSourceKind::table && dtable_path.empty())
            throw ConfigError("material.dtable_path is required when dsource = table");
        if (!(eps_d > 0.0)) throw ConfigError("geometry.eps_d must be positive");
        if (!(z0 > 0.0)) throw ConfigError("geometry.z0_nm must be positive");
        if (n_emitters < 1) throw ConfigError("geometry.n_emitters must be at least 1");
        if (n_emitters > 1 && !(separation > 0.0)) throw ConfigError("geometry.separation_nm must be positive");
        for (double z : z0_sweep)
            if (!(z > 0.0)) throw ConfigError("geometry.z0_sweep_nm entries must be positive");
        for (double r : separation_sweep)
            if (!(r > 0.0)) throw ConfigError("geometry.separation_sweep_nm entries must be positive");
        emitter.validate();
        if (!initial.empty() && initial.size() != n_emitters)
            throw ConfigError("emitter.initial_re/initial_im need one entry per emitter");
        double norm = 0.0;
        for (cplx a : initial) norm += std::norm(a);
        if (norm > 1.0 + 1e-12) throw ConfigError("initial amplitudes must satisfy |a0| <= 1");
        grid.validate();
        if (!(t_max > 0.0) || !(dt > 0.0)) throw ConfigError("grid.t_max_hbar_per_ev and grid.dt_hbar_per_ev must be positive");
        if (output_stride < 1) throw ConfigError("grid.output_stride must be at least 1");
        quadrature.validate();
        if (!(root.tolerance > 0.0) || !(root.zero_offset > 0.0))
            throw ConfigError("root tolerances must be positive");
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

InterfaceModel ScenarioConfig::interface_model() const {
    InterfaceModel m;
    m.eps_d = eps_d;
    m.drude = drude;
    switch (dsource) {
        case DSourceKind::lra: m.dsource = LocalResponse{}; break;
        case DSourceKind::surrogate: m.dsource = surrogate; break;
        case DSourceKind::table: m.dsource = load_dparam_table_file(dtable_path); break;
    }
    m.validate();
    return m;
}

Geometry ScenarioConfig::geometry() const { return Geometry::line(z0, n_emitters, separation); }

std::vector<cplx> ScenarioConfig::initial_amplitudes() const {
    if (!initial.empty()) return initial;
    std::vector<cplx> a(n_emitters, cplx(0.0, 0.0));
    a[0] = 1.0;
    return a;
}

ScenarioConfig load_config(std::istream& in) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }
    std::map<std::string, const Key*> index;
    std::set<std::string> sections;
    for (const auto& k : keys()) {
        index[k.section + "." + k.name] = &k;
        sections.insert(k.section);
    }
    ScenarioConfig cfg;
    for (const auto& [section, body] : tree) {
        if (!sections.count(section)) throw ConfigError("unknown config section [" + section + "]");
        if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
        for (const auto& [name, value] : body) {
            auto it = index.find(section + "." + name);
            if (it == index.end()) throw ConfigError("unknown config key " + section + "." + name);
            it->second->set(cfg, value.data());
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path.string());
    return load_config(f);
}

std::string format_config(const ScenarioConfig& cfg) { return render(cfg, false); }

std::string default_config_text() {
    return "; plasmon scenario defaults. Units: eV, nm, hbar/eV.\n" + render(ScenarioConfig{}, true);
}

// ---------------------------------------------------------------- stages

SpectralRun run_spectral(const ScenarioConfig& cfg, const fs::path& out_dir, unsigned threads) {
    cfg.validate();
    require_pair_or_single(cfg, "spectral");
    ensure_dir(out_dir);
    SpectralTable table = build_table(cfg, threads);
    const double g0 = gamma0_free(cfg.emitter);
    const PeakReport peak = find_peak(table, g0);
    {
        auto f = open_output(out_dir / "spectral.csv");
        write_spectral_csv(f, table);
    }
    write_run_json(out_dir, "spectral", cfg, table,
                   {{"gamma0_ev", g0},
                    {"peak_omega_ev", peak.omega_peak},
                    {"peak_J_ev", peak.j_peak},
                    {"peak_fwhm_ev", peak.fwhm},
                    {"peak_ratio_to_gamma0", peak.ratio_to_gamma0},
                    {"peak_count", peak.peak_count},
                    {"integral_J00_ev2", integrate_element(table, 0, 0)}});
    return {std::move(table), peak, g0};
}

SpectrumRun run_spectrum(const ScenarioConfig& cfg, const fs::path& out_dir, unsigned threads) {
    cfg.validate();
    require_pair_or_single(cfg, "spectrum");
    ensure_dir(out_dir);
    SpectralTable table = build_table(cfg, threads);
    std::vector<BoundState> states = find_bound_states(table, cfg.emitter.omega_0, cfg.root);
    {
        auto f = open_output(out_dir / "bound_states.csv");
        write_bound_state_csv(f, table.channel_count(), states);
    }
    ordered_json results = {{"bound_state_count", states.size()}, {"bound_states", states_json(states)}};

    if (!cfg.z0_sweep.empty() || !cfg.separation_sweep.empty()) {
        const std::vector<double> zs = cfg.z0_sweep.empty() ? std::vector<double>{cfg.z0} : cfg.z0_sweep;
        const std::vector<double> rs =
            cfg.separation_sweep.empty() ? std::vector<double>{cfg.separation} : cfg.separation_sweep;
        auto f = open_output(out_dir / "bound_states_sweep.csv");
        f << "z0_nm,separation_nm,channel,varpi_b_ev,weight_L,exists\n";
        ordered_json sweep = ordered_json::array();
        for (double z : zs) {
            for (double r : rs) {
                ScenarioConfig point = cfg;
                point.z0 = z;
                point.separation = r;
                const SpectralTable t = build_table(point, threads);
                const auto found = find_bound_states(t, cfg.emitter.omega_0, cfg.root);
                for (std::size_t c = 0; c < t.channel_count(); ++c) {
                    auto it = std::find_if(found.begin(), found.end(), [c](const BoundState& b) { return b.channel == c; });
                    f << format_double(z) << ',' << format_double(r) << ',' << c << ',';
                    if (it == found.end())
                        f << "nan,nan,0\n";
                    else
                        f << format_double(it->varpi_b) << ',' << format_double(it->weight_L) << ",1\n";
                }
                sweep.push_back({{"z0_nm", z}, {"separation_nm", r}, {"bound_state_count", found.size()}});
            }
        }
        results["sweep"] = std::move(sweep);
    }
    write_run_json(out_dir, "spectrum", cfg, table, std::move(results));
    return {std::move(table), std::move(states)};
}

DynamicsRun run_dynamics(const ScenarioConfig& cfg, const fs::path& out_dir, unsigned threads) {
    cfg.validate();
    ensure_dir(out_dir);
    SpectralTable table = build_table(cfg, threads);
    std::vector<BoundState> states;
    if (cfg.n_emitters <= 2) states = find_bound_states(table, cfg.emitter.omega_0, cfg.root);
    const MemoryKernel kernel = build_kernel(table, cfg.t_max, cfg.dt);
    AmplitudeTrajectory traj = solve_volterra(kernel, cfg.emitter, cfg.initial_amplitudes(), cfg.t_max);
    {
        auto f = open_output(out_dir / "trajectory.csv");
        write_trajectory_csv(f, traj, cfg.output_stride);
    }
    {
        auto f = open_output(out_dir / "decay_rate.csv");
        write_decay_rate_csv(f, traj, cfg.output_stride);
    }
    double max_norm = 0.0;
    for (std::size_t s = 0; s < traj.size(); ++s) max_norm = std::max(max_norm, traj.norm(s));
    ordered_json final_pop = ordered_json::array();
    for (std::size_t i = 0; i < traj.n_emitters(); ++i) final_pop.push_back(traj.population(traj.size() - 1, i));
    ordered_json results = {{"steps", traj.size()},
                            {"dt_hbar_per_ev", traj.dt()},
                            {"max_norm", max_norm},
                            {"final_populations", final_pop},
                            {"markov_gamma_ev", 2.0 * kPi * table.interpolate(0, 0, cfg.emitter.omega_0)}};
    if (cfg.n_emitters <= 2) {
        results["bound_states"] = states_json(states);
        if (cfg.n_emitters == 1)
            results["predicted_final_population"] = states.empty() ? 0.0 : states[0].weight_L * states[0].weight_L;
    }
    write_run_json(out_dir, "dynamics", cfg, table, std::move(results));
    return {std::move(table), std::move(traj), std::move(states)};
}

ConcurrenceRun run_concurrence(const ScenarioConfig& cfg, const fs::path& out_dir, unsigned threads) {
    cfg.validate();
    if (cfg.n_emitters != 2) throw UnsupportedError("concurrence needs geometry.n_emitters = 2");
    ensure_dir(out_dir);
    SpectralTable table = build_table(cfg, threads);
    std::vector<BoundState> states = find_bound_states(table, cfg.emitter.omega_0, cfg.root);
    const MemoryKernel kernel = build_kernel(table, cfg.t_max, cfg.dt);
    AmplitudeTrajectory traj = solve_volterra(kernel, cfg.emitter, cfg.initial_amplitudes(), cfg.t_max);
    {
        auto f = open_output(out_dir / "concurrence.csv");
        write_concurrence_csv(f, traj, states, cfg.output_stride);
    }

    ConcurrenceRun run{std::move(table), std::move(traj), std::move(states)};
    const auto& tr = run.trajectory;
    run.late_window_start = 0.5 * cfg.t_max;
    run.late_min = 1.0;
    run.late_max = 0.0;
    double sum = 0.0;
    std::size_t count = 0;
    std::vector<double> times, im_coherence, conc_values;
    for (std::size_t s = 0; s < tr.size(); ++s) {
        const double t = tr.time(s);
        if (t < run.late_window_start) continue;
        const double c = concurrence(reduced_density(tr.a(s, 0), tr.a(s, 1)));
        run.late_min = std::min(run.late_min, c);
        run.late_max = std::max(run.late_max, c);
        run.late_max_deviation = std::max(run.late_max_deviation, std::abs(c - steady_concurrence(run.states, 2, t)));
        sum += c;
        ++count;
        times.push_back(t);
        im_coherence.push_back((tr.a(s, 0) * std::conj(tr.a(s, 1))).imag());
        conc_values.push_back(c);
    }
    run.late_mean = count ? sum / static_cast<double>(count) : 0.0;

    ordered_json results = {{"bound_state_count", run.states.size()},
                            {"bound_states", states_json(run.states)},
                            {"late_window_start", run.late_window_start},
                            {"late_concurrence_min", run.late_min},
                            {"late_concurrence_max", run.late_max},
                            {"late_concurrence_mean", run.late_mean},
                            {"late_max_deviation_from_steady", run.late_max_deviation}};
    if (run.states.size() == 1) {
        results["steady_value"] = steady_concurrence(run.states, 2, 0.0);
    } else if (run.states.size() == 2) {
        const double l1 = residue_amplitude(run.states[0], 2);
        const double l2 = residue_amplitude(run.states[1], 2);
        const double dw = std::abs(run.states[0].varpi_b - run.states[1].varpi_b);
        results["envelope_min"] = 2.0 * std::abs(l1 * l1 - l2 * l2);
        results["envelope_max"] = 2.0 * (l1 * l1 + l2 * l2);
        results["beat_period_predicted"] = 2.0 * kPi / dw;
        results["beat_period_measured"] = oscillation_period(times, im_coherence);
        // C depends on sin^2 of the beat phase, so it repeats twice per beat.
        results["concurrence_period_predicted"] = kPi / dw;
        results["concurrence_period_measured"] = oscillation_period(times, conc_values);
    }
    write_run_json(out_dir, "concurrence", cfg, run.table, std::move(results));
    return run;
}

}  // namespace plasmon
