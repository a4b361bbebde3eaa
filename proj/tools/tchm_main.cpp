#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tchm/analytic.hpp"
#include "tchm/config.hpp"
#include "tchm/csv.hpp"
#include "tchm/effective.hpp"
#include "tchm/ensemble.hpp"
#include "tchm/liouvillian.hpp"
#include "tchm/metrics.hpp"
#include "tchm/params.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct OutputSink {
    std::string path;    // empty -> stdout
    std::string format;  // csv | json

    void emit(const tchm::Table& t) const {
        const std::string body = format == "json" ? tchm::to_json_records(t)
                                                  : tchm::to_csv(t);
        if (path.empty())
            std::cout << body;
        else
            tchm::write_file_atomic(path, body);
    }
};

void echo_params(const tchm::SystemParams& p, std::uint64_t seed) {
    std::cerr << "# resolved parameters\n"
              << tchm::format_config(tchm::SimConfig::from_params(p, seed));
}

tchm::SimConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
    tchm::SimConfig cfg = tchm::parse_config_file(path);
    if (seed) cfg.seed = *seed;
    return cfg;
}

int run_bands(int n, int m, const std::string& boundary, double omega0, double j,
              double g, const OutputSink& sink) {
    const auto momenta = boundary == "periodic" ? tchm::periodic_momenta(n)
                                                : tchm::open_momenta(n);
    std::cerr << "# bands: n=" << n << " m=" << m << " boundary=" << boundary
              << " omega0=" << omega0 << " j=" << j << " g=" << g << "\n";
    tchm::Table t;
    t.columns = {"k", "e_minus", "e_plus", "photon_weight_minus", "photon_weight_plus"};
    for (double k : momenta) {
        const auto bp = tchm::band_point(k, omega0, j, g, m);
        t.add_row({bp.k, bp.e_minus, bp.e_plus, bp.photon_weight_minus,
                   bp.photon_weight_plus});
    }
    sink.emit(t);
    return 0;
}

int run_eigs(const tchm::SimConfig& cfg, const OutputSink& sink) {
    const tchm::SystemParams p = cfg.to_params();
    echo_params(p, cfg.seed);
    const auto realization = tchm::sample_disorder(p, cfg.seed);
    const auto states = tchm::eigensolve(tchm::build_h_eff(realization));

    tchm::Table t;
    t.columns = {"state_index", "re_energy", "im_energy"};
    for (int n = 0; n < p.n_cavities; ++n) t.columns.push_back("ph_" + std::to_string(n));
    for (int n = 0; n < p.n_cavities; ++n) t.columns.push_back("em_" + std::to_string(n));
    for (std::size_t i = 0; i < states.size(); ++i) {
        std::vector<tchm::Cell> row{static_cast<long long>(i),
                                    states[i].energy.real(), states[i].energy.imag()};
        for (int n = 0; n < p.n_cavities; ++n) row.push_back(states[i].photon_occupancy[n]);
        for (int n = 0; n < p.n_cavities; ++n) row.push_back(states[i].emitter_occupancy[n]);
        t.add_row(std::move(row));
    }
    sink.emit(t);
    return 0;
}

int run_metrics(const tchm::SimConfig& cfg, const OutputSink& sink) {
    const tchm::SystemParams p = cfg.to_params();
    echo_params(p, cfg.seed);
    const auto realization = tchm::sample_disorder(p, cfg.seed);
    const auto states = tchm::eigensolve(tchm::build_h_eff(realization));
    const auto bands = tchm::classify_bands(states, p);

    tchm::Table t;
    t.columns = {"state_index", "re_energy", "im_energy", "band",
                 "p_n_raw", "p_n_norm", "p_p_raw", "p_p_norm"};
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto rep = tchm::participation_report(states[i], bands[i]);
        t.add_row({static_cast<long long>(i), states[i].energy.real(),
                   states[i].energy.imag(), tchm::to_string(rep.band), rep.p_n_raw,
                   rep.p_n_norm, rep.p_p_raw, rep.p_p_norm});
    }
    sink.emit(t);
    return 0;
}

int run_qme(const tchm::SimConfig& cfg, int pump_cavity, double pump_rate_ghz,
            int fock_cutoff, bool sum_pumps, double omega_min, double omega_max,
            int omega_points, double dt, double tau_max, bool normalize,
            const OutputSink& sink) {
    const tchm::SystemParams p = cfg.to_params();
    echo_params(p, cfg.seed);
    std::cerr << "# pump_cavity=" << pump_cavity << " pump_rate_ghz=" << pump_rate_ghz
              << " fock_cutoff=" << fock_cutoff << " sum_pumps=" << sum_pumps << "\n";
    const auto realization = tchm::sample_disorder(p, cfg.seed);

    tchm::EmissionOptions opts;
    opts.pump_rate = tchm::two_pi * pump_rate_ghz;
    opts.fock_cutoff = fock_cutoff;
    opts.sum_pumps = sum_pumps;
    opts.omega_min = omega_min;
    opts.omega_max = omega_max;
    opts.omega_points = omega_points;
    opts.correlation.dt = dt;
    opts.correlation.tau_max = tau_max;
    opts.progress = [](const std::string& msg) { std::cerr << "# " << msg << "\n"; };

    const auto traces = tchm::emission_spectra(realization, pump_cavity, opts);
    for (const auto& tr : traces)
        for (const auto& w : tr.warnings) std::cerr << "# warning: " << w << "\n";

    tchm::Table t;
    t.columns = {"omega"};
    for (const auto& tr : traces) t.columns.push_back(tr.probe.label());
    const auto& omega = traces.front().omega;
    std::vector<double> scale(traces.size(), 1.0);
    if (normalize)
        for (std::size_t c = 0; c < traces.size(); ++c) {
            const double m = traces[c].intensity.maxCoeff();
            if (m > 0.0) scale[c] = 1.0 / m;
        }
    for (long long i = 0; i < omega.size(); ++i) {
        std::vector<tchm::Cell> row{omega[i]};
        for (std::size_t c = 0; c < traces.size(); ++c)
            row.push_back(traces[c].intensity[i] * scale[c]);
        t.add_row(std::move(row));
    }
    sink.emit(t);
    return 0;
}

int run_sweep_cmd(const std::string& preset, const std::string& spec_file,
                  std::optional<std::uint64_t> seed, std::optional<int> realizations,
                  int jobs, const std::string& out_dir, const std::string& format) {
    tchm::SweepSpec spec = !preset.empty() ? tchm::figure_preset(preset)
                                           : tchm::parse_sweep_spec_file(spec_file);
    if (seed) spec.master_seed = *seed;
    if (realizations) spec.realizations = *realizations;

    std::cerr << "# sweep spec\n" << tchm::serialize_spec(spec);
    const auto result = tchm::run_sweep(spec, jobs);
    const auto tables = tchm::result_tables(result);

    nlohmann::json manifest;
    manifest["tool"] = "tchm";
    manifest["version"] = kVersion;
    nlohmann::json spec_json;
    spec_json["name"] = spec.name;
    spec_json["axis"] = tchm::to_string(spec.axis);
    spec_json["values"] = spec.values;
    spec_json["realizations"] = spec.realizations;
    spec_json["master_seed"] = spec.master_seed;
    {
        std::vector<std::string> obs;
        for (auto o : spec.observables) obs.push_back(tchm::to_string(o));
        spec_json["observables"] = obs;
    }
    spec_json["base"] = {{"n_cavities", spec.base.n_cavities},
                         {"emitters_per_cavity", spec.base.emitters_per_cavity},
                         {"omega_c_rad_ns", spec.base.omega_c},
                         {"g_rad_ns", spec.base.g},
                         {"j_hop_rad_ns", spec.base.j_hop},
                         {"kappa_rad_ns", spec.base.kappa},
                         {"gamma_rad_ns", spec.base.gamma},
                         {"delta_rad_ns", spec.base.delta},
                         {"boundary", tchm::to_string(spec.base.boundary)}};
    manifest["spec"] = spec_json;
    char hash_buf[32];
    std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                  static_cast<unsigned long long>(tchm::spec_hash(spec)));
    manifest["spec_hash"] = hash_buf;

    const std::string ext = format == "json" ? ".json" : ".csv";
    std::vector<std::string> written;
    for (const auto& [name, table] : tables) {
        const std::string path = (std::filesystem::path(out_dir) / (name + ext)).string();
        const std::string body =
            format == "json" ? tchm::to_json_records(table) : tchm::to_csv(table);
        tchm::write_file_atomic(path, body);
        written.push_back(path);
        std::cerr << "# wrote " << path << "\n";
    }
    manifest["outputs"] = written;
    const std::string mpath = (std::filesystem::path(out_dir) / "manifest.json").string();
    tchm::write_file_atomic(mpath, manifest.dump(2) + "\n");
    std::cerr << "# wrote " << mpath << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tavis-Cummings-Hubbard coupled-cavity array simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string config_path, output_path, format = "csv";
    std::optional<std::uint64_t> seed;

    // bands
    auto* bands = app.add_subcommand("bands", "analytic polariton band structure");
    int b_n = 99, b_m = 1;
    std::string b_boundary = "open";
    double b_omega0 = 4.0, b_j = 1.0, b_g = 0.2;
    bands->add_option("--n", b_n, "number of cavities")->check(CLI::PositiveNumber);
    bands->add_option("--m", b_m, "emitters per cavity")->check(CLI::PositiveNumber);
    bands->add_option("--boundary", b_boundary)->check(CLI::IsMember({"open", "periodic"}));
    bands->add_option("--omega0", b_omega0, "resonant frequency");
    bands->add_option("--j", b_j, "hopping rate");
    bands->add_option("--g", b_g, "emitter-cavity coupling");

    // eigs / metrics
    auto* eigs = app.add_subcommand("eigs", "effective-Hamiltonian eigenstates");
    auto* metrics = app.add_subcommand("metrics", "participation-ratio metrics");

    // qme-spectrum
    auto* qme = app.add_subcommand("qme-spectrum", "emission spectra from the master equation");
    int q_pump_cavity = 0, q_cutoff = 2, q_points = 2001;
    double q_pump_ghz = 0.01, q_omega_min = 0.0, q_omega_max = 0.0;
    double q_dt = 0.0, q_tau_max = 0.0;
    bool q_sum = false, q_norm = false;
    qme->add_option("--pump-cavity", q_pump_cavity, "cavity carrying the incoherent pump");
    qme->add_option("--pump-rate", q_pump_ghz, "pump rate, GHz over 2pi (default 0.01)");
    qme->add_option("--fock-cutoff", q_cutoff, "max photons per cavity")->check(CLI::PositiveNumber);
    qme->add_flag("--sum-pumps", q_sum, "sum traces over a pump on every cavity");
    qme->add_option("--omega-min", q_omega_min, "grid start, rad/ns");
    qme->add_option("--omega-max", q_omega_max, "grid end, rad/ns");
    qme->add_option("--omega-points", q_points)->check(CLI::PositiveNumber);
    qme->add_option("--dt", q_dt, "integrator step in ns (0 = auto)");
    qme->add_option("--tau-max", q_tau_max, "correlation horizon in ns (0 = auto)");
    qme->add_flag("--normalize", q_norm, "scale each trace to unit peak");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "disorder ensembles and parameter sweeps");
    std::string s_preset, s_spec, s_outdir;
    std::optional<int> s_realizations;
    int s_jobs = 0;
    if (const char* env = std::getenv("TCHM_JOBS")) s_jobs = std::atoi(env);
    sweep->add_option("--preset", s_preset, "figure preset name");
    sweep->add_option("--spec", s_spec, "sweep spec file");
    sweep->add_option("--realizations", s_realizations, "override realization count");
    sweep->add_option("--jobs", s_jobs, "worker threads (default $TCHM_JOBS or all cores)");
    sweep->add_option("--output", s_outdir, "output directory")->required();

    for (auto* sub : {bands, eigs, metrics, qme}) {
        sub->add_option("--output", output_path, "output file (default stdout)");
    }
    for (auto* sub : {bands, eigs, metrics, qme, sweep}) {
        sub->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
        if (sub != bands) sub->add_option("--seed", seed, "disorder seed override");
        if (sub == eigs || sub == metrics || sub == qme)
            sub->add_option("--config", config_path, "system config file")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors collapse to exit 1
    }

    const OutputSink sink{output_path, format};
    try {
        if (bands->parsed())
            return run_bands(b_n, b_m, b_boundary, b_omega0, b_j, b_g, sink);
        if (eigs->parsed()) return run_eigs(load_config(config_path, seed), sink);
        if (metrics->parsed()) return run_metrics(load_config(config_path, seed), sink);
        if (qme->parsed())
            return run_qme(load_config(config_path, seed), q_pump_cavity, q_pump_ghz,
                           q_cutoff, q_sum, q_omega_min, q_omega_max, q_points, q_dt,
                           q_tau_max, q_norm, sink);
        if (sweep->parsed()) {
            if (s_preset.empty() == s_spec.empty()) {
                std::cerr << "error: pass exactly one of --preset or --spec\n";
                return 1;
            }
            return run_sweep_cmd(s_preset, s_spec, seed, s_realizations, s_jobs,
                                 s_outdir, format);
        }
    } catch (const tchm::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const tchm::EigensolveError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const tchm::SteadyStateError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
