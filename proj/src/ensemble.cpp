#include "tchm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "tchm/rng.hpp"

namespace tchm {

namespace {

struct RealizationMetrics {
    std::vector<std::complex<double>> energy;
    std::vector<double> pn_raw, pn_norm, pp_raw, pp_norm;
    std::vector<Band> bands;
    Eigen::MatrixXd photon;   // state x node
    Eigen::MatrixXd emitter;  // state x node
    int mps_lower = -1;
    int mps_upper = -1;
};

RealizationMetrics evaluate_realization(const SystemParams& params,
                                        std::uint64_t seed, bool want_occupancies) {
    const Realization r = sample_disorder(params, seed);
    const auto states = eigensolve(build_h_eff(r));
    const auto bands = classify_bands(states, params);

    RealizationMetrics out;
    const int dim = static_cast<int>(states.size());
    out.energy.resize(dim);
    out.pn_raw.resize(dim);
    out.pn_norm.resize(dim);
    out.pp_raw.resize(dim);
    out.pp_norm.resize(dim);
    out.bands = bands;
    if (want_occupancies) {
        out.photon.resize(dim, params.n_cavities);
        out.emitter.resize(dim, params.n_cavities);
    }
    for (int i = 0; i < dim; ++i) {
        out.energy[i] = states[i].energy;
        const auto pn = nodal_participation(states[i]);
        const auto pp = polaritonic_participation(states[i]);
        out.pn_raw[i] = pn.raw;
        out.pn_norm[i] = pn.normalized;
        out.pp_raw[i] = pp.raw;
        out.pp_norm[i] = pp.normalized;
        if (want_occupancies) {
            out.photon.row(i) = states[i].photon_occupancy.transpose();
            out.emitter.row(i) = states[i].emitter_occupancy.transpose();
        }
    }
    if (params.emitters_per_cavity >= 1) {
        out.mps_lower = static_cast<int>(most_polaritonic_state(states, bands, Band::lower));
        out.mps_upper = static_cast<int>(most_polaritonic_state(states, bands, Band::upper));
    } else {
        out.mps_lower = static_cast<int>(most_polaritonic_state(states, bands, Band::lower));
    }
    return out;
}

// Welford update; exact zero spread for identical inputs
class Accumulator {
  public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / n_;
        m2_ += d * (x - mean_);
    }
    Stat stat() const {
        Stat s;
        s.count = n_;
        if (n_ == 0) return s;
        s.mean = mean_;
        if (n_ > 1) s.stddev = m2_ > 0.0 ? std::sqrt(m2_ / (n_ - 1)) : 0.0;
        return s;
    }

  private:
    int n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

SystemParams params_for(const SweepSpec& spec, double value) {
    SystemParams p = spec.base;
    switch (spec.axis) {
        case SweepAxis::delta:
            p.delta = value;
            break;
        case SweepAxis::j_over_g:
            p.j_hop = value * p.g;
            break;
        case SweepAxis::n_cavities:
            p.n_cavities = static_cast<int>(std::llround(value));
            break;
        case SweepAxis::emitters_per_cavity:
            p.emitters_per_cavity = static_cast<int>(std::llround(value));
            break;
        case SweepAxis::state_index:
            break;
    }
    p.validate();
    return p;
}

bool wants(const SweepSpec& spec, Observable o) {
    return std::find(spec.observables.begin(), spec.observables.end(), o) !=
           spec.observables.end();
}

// all realizations of one parameter point, computed in parallel but merged
// by realization index
std::vector<RealizationMetrics> realize_group(const SystemParams& params,
                                              const SweepSpec& spec,
                                              std::size_t value_index, int jobs,
                                              bool want_occupancies) {
    const int r_total = spec.realizations;
    std::vector<RealizationMetrics> results(r_total);
    std::vector<std::string> errors(r_total);

    auto work = [&](int begin, int step) {
        for (int r = begin; r < r_total; r += step) {
            const std::uint64_t seed = derive_realization_seed(
                spec.master_seed, value_index * static_cast<std::uint64_t>(r_total) + r);
            try {
                results[r] = evaluate_realization(params, seed, want_occupancies);
            } catch (const std::exception& e) {
                errors[r] = e.what();
            }
        }
    };

    const int workers = std::max(1, std::min(jobs, r_total));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
        for (auto& t : pool) t.join();
    }
    for (int r = 0; r < r_total; ++r)
        if (!errors[r].empty())
            throw std::runtime_error("realization " + std::to_string(r) +
                                     " failed: " + errors[r]);
    return results;
}

void reduce_group(const SweepSpec& spec, double axis_value,
                  const SystemParams& params,
                  const std::vector<RealizationMetrics>& group, SweepResult& out) {
    const int dim = static_cast<int>(group.front().energy.size());
    const bool per_state = wants(spec, Observable::eigenvalues) ||
                           wants(spec, Observable::p_n) || wants(spec, Observable::p_p);
    const bool want_occ = wants(spec, Observable::occupancies);

    std::vector<int> state_list;
    if (spec.axis == SweepAxis::state_index) {
        state_list.push_back(static_cast<int>(std::llround(axis_value)));
    } else {
        for (int i = 0; i < dim; ++i) state_list.push_back(i);
    }
    for (int i : state_list)
        if (i < 0 || i >= dim)
            throw std::invalid_argument("state index " + std::to_string(i) +
                                        " outside 0.." + std::to_string(dim - 1));

    if (per_state) {
        for (int i : state_list) {
            Accumulator re, im, pnr, pnn, ppr, ppn;
            for (const auto& g : group) {
                re.add(g.energy[i].real());
                im.add(g.energy[i].imag());
                pnr.add(g.pn_raw[i]);
                pnn.add(g.pn_norm[i]);
                ppr.add(g.pp_raw[i]);
                ppn.add(g.pp_norm[i]);
            }
            StateStat s;
            s.axis_value = axis_value;
            s.state_index = i;
            s.band = group.front().bands[i];
            s.re_energy = re.stat();
            s.im_energy = im.stat();
            s.p_n_raw = pnr.stat();
            s.p_n_norm = pnn.stat();
            s.p_p_raw = ppr.stat();
            s.p_p_norm = ppn.stat();
            out.states.push_back(s);
        }
    }

    if (want_occ) {
        for (int i : state_list) {
            for (int node = 0; node < params.n_cavities; ++node) {
                Accumulator ph, em;
                for (const auto& g : group) {
                    ph.add(g.photon(i, node));
                    em.add(g.emitter(i, node));
                }
                out.nodes.push_back(NodeStat{axis_value, i, node, ph.stat(), em.stat()});
            }
        }
    }

    for (Observable o : {Observable::mps_lower, Observable::mps_upper}) {
        if (!wants(spec, o)) continue;
        Accumulator re, pnr, pnn, ppr, ppn;
        for (const auto& g : group) {
            const int idx = o == Observable::mps_lower ? g.mps_lower : g.mps_upper;
            if (idx < 0)
                throw std::invalid_argument("MPS observable requested but band is empty");
            re.add(g.energy[idx].real());
            pnr.add(g.pn_raw[idx]);
            pnn.add(g.pn_norm[idx]);
            ppr.add(g.pp_raw[idx]);
            ppn.add(g.pp_norm[idx]);
        }
        MpsStat s;
        s.axis_value = axis_value;
        s.band = o == Observable::mps_lower ? Band::lower : Band::upper;
        s.re_energy = re.stat();
        s.p_n_raw = pnr.stat();
        s.p_n_norm = pnn.stat();
        s.p_p_raw = ppr.stat();
        s.p_p_norm = ppn.stat();
        out.mps.push_back(s);
    }
}

}  // namespace

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::delta: return "delta";
        case SweepAxis::j_over_g: return "j_over_g";
        case SweepAxis::n_cavities: return "n_cavities";
        case SweepAxis::emitters_per_cavity: return "emitters_per_cavity";
        case SweepAxis::state_index: return "state_index";
    }
    return "?";
}

std::string to_string(Observable o) {
    switch (o) {
        case Observable::eigenvalues: return "eigenvalues";
        case Observable::p_n: return "p_n";
        case Observable::p_p: return "p_p";
        case Observable::occupancies: return "occupancies";
        case Observable::mps_lower: return "mps_lower";
        case Observable::mps_upper: return "mps_upper";
    }
    return "?";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
    for (SweepAxis a : {SweepAxis::delta, SweepAxis::j_over_g, SweepAxis::n_cavities,
                        SweepAxis::emitters_per_cavity, SweepAxis::state_index})
        if (to_string(a) == s) return a;
    throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

Observable observable_from_string(const std::string& s) {
    for (Observable o : {Observable::eigenvalues, Observable::p_n, Observable::p_p,
                         Observable::occupancies, Observable::mps_lower,
                         Observable::mps_upper})
        if (to_string(o) == s) return o;
    throw std::invalid_argument("unknown observable '" + s + "'");
}

SweepResult run_sweep(const SweepSpec& spec, int jobs) {
    if (spec.values.empty()) throw std::invalid_argument("sweep needs a non-empty value list");
    if (spec.realizations < 1) throw std::invalid_argument("sweep needs realizations >= 1");
    if (spec.observables.empty())
        throw std::invalid_argument("sweep needs at least one observable");
    if (jobs <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        jobs = hc > 0 ? static_cast<int>(hc) : 1;
    }
    const bool want_occ = wants(spec, Observable::occupancies);

    SweepResult out;
    out.spec = spec;
    if (spec.axis == SweepAxis::state_index) {
        // one realization group shared by every listed state
        const SystemParams params = params_for(spec, 0.0);
        const auto group = realize_group(params, spec, 0, jobs, want_occ);
        for (double v : spec.values) reduce_group(spec, v, params, group, out);
        return out;
    }
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
        const SystemParams params = params_for(spec, spec.values[vi]);
        const auto group = realize_group(params, spec, vi, jobs, want_occ);
        reduce_group(spec, spec.values[vi], params, group, out);
    }
    return out;
}

std::vector<std::string> figure_preset_names() {
    return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "figA1", "figA4", "figA5"};
}

SweepSpec figure_preset(const std::string& name) {
    SystemParams paper;  // defaults carry g, kappa, gamma
    paper.n_cavities = 5;
    paper.emitters_per_cavity = 3;
    paper.j_hop = 0.1 * paper.g;

    auto delta_grid = [](const SystemParams& p, int steps) {
        std::vector<double> v;
        for (int i = 0; i <= steps; ++i)
            v.push_back(p.collective_coupling() * i / steps);
        return v;
    };

    SweepSpec s;
    s.base = paper;
    s.name = name;
    if (name == "fig3") {
        s.axis = SweepAxis::delta;
        s.values = delta_grid(paper, 8);
        s.observables = {Observable::eigenvalues, Observable::p_n, Observable::p_p};
    } else if (name == "fig4") {
        s.axis = SweepAxis::j_over_g;
        s.values = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
        s.base.delta = 0.0;
        s.observables = {Observable::p_n, Observable::p_p};
    } else if (name == "fig5") {
        s.axis = SweepAxis::delta;
        s.values = delta_grid(paper, 8);
        s.observables = {Observable::mps_lower};
    } else if (name == "fig6") {
        s.axis = SweepAxis::n_cavities;
        for (int n = 3; n <= 14; ++n) s.values.push_back(n);
        s.base.delta = 0.5 * paper.collective_coupling();
        s.observables = {Observable::mps_lower};
    } else if (name == "fig7") {
        s.axis = SweepAxis::emitters_per_cavity;
        for (int m = 3; m <= 10; ++m) s.values.push_back(m);
        s.base.delta = paper.collective_coupling();  // fixed at M_min = 3
        s.observables = {Observable::mps_lower};
    } else if (name == "fig8") {
        s.axis = SweepAxis::state_index;
        s.base.n_cavities = 65;
        s.base.delta = 0.5 * s.base.collective_coupling();
        for (int i = 0; i < 65; ++i) s.values.push_back(i);  // lower band
        s.observables = {Observable::p_n, Observable::p_p};
    } else if (name == "figA1") {
        s.axis = SweepAxis::delta;
        s.values = {0.0};
        s.realizations = 1;
        s.base.n_cavities = 99;
        s.base.emitters_per_cavity = 1;
        s.base.omega_c = 4.0;
        s.base.j_hop = 1.0;
        s.base.g = 0.2;
        s.base.kappa = 0.0;
        s.base.gamma = 0.0;
        s.observables = {Observable::eigenvalues};
    } else if (name == "figA4" || name == "figA5") {
        s.axis = SweepAxis::delta;
        s.base.n_cavities = 2;
        s.base.emitters_per_cavity = 2;
        const double gm = s.base.collective_coupling();
        s.values = {1e-3 * s.base.g, 0.25 * gm, gm};
        s.realizations = 1;
        s.observables = name == "figA4"
                            ? std::vector<Observable>{Observable::occupancies}
                            : std::vector<Observable>{Observable::p_n, Observable::p_p};
    } else {
        std::string valid;
        for (const auto& n : figure_preset_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown preset '" + name + "' (valid: " + valid + ")");
    }
    return s;
}

std::string serialize_spec(const SweepSpec& spec) {
    auto f = [](double x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "name = " << spec.name << "\n";
    out << "axis = " << to_string(spec.axis) << "\n";
    out << "values =";
    for (std::size_t i = 0; i < spec.values.size(); ++i)
        out << (i ? "," : " ") << f(spec.values[i]);
    out << "\n";
    out << "realizations = " << spec.realizations << "\n";
    out << "seed = " << spec.master_seed << "\n";
    out << "observables =";
    for (std::size_t i = 0; i < spec.observables.size(); ++i)
        out << (i ? "," : " ") << to_string(spec.observables[i]);
    out << "\n";
    const SystemParams& p = spec.base;
    out << "n_cavities = " << p.n_cavities << "\n";
    out << "emitters_per_cavity = " << p.emitters_per_cavity << "\n";
    out << "omega_c_rad_ns = " << f(p.omega_c) << "\n";
    out << "g_rad_ns = " << f(p.g) << "\n";
    out << "j_hop_rad_ns = " << f(p.j_hop) << "\n";
    out << "kappa_rad_ns = " << f(p.kappa) << "\n";
    out << "gamma_rad_ns = " << f(p.gamma) << "\n";
    out << "delta_rad_ns = " << f(p.delta) << "\n";
    out << "boundary = " << to_string(p.boundary) << "\n";
    return out.str();
}

std::uint64_t spec_hash(const SweepSpec& spec) {
    const std::string s = serialize_spec(spec);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

SweepSpec parse_sweep_spec(std::istream& in) {
    SweepSpec spec;
    spec.observables.clear();
    std::string line;
    int lineno = 0;
    bool have_values = false, have_axis = false;
    auto split_list = [](const std::string& v) {
        std::vector<std::string> parts;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto a = item.find_first_not_of(" \t");
            const auto b = item.find_last_not_of(" \t");
            if (a != std::string::npos) parts.push_back(item.substr(a, b - a + 1));
        }
        return parts;
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos)
            throw std::invalid_argument("sweep spec line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "name") {
                spec.name = val;
            } else if (key == "axis") {
                spec.axis = sweep_axis_from_string(val);
                have_axis = true;
            } else if (key == "values") {
                for (const auto& v : split_list(val)) spec.values.push_back(std::stod(v));
                have_values = true;
            } else if (key == "realizations") {
                spec.realizations = std::stoi(val);
            } else if (key == "seed") {
                spec.master_seed = std::stoull(val);
            } else if (key == "observables") {
                for (const auto& v : split_list(val))
                    spec.observables.push_back(observable_from_string(v));
            } else if (key == "n_cavities") {
                spec.base.n_cavities = std::stoi(val);
            } else if (key == "emitters_per_cavity") {
                spec.base.emitters_per_cavity = std::stoi(val);
            } else if (key == "omega_c_rad_ns") {
                spec.base.omega_c = std::stod(val);
            } else if (key == "g_ghz") {
                spec.base.g = two_pi * std::stod(val);
            } else if (key == "g_rad_ns") {
                spec.base.g = std::stod(val);
            } else if (key == "j_over_g") {
                spec.base.j_hop = std::stod(val) * spec.base.g;
            } else if (key == "j_hop_rad_ns") {
                spec.base.j_hop = std::stod(val);
            } else if (key == "kappa_ghz") {
                spec.base.kappa = two_pi * std::stod(val);
            } else if (key == "kappa_rad_ns") {
                spec.base.kappa = std::stod(val);
            } else if (key == "gamma_ghz") {
                spec.base.gamma = two_pi * std::stod(val);
            } else if (key == "gamma_rad_ns") {
                spec.base.gamma = std::stod(val);
            } else if (key == "delta_ghz") {
                spec.base.delta = two_pi * std::stod(val);
            } else if (key == "delta_rad_ns") {
                spec.base.delta = std::stod(val);
            } else if (key == "delta_units_of_g_sqrt_m") {
                spec.base.delta = std::stod(val) * spec.base.collective_coupling();
            } else if (key == "boundary") {
                spec.base.boundary = boundary_from_string(val);
            } else {
                throw std::invalid_argument("unknown key");
            }
        } catch (const std::exception& e) {
            throw std::invalid_argument("sweep spec line " + std::to_string(lineno) +
                                        ", key '" + key + "': " + e.what());
        }
    }
    if (!have_axis) throw std::invalid_argument("sweep spec: missing 'axis'");
    if (!have_values) throw std::invalid_argument("sweep spec: missing 'values'");
    if (spec.observables.empty())
        spec.observables = {Observable::eigenvalues, Observable::p_n, Observable::p_p};
    spec.base.validate();
    return spec;
}

SweepSpec parse_sweep_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open sweep spec '" + path + "'");
    return parse_sweep_spec(in);
}

std::map<std::string, Table> result_tables(const SweepResult& result) {
    const std::string axis = to_string(result.spec.axis);
    std::map<std::string, Table> tables;

    auto state_table = [&](const std::string& what) {
        Table t;
        t.columns = {axis, "state_index", "band"};
        if (what == "eigenvalues") {
            for (const char* c : {"re_energy_mean", "re_energy_std", "im_energy_mean",
                                  "im_energy_std"})
                t.columns.push_back(c);
        } else {
            t.columns.push_back(what + "_raw_mean");
            t.columns.push_back(what + "_raw_std");
            t.columns.push_back(what + "_norm_mean");
            t.columns.push_back(what + "_norm_std");
        }
        t.columns.push_back("realizations");
        for (const auto& s : result.states) {
            std::vector<Cell> row{s.axis_value, static_cast<long long>(s.state_index),
                                  to_string(s.band)};
            if (what == "eigenvalues") {
                row.insert(row.end(), {s.re_energy.mean, s.re_energy.stddev,
                                       s.im_energy.mean, s.im_energy.stddev});
            } else if (what == "p_n") {
                row.insert(row.end(), {s.p_n_raw.mean, s.p_n_raw.stddev,
                                       s.p_n_norm.mean, s.p_n_norm.stddev});
            } else {
                row.insert(row.end(), {s.p_p_raw.mean, s.p_p_raw.stddev,
                                       s.p_p_norm.mean, s.p_p_norm.stddev});
            }
            row.push_back(static_cast<long long>(s.re_energy.count));
            t.add_row(std::move(row));
        }
        return t;
    };

    for (Observable o : result.spec.observables) {
        const std::string name = to_string(o);
        if (o == Observable::eigenvalues || o == Observable::p_n || o == Observable::p_p) {
            tables[name] = state_table(name);
        } else if (o == Observable::occupancies) {
            Table t;
            t.columns = {axis, "state_index", "node", "photon_mean", "photon_std",
                         "emitter_mean", "emitter_std", "realizations"};
            for (const auto& n : result.nodes)
                t.add_row({n.axis_value, static_cast<long long>(n.state_index),
                           static_cast<long long>(n.node), n.photon.mean,
                           n.photon.stddev, n.emitter.mean, n.emitter.stddev,
                           static_cast<long long>(n.photon.count)});
            tables[name] = t;
        } else {
            const Band band = o == Observable::mps_lower ? Band::lower : Band::upper;
            Table t;
            t.columns = {axis,
                         "re_energy_mean",
                         "re_energy_std",
                         "p_n_raw_mean",
                         "p_n_raw_std",
                         "p_n_norm_mean",
                         "p_n_norm_std",
                         "p_p_raw_mean",
                         "p_p_raw_std",
                         "p_p_norm_mean",
                         "p_p_norm_std",
                         "realizations"};
            for (const auto& m : result.mps) {
                if (m.band != band) continue;
                t.add_row({m.axis_value, m.re_energy.mean, m.re_energy.stddev,
                           m.p_n_raw.mean, m.p_n_raw.stddev, m.p_n_norm.mean,
                           m.p_n_norm.stddev, m.p_p_raw.mean, m.p_p_raw.stddev,
                           m.p_p_norm.mean, m.p_p_norm.stddev,
                           static_cast<long long>(m.re_energy.count)});
            }
            tables[name] = t;
        }
    }
    return tables;
}

}  // namespace tchm
