#include "tchm/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tchm {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, line, "expected a number, got '" + v + "'");
    }
}

std::int64_t parse_int(const std::string& key, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const std::int64_t x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, line, "expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const std::uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, line, "expected an unsigned integer, got '" + v + "'");
    }
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

SystemParams SimConfig::to_params() const {
    SystemParams p;
    p.n_cavities = n_cavities;
    p.emitters_per_cavity = emitters_per_cavity;
    p.omega_c = 0.0;
    p.g = two_pi * g_ghz;
    p.j_hop = j_over_g * p.g;
    p.kappa = two_pi * kappa_ghz;
    p.gamma = two_pi * gamma_ghz;
    p.delta = delta_mode == DeltaMode::absolute_ghz
                  ? two_pi * delta_value
                  : delta_value * p.collective_coupling();
    p.boundary = boundary;
    p.validate();
    return p;
}

SimConfig SimConfig::from_params(const SystemParams& p, std::uint64_t seed) {
    SimConfig c;
    c.n_cavities = p.n_cavities;
    c.emitters_per_cavity = p.emitters_per_cavity;
    c.g_ghz = p.g / two_pi;
    c.j_over_g = p.g > 0.0 ? p.j_hop / p.g : 0.0;
    c.kappa_ghz = p.kappa / two_pi;
    c.gamma_ghz = p.gamma / two_pi;
    c.delta_mode = DeltaMode::absolute_ghz;
    c.delta_value = p.delta / two_pi;
    c.boundary = p.boundary;
    c.seed = seed;
    return c;
}

SimConfig parse_config(std::istream& in) {
    SimConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) throw ConfigError(key, lineno, "missing value");

        if (key == "n_cavities") {
            c.n_cavities = static_cast<int>(parse_int(key, lineno, val));
        } else if (key == "emitters_per_cavity") {
            c.emitters_per_cavity = static_cast<int>(parse_int(key, lineno, val));
        } else if (key == "g_ghz") {
            c.g_ghz = parse_double(key, lineno, val);
        } else if (key == "j_over_g") {
            c.j_over_g = parse_double(key, lineno, val);
        } else if (key == "kappa_ghz") {
            c.kappa_ghz = parse_double(key, lineno, val);
        } else if (key == "gamma_ghz") {
            c.gamma_ghz = parse_double(key, lineno, val);
        } else if (key == "delta_mode") {
            if (val == "absolute_ghz") {
                c.delta_mode = DeltaMode::absolute_ghz;
            } else if (val == "units_of_g_sqrt_m") {
                c.delta_mode = DeltaMode::units_of_g_sqrt_m;
            } else {
                throw ConfigError(key, lineno,
                                  "want absolute_ghz|units_of_g_sqrt_m, got '" + val + "'");
            }
        } else if (key == "delta_value") {
            c.delta_value = parse_double(key, lineno, val);
        } else if (key == "boundary") {
            try {
                c.boundary = boundary_from_string(val);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(key, lineno, e.what());
            }
        } else if (key == "seed") {
            c.seed = parse_u64(key, lineno, val);
        } else {
            throw ConfigError(key, lineno, "unknown key");
        }
    }
    try {
        c.to_params();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("<validation>", lineno, e.what());
    }
    return c;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string format_config(const SimConfig& c) {
    std::ostringstream out;
    out << "n_cavities = " << c.n_cavities << "\n";
    out << "emitters_per_cavity = " << c.emitters_per_cavity << "\n";
    out << "g_ghz = " << fmt17(c.g_ghz) << "\n";
    out << "j_over_g = " << fmt17(c.j_over_g) << "\n";
    out << "kappa_ghz = " << fmt17(c.kappa_ghz) << "\n";
    out << "gamma_ghz = " << fmt17(c.gamma_ghz) << "\n";
    out << "delta_mode = "
        << (c.delta_mode == DeltaMode::absolute_ghz ? "absolute_ghz" : "units_of_g_sqrt_m")
        << "\n";
    out << "delta_value = " << fmt17(c.delta_value) << "\n";
    out << "boundary = " << to_string(c.boundary) << "\n";
    out << "seed = " << c.seed << "\n";
    return out.str();
}

}  // namespace tchm
