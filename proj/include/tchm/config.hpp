#ifndef TCHM_CONFIG_HPP
#define TCHM_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "tchm/params.hpp"

namespace tchm {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& key, int line, const std::string& what)
        : std::runtime_error("config error at line " + std::to_string(line) +
                             ", key '" + key + "': " + what),
          key(key),
          line(line) {}
    std::string key;
    int line;
};

enum class DeltaMode { absolute_ghz, units_of_g_sqrt_m };

// Flat key-value description of one simulation, with rates quoted the way
// the hardware community quotes them: x means x GHz over 2pi.
struct SimConfig {
    int n_cavities = 1;
    int emitters_per_cavity = 0;
    double g_ghz = 5.0;
    double j_over_g = 0.1;
    double kappa_ghz = 10.0;
    double gamma_ghz = 1.0 / 5.8;
    DeltaMode delta_mode = DeltaMode::absolute_ghz;
    double delta_value = 0.0;
    Boundary boundary = Boundary::open;
    std::uint64_t seed = 0;

    SystemParams to_params() const;
    static SimConfig from_params(const SystemParams& p, std::uint64_t seed);
};

SimConfig parse_config(std::istream& in);
SimConfig parse_config_file(const std::string& path);
std::string format_config(const SimConfig& c);

}  // namespace tchm

#endif
