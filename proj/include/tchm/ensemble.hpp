#ifndef TCHM_ENSEMBLE_HPP
#define TCHM_ENSEMBLE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tchm/csv.hpp"
#include "tchm/metrics.hpp"
#include "tchm/params.hpp"

namespace tchm {

enum class SweepAxis { delta, j_over_g, n_cavities, emitters_per_cavity, state_index };
enum class Observable { eigenvalues, p_n, p_p, occupancies, mps_lower, mps_upper };

std::string to_string(SweepAxis a);
std::string to_string(Observable o);
SweepAxis sweep_axis_from_string(const std::string& s);
Observable observable_from_string(const std::string& s);

struct SweepSpec {
    SystemParams base;
    SweepAxis axis = SweepAxis::delta;
    std::vector<double> values;    // resolved units (delta in rad/ns)
    int realizations = 100;
    std::uint64_t master_seed = 0;
    std::vector<Observable> observables;
    std::string name = "custom";
};

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  // sample (R-1); zero when R = 1
    int count = 0;
};

struct StateStat {
    double axis_value;
    int state_index;
    Band band;
    Stat re_energy, im_energy;
    Stat p_n_raw, p_n_norm, p_p_raw, p_p_norm;
};

struct NodeStat {
    double axis_value;
    int state_index;
    int node;
    Stat photon, emitter;
};

struct MpsStat {
    double axis_value;
    Band band;
    Stat re_energy, p_n_raw, p_n_norm, p_p_raw, p_p_norm;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<StateStat> states;
    std::vector<NodeStat> nodes;
    std::vector<MpsStat> mps;
};

// R realizations per axis value, seeded via derive_realization_seed and
// merged in realization order, so the result is bit-identical for any
// worker count. jobs = 0 picks the hardware concurrency.
SweepResult run_sweep(const SweepSpec& spec, int jobs = 0);

// Parameter sets reproducing the published sweeps; throws with the list of
// valid names on an unknown name.
SweepSpec figure_preset(const std::string& name);
std::vector<std::string> figure_preset_names();

std::string serialize_spec(const SweepSpec& spec);
SweepSpec parse_sweep_spec(std::istream& in);
SweepSpec parse_sweep_spec_file(const std::string& path);
std::uint64_t spec_hash(const SweepSpec& spec);

// One table per requested observable, keyed by the observable name.
std::map<std::string, Table> result_tables(const SweepResult& result);

}  // namespace tchm

#endif
