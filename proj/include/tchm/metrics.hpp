#ifndef TCHM_METRICS_HPP
#define TCHM_METRICS_HPP

#include <string>
#include <vector>

#include "tchm/effective.hpp"

namespace tchm {

enum class Band { lower, subradiant, upper };

std::string to_string(Band b);

struct ParticipationReport {
    double p_n_raw;   // in [1, N]
    double p_n_norm;  // in [0, 1]
    double p_p_raw;   // in [1, 2]
    double p_p_norm;  // in [0, 1]
    Band band;
};

struct Participation {
    double raw;
    double normalized;
};

// Nodal participation ratio: 1 / sum_n (photon_n + emitter_n)^2,
// normalized as (raw - 1)/(N - 1); defined as 0 for N = 1.
Participation nodal_participation(const EigenState& state);

// Polaritonicity: 1 / ((total photon)^2 + (total emitter)^2),
// normalized as raw - 1.
Participation polaritonic_participation(const EigenState& state);

// Sorted-position labels: first N lower, last N upper, middle N(M-1)
// subradiant. With no emitters the whole single band is labeled lower.
std::vector<Band> classify_bands(const std::vector<EigenState>& states,
                                 const SystemParams& params);

// Index of the band member maximizing raw polaritonicity; ties go to the
// state nearest the band's median energy, then to the lowest index.
std::size_t most_polaritonic_state(const std::vector<EigenState>& states,
                                   const std::vector<Band>& bands, Band which);

ParticipationReport participation_report(const EigenState& state, Band band);

}  // namespace tchm

#endif
