#include "tchm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tchm {

std::string to_string(Band b) {
    switch (b) {
        case Band::lower: return "lower";
        case Band::subradiant: return "subradiant";
        case Band::upper: return "upper";
    }
    return "?";
}

Participation nodal_participation(const EigenState& state) {
    const int n = static_cast<int>(state.photon_occupancy.size());
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = state.photon_occupancy[i] + state.emitter_occupancy[i];
        sum_sq += w * w;
    }
    const double raw = 1.0 / sum_sq;
    const double norm = n > 1 ? (raw - 1.0) / (n - 1.0) : 0.0;
    return {raw, norm};
}

Participation polaritonic_participation(const EigenState& state) {
    const double ph = state.photon_occupancy.sum();
    const double em = state.emitter_occupancy.sum();
    const double raw = 1.0 / (ph * ph + em * em);
    return {raw, raw - 1.0};
}

std::vector<Band> classify_bands(const std::vector<EigenState>& states,
                                 const SystemParams& params) {
    const int n = params.n_cavities;
    const int m = params.emitters_per_cavity;
    const std::size_t expected = static_cast<std::size_t>(n) * (m + 1);
    if (states.size() != expected)
        throw std::invalid_argument("classify_bands: expected " +
                                    std::to_string(expected) + " states, got " +
                                    std::to_string(states.size()));
    if (m == 0) return std::vector<Band>(states.size(), Band::lower);

    std::vector<Band> bands(states.size(), Band::subradiant);
    for (int i = 0; i < n; ++i) {
        bands[i] = Band::lower;
        bands[states.size() - 1 - i] = Band::upper;
    }
    return bands;
}

std::size_t most_polaritonic_state(const std::vector<EigenState>& states,
                                   const std::vector<Band>& bands, Band which) {
    if (states.size() != bands.size())
        throw std::invalid_argument("most_polaritonic_state: label/state size mismatch");

    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < bands.size(); ++i)
        if (bands[i] == which) members.push_back(i);
    if (members.empty())
        throw std::invalid_argument("most_polaritonic_state: band '" + to_string(which) +
                                    "' is empty");

    std::vector<double> energies;
    energies.reserve(members.size());
    for (std::size_t i : members) energies.push_back(states[i].energy.real());
    std::sort(energies.begin(), energies.end());
    const std::size_t h = energies.size() / 2;
    const double median = energies.size() % 2 == 1
                              ? energies[h]
                              : 0.5 * (energies[h - 1] + energies[h]);

    std::size_t best = members.front();
    double best_pp = -1.0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i : members) {
        const double pp = polaritonic_participation(states[i]).raw;
        const double dist = std::abs(states[i].energy.real() - median);
        if (pp > best_pp || (pp == best_pp && dist < best_dist)) {
            best = i;
            best_pp = pp;
            best_dist = dist;
        }
    }
    return best;
}

ParticipationReport participation_report(const EigenState& state, Band band) {
    const auto pn = nodal_participation(state);
    const auto pp = polaritonic_participation(state);
    return ParticipationReport{pn.raw, pn.normalized, pp.raw, pp.normalized, band};
}

}  // namespace tchm
