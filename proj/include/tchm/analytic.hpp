#ifndef TCHM_ANALYTIC_HPP
#define TCHM_ANALYTIC_HPP

#include <utility>
#include <vector>

namespace tchm {

// One momentum point of the two polariton branches.
struct BandPoint {
    double k;
    double e_minus;
    double e_plus;
    double photon_weight_minus;
    double emitter_weight_minus;
    double photon_weight_plus;
    double emitter_weight_plus;
};

// k_p = pi p / (N+1), p = 1..N (open chain)
std::vector<double> open_momenta(int n_cavities);

// k_p = 2 pi p / N, p = 1..N (ring)
std::vector<double> periodic_momenta(int n_cavities);

// Bare coupled-cavity band, omega_c - 2 J cos k.
double cca_band(double k, double omega_c, double j_hop);

// Lower/upper polariton branches of the resonant chain:
// omega_0 - J cos k -+ sqrt(J^2 cos^2 k + M g^2).
std::pair<double, double> polariton_bands(double k, double omega_0, double j_hop,
                                          double g, int emitters_per_cavity);

struct BranchWeights {
    double photon_minus;
    double emitter_minus;
    double photon_plus;
    double emitter_plus;
};

// Squared components of the normalized branch eigenvectors. Requires a
// nonzero vector, i.e. g > 0 or J cos k != 0.
BranchWeights polariton_eigenvector(double k, double j_hop, double g,
                                    int emitters_per_cavity);

BandPoint band_point(double k, double omega_0, double j_hop, double g,
                     int emitters_per_cavity);

}  // namespace tchm

#endif
