#include "tchm/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "tchm/params.hpp"

namespace tchm {

std::vector<double> open_momenta(int n_cavities) {
    if (n_cavities < 1) throw std::invalid_argument("open_momenta: N >= 1");
    std::vector<double> k(n_cavities);
    const double pi = two_pi / 2.0;
    for (int p = 1; p <= n_cavities; ++p) k[p - 1] = pi * p / (n_cavities + 1);
    return k;
}

std::vector<double> periodic_momenta(int n_cavities) {
    if (n_cavities < 1) throw std::invalid_argument("periodic_momenta: N >= 1");
    std::vector<double> k(n_cavities);
    for (int p = 1; p <= n_cavities; ++p) k[p - 1] = two_pi * p / n_cavities;
    return k;
}

double cca_band(double k, double omega_c, double j_hop) {
    return omega_c - 2.0 * j_hop * std::cos(k);
}

std::pair<double, double> polariton_bands(double k, double omega_0, double j_hop,
                                          double g, int emitters_per_cavity) {
    if (emitters_per_cavity < 1)
        throw std::invalid_argument("polariton_bands: M >= 1");
    const double x = j_hop * std::cos(k);
    const double s = std::sqrt(x * x + emitters_per_cavity * g * g);
    return {omega_0 - x - s, omega_0 - x + s};
}

BranchWeights polariton_eigenvector(double k, double j_hop, double g,
                                    int emitters_per_cavity) {
    if (emitters_per_cavity < 1)
        throw std::invalid_argument("polariton_eigenvector: M >= 1");
    const double x = j_hop * std::cos(k);
    const double mg2 = emitters_per_cavity * g * g;

    if (mg2 == 0.0) {
        if (std::abs(x) <= 1e-12 * std::abs(j_hop))
            throw std::invalid_argument(
                "polariton_eigenvector: zero vector (need g > 0 or J cos k != 0)");
        // decoupled limit: one branch is the bare photon band, the other the
        // flat emitter line; which is which flips with the sign of cos k
        if (x > 0.0) return BranchWeights{1.0, 0.0, 0.0, 1.0};
        return BranchWeights{0.0, 1.0, 1.0, 0.0};
    }

    const double s = std::sqrt(x * x + mg2);
    // branch vectors (emitter, photon) = (g sqrt(M), x -+ s), up to sign
    const double ph_minus = (x + s) * (x + s);
    const double ph_plus = (x - s) * (x - s);
    BranchWeights w{};
    w.emitter_minus = mg2 / (mg2 + ph_minus);
    w.photon_minus = ph_minus / (mg2 + ph_minus);
    w.emitter_plus = mg2 / (mg2 + ph_plus);
    w.photon_plus = ph_plus / (mg2 + ph_plus);
    return w;
}

BandPoint band_point(double k, double omega_0, double j_hop, double g,
                     int emitters_per_cavity) {
    const auto [em, ep] = polariton_bands(k, omega_0, j_hop, g, emitters_per_cavity);
    const auto w = polariton_eigenvector(k, j_hop, g, emitters_per_cavity);
    return BandPoint{k, em, ep, w.photon_minus, w.emitter_minus,
                     w.photon_plus, w.emitter_plus};
}

}  // namespace tchm
