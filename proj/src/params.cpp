#include "tchm/params.hpp"

#include <cmath>

#include "tchm/rng.hpp"

namespace tchm {

std::string to_string(Boundary b) {
    return b == Boundary::open ? "open" : "periodic";
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw std::invalid_argument("unknown boundary '" + s + "' (want open|periodic)");
}

double SystemParams::collective_coupling() const {
    return g * std::sqrt(static_cast<double>(emitters_per_cavity));
}

void SystemParams::validate() const {
    if (n_cavities < 1) throw std::invalid_argument("n_cavities must be >= 1");
    if (emitters_per_cavity < 0)
        throw std::invalid_argument("emitters_per_cavity must be >= 0");
    if (g < 0.0) throw std::invalid_argument("g must be >= 0");
    if (kappa < 0.0) throw std::invalid_argument("kappa must be >= 0");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
    if (!std::isfinite(omega_c) || !std::isfinite(j_hop))
        throw std::invalid_argument("omega_c and j_hop must be finite");
}

SingleExcitationBasis::SingleExcitationBasis(int n_cavities, int emitters_per_cavity)
    : n_(n_cavities), m_(emitters_per_cavity) {
    if (n_ < 1 || m_ < 0)
        throw std::invalid_argument("basis needs n_cavities >= 1, emitters_per_cavity >= 0");
}

int SingleExcitationBasis::index_of_cavity(int n) const {
    if (n < 0 || n >= n_) throw std::out_of_range("cavity index out of range");
    return n;
}

int SingleExcitationBasis::index_of_emitter(int n, int m) const {
    if (n < 0 || n >= n_ || m < 0 || m >= m_)
        throw std::out_of_range("emitter index out of range");
    return n_ + n * m_ + m;
}

int SingleExcitationBasis::cavity_of(int index) const {
    if (index < 0 || index >= n_) throw std::out_of_range("not a cavity slot");
    return index;
}

std::pair<int, int> SingleExcitationBasis::emitter_of(int index) const {
    if (index < n_ || index >= dimension()) throw std::out_of_range("not an emitter slot");
    const int rel = index - n_;
    return {rel / m_, rel % m_};
}

int SingleExcitationBasis::node_of(int index) const {
    return is_cavity(index) ? cavity_of(index) : emitter_of(index).first;
}

Realization sample_disorder(const SystemParams& params, std::uint64_t seed) {
    params.validate();
    const int n = params.n_cavities;
    const int m = params.emitters_per_cavity;
    Eigen::MatrixXd omega_e(n, m);
    CounterRng rng(seed);
    const double sigma = params.delta / 2.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            omega_e(i, j) =
                sigma == 0.0 ? params.omega_c
                             : params.omega_c + sigma * rng.next_gaussian();
        }
    }
    return Realization{params, std::move(omega_e), seed};
}

}  // namespace tchm
