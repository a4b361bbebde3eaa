#ifndef TCHM_EFFECTIVE_HPP
#define TCHM_EFFECTIVE_HPP

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "tchm/params.hpp"

namespace tchm {

// Non-Hermitian single-excitation Hamiltonian: the lossless chain plus
// -i kappa/2 on cavity slots and -i gamma/2 on emitter slots.
struct EffectiveMatrix {
    Eigen::MatrixXcd h;
    Realization realization;

    int dimension() const { return static_cast<int>(h.rows()); }
};

// One complex eigenpair with its per-node weights. Amplitudes carry unit
// Euclidean norm, so the occupancies form a probability distribution.
struct EigenState {
    std::complex<double> energy;   // Re = position, Im = -half linewidth
    Eigen::VectorXcd amplitudes;
    Eigen::VectorXd photon_occupancy;   // per node
    Eigen::VectorXd emitter_occupancy;  // per node, summed over the node's emitters
};

struct EigensolveError : std::runtime_error {
    EigensolveError(const std::string& what, std::uint64_t seed)
        : std::runtime_error(what + " (realization seed " + std::to_string(seed) + ")"),
          seed(seed) {}
    std::uint64_t seed;
};

EffectiveMatrix build_h_eff(const Realization& realization);

// All N(M+1) eigenpairs, sorted by ascending Re(E), ties by ascending Im(E).
// Residuals are checked against 1e-8 * ||H||_F; violation or LAPACK
// non-convergence raises EigensolveError carrying the realization seed.
std::vector<EigenState> eigensolve(const EffectiveMatrix& h_eff);

// Per-node photon and emitter weights of a unit-normalized amplitude vector.
std::pair<Eigen::VectorXd, Eigen::VectorXd> node_occupancies(
    const SingleExcitationBasis& basis, const Eigen::VectorXcd& amplitudes);

}  // namespace tchm

#endif
