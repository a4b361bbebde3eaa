#ifndef TCHM_LIOUVILLIAN_HPP
#define TCHM_LIOUVILLIAN_HPP

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tchm/fock.hpp"
#include "tchm/params.hpp"

namespace tchm {

using SparseRowC = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;

struct SteadyStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vectorized generator of the pumped master equation,
//   L rho = -i[H, rho] + sum_n kappa/2 D[a_n] + sum_nm gamma/2 D[sigma_nm]
//           + P D[a_pump^+],   D[c] rho = 2 c rho c^+ - c^+c rho - rho c^+c,
// stored as a sparse superoperator over column-stacked density matrices.
struct Liouvillian {
    TruncatedSpace space;
    Realization realization;
    int pump_cavity;
    double pump_rate;
    SparseRowC super;  // D^2 x D^2

    long long dim() const { return space.dimension(); }

    // action on a density matrix, through the superoperator
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};

Liouvillian build_liouvillian(const Realization& realization, int pump_cavity,
                              double pump_rate, int fock_cutoff = 2);

// Null vector of the superoperator with unit trace, from a sparse LU solve
// of the trace-replaced system. Checks the residual, Hermiticity and
// positivity; optionally re-solves with a different pinned row to detect a
// degenerate null space.
Eigen::MatrixXcd steady_state(const Liouvillian& lv, bool check_uniqueness = false);

struct CorrelationOptions {
    double dt = 0.0;            // internal RK4 step; 0 -> 1/(20 * spectral span)
    double tau_max = 0.0;       // 0 -> decay-based estimate capped at 10/gamma
    int n_samples = 2048;       // recorded correlation samples
    double decay_target = 1e-4; // |g(tau_max)| / |g(0)| goal used by the estimate
};

struct CorrelationResult {
    Eigen::VectorXd tau;               // uniform grid, tau[0] = 0
    Eigen::MatrixXcd g;                // n_samples x n_probes
    std::vector<std::string> warnings; // e.g. residual correlation at tau_max
};

// Quantum regression: evolves B(0) = A rho_ss for every probe A under the
// same generator and records g_A(tau) = Tr[A^+ B(tau)]. All probes share
// one fixed-step 4th-order integration.
CorrelationResult correlation(const Liouvillian& lv, const Eigen::MatrixXcd& rho_ss,
                              const std::vector<SparseC>& probes,
                              const CorrelationOptions& opts = {});

// rho(t) at the listed times (ascending, t[0] >= 0), fixed-step integration
// with the same default step rule as correlation().
std::vector<Eigen::MatrixXcd> evolve_density(const Liouvillian& lv,
                                             const Eigen::MatrixXcd& rho0,
                                             const std::vector<double>& times,
                                             double dt = 0.0);

// S(omega) = integral g(tau) e^{-i omega tau} dtau with the two-sided
// extension g(-tau) = conj(g(tau)), evaluated on an explicit grid.
Eigen::VectorXd spectrum_on_grid(const Eigen::VectorXcd& g_tau,
                                 const Eigen::VectorXd& tau,
                                 const Eigen::VectorXd& omega);

// Same transform on the reciprocal grid of the tau grid:
// omega_j = pi j / tau_max, j = -(K-1)..K-1.
std::pair<Eigen::VectorXd, Eigen::VectorXd> spectrum(const Eigen::VectorXcd& g_tau,
                                                     const Eigen::VectorXd& tau);

struct ProbeId {
    enum class Kind { cavity, emitter } kind;
    int n = 0;
    int m = 0;
    std::string label() const;
};

struct SpectrumTrace {
    ProbeId probe;
    Eigen::VectorXd omega;      // rad/ns
    Eigen::VectorXd intensity;
    int pump_cavity;            // -1 for pump-summed traces
    double pump_rate;
    std::vector<std::string> warnings;
};

struct EmissionOptions {
    double pump_rate = two_pi * 0.01;
    int fock_cutoff = 2;
    bool sum_pumps = false;     // sum traces over a pump on every cavity
    double omega_min = 0.0;     // omega_min == omega_max -> reciprocal grid
    double omega_max = 0.0;
    int omega_points = 2001;
    long long max_dimension = 10000;
    CorrelationOptions correlation = {};
    std::function<void(const std::string&)> progress;  // optional
};

// One trace per element (every cavity, then every emitter), probed with its
// annihilation/lowering operator under a pump on pump_cavity; with
// sum_pumps the traces are summed over pump positions 0..N-1 instead.
std::vector<SpectrumTrace> emission_spectra(const Realization& realization,
                                            int pump_cavity,
                                            const EmissionOptions& opts = {});

}  // namespace tchm

#endif
