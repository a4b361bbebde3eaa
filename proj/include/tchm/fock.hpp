#ifndef TCHM_FOCK_HPP
#define TCHM_FOCK_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tchm/params.hpp"

namespace tchm {

using SparseC = Eigen::SparseMatrix<std::complex<double>>;

// Tensor-product Hilbert space with per-cavity photon truncation. Factor
// order is fixed: cavities 0..N-1 first, then emitters (0,0)..(N-1,M-1),
// row-major (the first factor is the most significant digit).
struct TruncatedSpace {
    int n_cavities;
    int emitters_per_cavity;
    int fock_cutoff;  // max photons per cavity

    TruncatedSpace(int n, int m, int cutoff);

    long long dimension() const { return dim_; }
    int n_factors() const { return n_cavities * (1 + emitters_per_cavity); }
    int factor_dim(int factor) const {
        return factor < n_cavities ? fock_cutoff + 1 : 2;
    }
    int cavity_factor(int n) const { return n; }
    int emitter_factor(int n, int m) const {
        return n_cavities + n * emitters_per_cavity + m;
    }

  private:
    long long dim_;
};

// Embeds a single-factor operator into the full tensor space.
SparseC embed_operator(const TruncatedSpace& space, int factor,
                       const Eigen::MatrixXcd& local);

// Annihilation operator of cavity n: a|k> = sqrt(k)|k-1>.
SparseC annihilation_op(const TruncatedSpace& space, int n);

// Lowering operator of emitter (n, m); basis order (ground, excited).
SparseC lowering_op(const TruncatedSpace& space, int n, int m);

struct OperatorSet {
    std::vector<SparseC> a;                           // per cavity
    std::vector<std::vector<SparseC>> sigma_minus;    // [cavity][emitter]
};

OperatorSet build_operators(const TruncatedSpace& space);

// H_TCHM of the realization, restricted to the truncated space.
SparseC truncated_hamiltonian(const TruncatedSpace& space, const Realization& r,
                              const OperatorSet& ops);

}  // namespace tchm

#endif
