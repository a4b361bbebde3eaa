#include "tchm/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace tchm {

TruncatedSpace::TruncatedSpace(int n, int m, int cutoff)
    : n_cavities(n), emitters_per_cavity(m), fock_cutoff(cutoff) {
    if (n < 1 || m < 0 || cutoff < 1)
        throw std::invalid_argument("TruncatedSpace needs N >= 1, M >= 0, cutoff >= 1");
    long long d = 1;
    for (int f = 0; f < n_factors(); ++f) {
        d *= factor_dim(f);
        if (d > (1LL << 40))
            throw std::invalid_argument("truncated space dimension overflow");
    }
    dim_ = d;
}

SparseC embed_operator(const TruncatedSpace& space, int factor,
                       const Eigen::MatrixXcd& local) {
    const int nf = space.n_factors();
    if (factor < 0 || factor >= nf) throw std::out_of_range("factor out of range");
    const int ld = space.factor_dim(factor);
    if (local.rows() != ld || local.cols() != ld)
        throw std::invalid_argument("local operator has wrong dimension");

    // index = left * (ld * right_dim) + row * right_dim + right
    long long right_dim = 1;
    for (int f = factor + 1; f < nf; ++f) right_dim *= space.factor_dim(f);
    const long long left_dim = space.dimension() / (right_dim * ld);

    std::vector<Eigen::Triplet<std::complex<double>>> trips;
    for (int r = 0; r < ld; ++r)
        for (int c = 0; c < ld; ++c)
            if (local(r, c) != 0.0)
                for (long long l = 0; l < left_dim; ++l)
                    for (long long rr = 0; rr < right_dim; ++rr)
                        trips.emplace_back((l * ld + r) * right_dim + rr,
                                           (l * ld + c) * right_dim + rr,
                                           local(r, c));

    SparseC out(space.dimension(), space.dimension());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SparseC annihilation_op(const TruncatedSpace& space, int n) {
    if (n < 0 || n >= space.n_cavities) throw std::out_of_range("cavity out of range");
    const int d = space.fock_cutoff + 1;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return embed_operator(space, space.cavity_factor(n), a);
}

SparseC lowering_op(const TruncatedSpace& space, int n, int m) {
    if (n < 0 || n >= space.n_cavities || m < 0 || m >= space.emitters_per_cavity)
        throw std::out_of_range("emitter out of range");
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
    s(0, 1) = 1.0;
    return embed_operator(space, space.emitter_factor(n, m), s);
}

OperatorSet build_operators(const TruncatedSpace& space) {
    OperatorSet ops;
    ops.a.reserve(space.n_cavities);
    ops.sigma_minus.resize(space.n_cavities);
    for (int n = 0; n < space.n_cavities; ++n) {
        ops.a.push_back(annihilation_op(space, n));
        ops.sigma_minus[n].reserve(space.emitters_per_cavity);
        for (int m = 0; m < space.emitters_per_cavity; ++m)
            ops.sigma_minus[n].push_back(lowering_op(space, n, m));
    }
    return ops;
}

SparseC truncated_hamiltonian(const TruncatedSpace& space, const Realization& r,
                              const OperatorSet& ops) {
    const SystemParams& p = r.params;
    if (space.n_cavities != p.n_cavities ||
        space.emitters_per_cavity != p.emitters_per_cavity)
        throw std::invalid_argument("space does not match realization");

    SparseC h(space.dimension(), space.dimension());
    for (int n = 0; n < p.n_cavities; ++n) {
        const SparseC ad = SparseC(ops.a[n].adjoint());
        if (p.omega_c != 0.0) h += p.omega_c * (ad * ops.a[n]).eval();
        for (int m = 0; m < p.emitters_per_cavity; ++m) {
            const SparseC& sm = ops.sigma_minus[n][m];
            const SparseC sp = SparseC(sm.adjoint());
            if (r.omega_e(n, m) != 0.0) h += r.omega_e(n, m) * (sp * sm).eval();
            h += p.g * (ad * sm + sp * ops.a[n]).eval();
        }
    }
    const int last = p.boundary == Boundary::periodic ? p.n_cavities : p.n_cavities - 1;
    for (int n = 0; n < last; ++n) {
        const int nb = (n + 1) % p.n_cavities;
        const SparseC ad = SparseC(ops.a[n].adjoint());
        const SparseC adb = SparseC(ops.a[nb].adjoint());
        h -= p.j_hop * (ad * ops.a[nb] + adb * ops.a[n]).eval();
    }
    h.makeCompressed();
    return h;
}

}  // namespace tchm
