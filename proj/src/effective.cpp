#include "tchm/effective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <lapacke.h>

namespace tchm {

EffectiveMatrix build_h_eff(const Realization& realization) {
    const SystemParams& p = realization.params;
    p.validate();
    if (realization.omega_e.rows() != p.n_cavities ||
        realization.omega_e.cols() != p.emitters_per_cavity)
        throw std::invalid_argument("omega_e shape does not match params");

    const SingleExcitationBasis basis = build_basis(p);
    const int dim = basis.dimension();
    const std::complex<double> ii(0.0, 1.0);

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < p.n_cavities; ++n) {
        const int cn = basis.index_of_cavity(n);
        h(cn, cn) = p.omega_c - 0.5 * ii * p.kappa;
        for (int m = 0; m < p.emitters_per_cavity; ++m) {
            const int em = basis.index_of_emitter(n, m);
            h(em, em) = realization.omega_e(n, m) - 0.5 * ii * p.gamma;
            h(cn, em) += p.g;
            h(em, cn) += p.g;
        }
    }
    // hopping -J(a_n^+ a_{n+1} + h.c.); the ring closes n = N-1 -> 0
    const int last = p.boundary == Boundary::periodic ? p.n_cavities : p.n_cavities - 1;
    for (int n = 0; n < last; ++n) {
        const int a = basis.index_of_cavity(n);
        const int b = basis.index_of_cavity((n + 1) % p.n_cavities);
        h(a, b) -= p.j_hop;
        h(b, a) -= p.j_hop;
    }
    return EffectiveMatrix{std::move(h), realization};
}

std::vector<EigenState> eigensolve(const EffectiveMatrix& h_eff) {
    const int dim = h_eff.dimension();
    const SingleExcitationBasis basis = build_basis(h_eff.realization.params);
    if (!h_eff.h.allFinite())
        throw EigensolveError("non-finite entries in effective Hamiltonian",
                              h_eff.realization.seed);

    Eigen::MatrixXcd a = h_eff.h;  // zgeev overwrites its input
    Eigen::VectorXcd w(dim);
    Eigen::MatrixXcd v(dim, dim);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'V', dim,
        reinterpret_cast<lapack_complex_double*>(a.data()), dim,
        reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
        reinterpret_cast<lapack_complex_double*>(v.data()), dim);
    if (info != 0)
        throw EigensolveError("zgeev failed to converge (info=" + std::to_string(info) + ")",
                              h_eff.realization.seed);

    const double h_norm = h_eff.h.norm();
    const double tol = 1e-8 * std::max(h_norm, 1e-300);
    const Eigen::MatrixXcd residual = h_eff.h * v - v * w.asDiagonal();
    for (int j = 0; j < dim; ++j) {
        if (residual.col(j).norm() > tol)
            throw EigensolveError("eigenpair residual exceeds 1e-8 * ||H||",
                                  h_eff.realization.seed);
    }

    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (w[i].real() != w[j].real()) return w[i].real() < w[j].real();
        return w[i].imag() < w[j].imag();
    });

    std::vector<EigenState> states;
    states.reserve(dim);
    for (int idx : order) {
        EigenState s;
        s.energy = w[idx];
        s.amplitudes = v.col(idx) / v.col(idx).norm();
        std::tie(s.photon_occupancy, s.emitter_occupancy) =
            node_occupancies(basis, s.amplitudes);
        states.push_back(std::move(s));
    }
    return states;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> node_occupancies(
    const SingleExcitationBasis& basis, const Eigen::VectorXcd& amplitudes) {
    if (amplitudes.size() != basis.dimension())
        throw std::invalid_argument("amplitude vector does not match basis dimension");
    Eigen::VectorXd photon = Eigen::VectorXd::Zero(basis.n_cavities());
    Eigen::VectorXd emitter = Eigen::VectorXd::Zero(basis.n_cavities());
    for (int n = 0; n < basis.n_cavities(); ++n) {
        photon[n] = std::norm(amplitudes[basis.index_of_cavity(n)]);
        for (int m = 0; m < basis.emitters_per_cavity(); ++m)
            emitter[n] += std::norm(amplitudes[basis.index_of_emitter(n, m)]);
    }
    return {photon, emitter};
}

}  // namespace tchm
