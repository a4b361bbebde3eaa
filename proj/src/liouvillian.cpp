#include "tchm/liouvillian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

namespace tchm {

namespace {

using Cplx = std::complex<double>;
using Triplet = Eigen::Triplet<Cplx>;
using RowMat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// vec stacks columns: rho_ij sits at i + j*D, so vec(A rho B) = (B^T kron A) vec(rho).
void kron_into(const SparseC& x, const SparseC& y, Cplx scale,
               std::vector<Triplet>& out) {
    const long long dy = y.rows();
    for (int kx = 0; kx < x.outerSize(); ++kx)
        for (SparseC::InnerIterator ix(x, kx); ix; ++ix)
            for (int ky = 0; ky < y.outerSize(); ++ky)
                for (SparseC::InnerIterator iy(y, ky); iy; ++iy)
                    out.emplace_back(ix.row() * dy + iy.row(),
                                     ix.col() * dy + iy.col(),
                                     scale * ix.value() * iy.value());
}

void add_left_mult(const SparseC& a, Cplx scale, long long dim,
                   std::vector<Triplet>& out) {
    // I kron a
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseC::InnerIterator it(a, k); it; ++it)
            for (long long j = 0; j < dim; ++j)
                out.emplace_back(j * dim + it.row(), j * dim + it.col(),
                                 scale * it.value());
}

void add_right_mult(const SparseC& b, Cplx scale, long long dim,
                    std::vector<Triplet>& out) {
    // b^T kron I
    for (int k = 0; k < b.outerSize(); ++k)
        for (SparseC::InnerIterator it(b, k); it; ++it)
            for (long long i = 0; i < dim; ++i)
                out.emplace_back(it.col() * dim + i, it.row() * dim + i,
                                 scale * it.value());
}

// D[c]: 2 c rho c^+ - c^+c rho - rho c^+c, scaled by `rate`
void add_dissipator(const SparseC& c, double rate, long long dim,
                    std::vector<Triplet>& out) {
    if (rate == 0.0) return;
    const SparseC cdag = SparseC(c.adjoint());
    const SparseC cc = SparseC(cdag * c);
    const SparseC cconj = SparseC(c.conjugate());
    kron_into(cconj, c, Cplx(2.0 * rate, 0.0), out);
    add_left_mult(cc, Cplx(-rate, 0.0), dim, out);
    add_right_mult(cc, Cplx(-rate, 0.0), dim, out);
}

Eigen::VectorXcd vec_of(const Eigen::MatrixXcd& rho) {
    return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, long long dim) {
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

// y = L x for a row-major block of vectorized matrices (one column per probe)
void apply_block(const SparseRowC& lsup, const RowMat& x, RowMat& y) {
    const long long rows = lsup.rows();
    const int np = static_cast<int>(x.cols());
    const Cplx* vals = lsup.valuePtr();
    const int* inner = lsup.innerIndexPtr();
    const int* outer = lsup.outerIndexPtr();
    const Cplx* xp = x.data();
    Cplx* yp = y.data();
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < rows; ++i) {
        Cplx acc[16];  // np is small (probe count)
        for (int p = 0; p < np; ++p) acc[p] = Cplx(0.0, 0.0);
        for (int k = outer[i]; k < outer[i + 1]; ++k) {
            const Cplx v = vals[k];
            const Cplx* xr = xp + static_cast<long long>(inner[k]) * np;
            for (int p = 0; p < np; ++p) acc[p] += v * xr[p];
        }
        Cplx* yr = yp + i * np;
        for (int p = 0; p < np; ++p) yr[p] = acc[p];
    }
}

struct Rk4Workspace {
    RowMat k1, k2, k3, k4, tmp;
    explicit Rk4Workspace(long long rows, int cols)
        : k1(rows, cols), k2(rows, cols), k3(rows, cols), k4(rows, cols),
          tmp(rows, cols) {}
};

void rk4_step(const SparseRowC& lsup, RowMat& y, double dt, Rk4Workspace& ws) {
    apply_block(lsup, y, ws.k1);
    ws.tmp = y + (0.5 * dt) * ws.k1;
    apply_block(lsup, ws.tmp, ws.k2);
    ws.tmp = y + (0.5 * dt) * ws.k2;
    apply_block(lsup, ws.tmp, ws.k3);
    ws.tmp = y + dt * ws.k3;
    apply_block(lsup, ws.tmp, ws.k4);
    y += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

double spectral_span(const SystemParams& p) {
    const double base = std::abs(p.omega_c) + 2.0 * p.collective_coupling() +
                        2.0 * std::abs(p.j_hop) + p.kappa;
    return std::max({base, p.delta, 1e-6});
}

// explicit RK4 needs |lambda| dt inside its stability region; Gershgorin
// bounds the generator spectrum from the stored rows
double stability_step(const SparseRowC& lsup) {
    const Cplx* vals = lsup.valuePtr();
    const int* outer = lsup.outerIndexPtr();
    double worst = 0.0;
    for (long long i = 0; i < lsup.rows(); ++i) {
        double row = 0.0;
        for (int k = outer[i]; k < outer[i + 1]; ++k) row += std::abs(vals[k]);
        worst = std::max(worst, row);
    }
    return worst > 0.0 ? 2.5 / worst : 1.0;
}

// total excitation of each basis state (photons plus excited emitters)
std::vector<int> excitation_grading(const TruncatedSpace& space) {
    const long long dim = space.dimension();
    std::vector<int> exc(dim, 0);
    for (long long idx = 0; idx < dim; ++idx) {
        long long rest = idx;
        for (int f = space.n_factors() - 1; f >= 0; --f) {
            const int d = space.factor_dim(f);
            exc[idx] += static_cast<int>(rest % d);
            rest /= d;
        }
    }
    return exc;
}

// Every term of the generator conserves the excitation difference between
// the two density-matrix indices, so dynamics started inside a set of
// difference sectors never leaves it. The restriction below carves the
// corresponding rows/columns out of the superoperator; when a cross-sector
// entry shows up (it should not) the caller falls back to the full space.
struct SectorRestriction {
    bool valid = false;
    std::vector<long long> sub_to_full;
    std::vector<long long> full_to_sub;  // -1 when outside
    SparseRowC sub;
};

SectorRestriction restrict_to_sectors(const Liouvillian& lv,
                                      const std::vector<bool>& support) {
    const long long dim = lv.dim();
    const auto exc = excitation_grading(lv.space);
    int max_exc = 0;
    for (int e : exc) max_exc = std::max(max_exc, e);
    auto sector_id = [&](long long v) {
        return exc[v % dim] - exc[v / dim] + max_exc;  // shifted to >= 0
    };
    std::vector<bool> active(2 * max_exc + 1, false);
    for (long long v = 0; v < dim * dim; ++v)
        if (support[v]) active[sector_id(v)] = true;

    SectorRestriction res;
    res.full_to_sub.assign(dim * dim, -1);
    for (long long v = 0; v < dim * dim; ++v) {
        if (active[sector_id(v)]) {
            res.full_to_sub[v] = static_cast<long long>(res.sub_to_full.size());
            res.sub_to_full.push_back(v);
        }
    }
    const long long nsub = static_cast<long long>(res.sub_to_full.size());

    std::vector<Eigen::Triplet<Cplx>> trips;
    const Cplx* vals = lv.super.valuePtr();
    const int* inner = lv.super.innerIndexPtr();
    const int* outer = lv.super.outerIndexPtr();
    for (long long s = 0; s < nsub; ++s) {
        const long long row = res.sub_to_full[s];
        for (int k = outer[row]; k < outer[row + 1]; ++k) {
            const long long mapped = res.full_to_sub[inner[k]];
            if (mapped < 0) {
                if (std::abs(vals[k]) > 1e-14) return res;  // grading violated
                continue;
            }
            trips.emplace_back(s, mapped, vals[k]);
        }
    }
    res.sub.resize(nsub, nsub);
    res.sub.setFromTriplets(trips.begin(), trips.end());
    res.sub.makeCompressed();
    res.valid = true;
    return res;
}

Eigen::VectorXcd solve_pinned(const SparseC& lsup_col, long long dim,
                              long long pinned_row, bool& ok) {
    SparseC sys = lsup_col;
    // overwrite one redundant row with the trace functional
    std::vector<Triplet> trips;
    trips.reserve(sys.nonZeros() + dim);
    for (int k = 0; k < sys.outerSize(); ++k)
        for (SparseC::InnerIterator it(sys, k); it; ++it)
            if (it.row() != pinned_row)
                trips.emplace_back(it.row(), it.col(), it.value());
    for (long long i = 0; i < dim; ++i)
        trips.emplace_back(pinned_row, i * (dim + 1), Cplx(1.0, 0.0));
    SparseC pinned(sys.rows(), sys.cols());
    pinned.setFromTriplets(trips.begin(), trips.end());
    pinned.makeCompressed();

    Eigen::SparseLU<SparseC> lu;
    lu.compute(pinned);
    if (lu.info() != Eigen::Success) {
        ok = false;
        return Eigen::VectorXcd();
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(sys.rows());
    rhs[pinned_row] = 1.0;
    Eigen::VectorXcd x = lu.solve(rhs);
    ok = lu.info() == Eigen::Success;
    return x;
}

}  // namespace

std::string ProbeId::label() const {
    if (kind == Kind::cavity) return "cavity_" + std::to_string(n);
    return "emitter_" + std::to_string(n) + "_" + std::to_string(m);
}

Eigen::MatrixXcd Liouvillian::apply(const Eigen::MatrixXcd& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim())
        throw std::invalid_argument("density matrix has wrong dimension");
    return unvec(super * vec_of(rho), dim());
}

Liouvillian build_liouvillian(const Realization& realization, int pump_cavity,
                              double pump_rate, int fock_cutoff) {
    const SystemParams& p = realization.params;
    p.validate();
    if (pump_cavity < 0 || pump_cavity >= p.n_cavities)
        throw std::invalid_argument("pump cavity out of range");
    if (pump_rate < 0.0) throw std::invalid_argument("pump rate must be >= 0");

    TruncatedSpace space(p.n_cavities, p.emitters_per_cavity, fock_cutoff);
    const OperatorSet ops = build_operators(space);
    const SparseC h = truncated_hamiltonian(space, realization, ops);
    const long long dim = space.dimension();

    std::vector<Triplet> trips;
    const Cplx mi(0.0, -1.0);
    add_left_mult(h, mi, dim, trips);
    add_right_mult(h, -mi, dim, trips);
    for (int n = 0; n < p.n_cavities; ++n) {
        add_dissipator(ops.a[n], 0.5 * p.kappa, dim, trips);
        for (int m = 0; m < p.emitters_per_cavity; ++m)
            add_dissipator(ops.sigma_minus[n][m], 0.5 * p.gamma, dim, trips);
    }
    if (pump_rate > 0.0)
        add_dissipator(SparseC(ops.a[pump_cavity].adjoint()), pump_rate, dim, trips);

    SparseRowC super(dim * dim, dim * dim);
    super.setFromTriplets(trips.begin(), trips.end());
    super.makeCompressed();
    return Liouvillian{space, realization, pump_cavity, pump_rate, std::move(super)};
}

Eigen::MatrixXcd steady_state(const Liouvillian& lv, bool check_uniqueness) {
    const long long dim = lv.dim();
    if (lv.pump_rate == 0.0) {
        // vacuum is annihilated by every jump operator and by H
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
        rho(0, 0) = 1.0;
        return rho;
    }

    const SparseC lsup_col(lv.super);
    bool ok = true;
    Eigen::VectorXcd x = solve_pinned(lsup_col, dim, 0, ok);
    if (!ok) {
        x = solve_pinned(lsup_col, dim, (dim - 1) * (dim + 1), ok);
        if (!ok)
            throw SteadyStateError("steady state: sparse LU failed on both pinned rows");
    }

    Eigen::MatrixXcd rho = unvec(x, dim);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-12)
        throw SteadyStateError("steady state: solved null vector has vanishing trace");
    rho /= tr;

    const double residual = (lv.super * vec_of(rho)).norm();
    if (residual > 1e-8)
        throw SteadyStateError("steady state residual " + std::to_string(residual) +
                               " exceeds 1e-8");

    if (dim <= 2048) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                           Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9)
            throw SteadyStateError("steady state has eigenvalue below -1e-9");
    } else {
        if (rho.diagonal().real().minCoeff() < -1e-9)
            throw SteadyStateError("steady state has diagonal weight below -1e-9");
    }

    if (check_uniqueness) {
        bool ok2 = true;
        const Eigen::VectorXcd x2 = solve_pinned(lsup_col, dim, (dim - 1) * (dim + 1), ok2);
        if (ok2) {
            Eigen::MatrixXcd rho2 = unvec(x2, dim);
            rho2 = 0.5 * (rho2 + rho2.adjoint()).eval();
            const double tr2 = rho2.trace().real();
            if (std::abs(tr2) > 1e-12 && (rho2 / tr2 - rho).norm() > 1e-6)
                throw SteadyStateError(
                    "steady state: second pinned-row candidate differs; "
                    "null space is not unique");
        }
    }
    return rho;
}

CorrelationResult correlation(const Liouvillian& lv, const Eigen::MatrixXcd& rho_ss,
                              const std::vector<SparseC>& probes,
                              const CorrelationOptions& opts) {
    const long long dim = lv.dim();
    const int np = static_cast<int>(probes.size());
    if (np < 1 || np > 16)
        throw std::invalid_argument("correlation supports 1..16 probes per pass");
    if (rho_ss.rows() != dim || rho_ss.cols() != dim)
        throw std::invalid_argument("rho_ss has wrong dimension");

    const SystemParams& p = lv.realization.params;
    const double span = spectral_span(p);
    const double dt_raw = std::min(opts.dt > 0.0 ? opts.dt : 1.0 / (20.0 * span),
                                   stability_step(lv.super));

    double tau_max = opts.tau_max;
    if (tau_max <= 0.0) {
        const double slow_rate =
            p.emitters_per_cavity > 0 && p.gamma > 0.0
                ? std::min(p.kappa, p.gamma)
                : p.kappa;
        const double need = slow_rate > 0.0
                                ? std::log(1.0 / opts.decay_target) / (0.5 * slow_rate)
                                : 0.0;
        const double cap = p.gamma > 0.0 ? 10.0 / p.gamma
                                         : (p.kappa > 0.0 ? 10.0 / p.kappa : 1.0);
        tau_max = need > 0.0 ? std::min(need, cap) : cap;
    }

    const int n_samples = std::max(opts.n_samples, 2);
    const double dtau = tau_max / (n_samples - 1);
    const int substeps = std::max(1, static_cast<int>(std::ceil(dtau / dt_raw)));
    const double dt = dtau / substeps;

    // one shared evolution; column p carries vec(A_p rho_ss)
    RowMat y(dim * dim, np);
    for (int p_i = 0; p_i < np; ++p_i) {
        if (probes[p_i].rows() != dim || probes[p_i].cols() != dim)
            throw std::invalid_argument("probe operator has wrong dimension");
        const Eigen::MatrixXcd b0 = probes[p_i] * rho_ss;
        y.col(p_i) = vec_of(b0);
    }

    CorrelationResult res;
    res.tau = Eigen::VectorXd::LinSpaced(n_samples, 0.0, tau_max);
    res.g = Eigen::MatrixXcd::Zero(n_samples, np);

    auto record = [&](int k) {
        for (int p_i = 0; p_i < np; ++p_i) {
            // Tr[A^+ B] = sum over nnz of conj(A) .* B
            Cplx acc(0.0, 0.0);
            const SparseC& a = probes[p_i];
            for (int c = 0; c < a.outerSize(); ++c)
                for (SparseC::InnerIterator it(a, c); it; ++it)
                    acc += std::conj(it.value()) *
                           y(it.col() * dim + it.row(), p_i);
            res.g(k, p_i) = acc;
        }
    };
    record(0);

    const Eigen::VectorXd g0 = res.g.row(0).cwiseAbs().transpose();
    Rk4Workspace ws(dim * dim, np);
    int decayed_streak = 0;
    int last_sample = n_samples - 1;
    for (int k = 1; k < n_samples; ++k) {
        for (int s = 0; s < substeps; ++s) rk4_step(lv.super, y, dt, ws);
        if (!y.allFinite())
            throw std::runtime_error(
                "correlation: time integration diverged; reduce dt "
                "(current dt = " + std::to_string(dt) + " ns)");
        record(k);
        if (opts.decay_target > 0.0) {
            bool all_below = true;
            for (int p_i = 0; p_i < np; ++p_i)
                if (std::abs(res.g(k, p_i)) > opts.decay_target * g0[p_i])
                    all_below = false;
            decayed_streak = all_below ? decayed_streak + 1 : 0;
            if (decayed_streak >= 3) {
                last_sample = k;
                break;
            }
        }
    }
    if (last_sample < n_samples - 1) {
        res.tau = res.tau.head(last_sample + 1).eval();
        res.g = res.g.topRows(last_sample + 1).eval();
    } else {
        double worst = 0.0;
        for (int p_i = 0; p_i < np; ++p_i)
            if (g0[p_i] > 0.0)
                worst = std::max(worst,
                                 std::abs(res.g(n_samples - 1, p_i)) / g0[p_i]);
        if (worst > opts.decay_target)
            res.warnings.push_back(
                "correlation residual |g(tau_max)|/|g(0)| = " + std::to_string(worst) +
                " exceeds target " + std::to_string(opts.decay_target) +
                "; spectrum carries windowing error");
    }
    return res;
}

std::vector<Eigen::MatrixXcd> evolve_density(const Liouvillian& lv,
                                             const Eigen::MatrixXcd& rho0,
                                             const std::vector<double>& times,
                                             double dt) {
    const long long dim = lv.dim();
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw std::invalid_argument("rho0 has wrong dimension");
    const double dt_raw =
        std::min(dt > 0.0 ? dt : 1.0 / (20.0 * spectral_span(lv.realization.params)),
                 stability_step(lv.super));

    RowMat y(dim * dim, 1);
    y.col(0) = vec_of(rho0);
    Rk4Workspace ws(dim * dim, 1);

    std::vector<Eigen::MatrixXcd> out;
    out.reserve(times.size());
    double t = 0.0;
    for (double target : times) {
        if (target < t - 1e-15)
            throw std::invalid_argument("evolve_density: times must ascend");
        if (target > t) {
            const int steps = std::max(1, static_cast<int>(std::ceil((target - t) / dt_raw)));
            const double h = (target - t) / steps;
            for (int s = 0; s < steps; ++s) rk4_step(lv.super, y, h, ws);
            t = target;
        }
        out.push_back(unvec(Eigen::VectorXcd(y.col(0)), dim));
    }
    return out;
}

Eigen::VectorXd spectrum_on_grid(const Eigen::VectorXcd& g_tau,
                                 const Eigen::VectorXd& tau,
                                 const Eigen::VectorXd& omega) {
    const int nt = static_cast<int>(tau.size());
    if (g_tau.size() != nt || nt < 2)
        throw std::invalid_argument("spectrum: need matching tau/g grids of size >= 2");
    const double dtau = tau[1] - tau[0];

    Eigen::VectorXd s(omega.size());
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < omega.size(); ++j) {
        const Cplx rot = std::exp(Cplx(0.0, -omega[j] * dtau));
        Cplx phase(1.0, 0.0);
        Cplx acc = 0.5 * g_tau[0];
        for (int k = 1; k < nt; ++k) {
            phase *= rot;
            acc += (k == nt - 1 ? 0.5 : 1.0) * g_tau[k] * phase;
        }
        // two-sided extension g(-tau) = conj(g(tau)) doubles the real part
        s[j] = 2.0 * dtau * acc.real();
    }
    return s;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> spectrum(const Eigen::VectorXcd& g_tau,
                                                     const Eigen::VectorXd& tau) {
    const int nt = static_cast<int>(tau.size());
    if (nt < 2) throw std::invalid_argument("spectrum: need >= 2 samples");
    const double tau_max = tau[nt - 1];
    const int half = nt - 1;
    Eigen::VectorXd omega(2 * half + 1);
    const double pi = two_pi / 2.0;
    for (int j = -half; j <= half; ++j) omega[j + half] = pi * j / tau_max;
    return {omega, spectrum_on_grid(g_tau, tau, omega)};
}

std::vector<SpectrumTrace> emission_spectra(const Realization& realization,
                                            int pump_cavity,
                                            const EmissionOptions& opts) {
    const SystemParams& p = realization.params;
    TruncatedSpace space(p.n_cavities, p.emitters_per_cavity, opts.fock_cutoff);
    if (space.dimension() > opts.max_dimension)
        throw std::invalid_argument(
            "truncated space dimension " + std::to_string(space.dimension()) +
            " exceeds the guard " + std::to_string(opts.max_dimension) +
            "; raise max_dimension explicitly to proceed");

    const OperatorSet ops = build_operators(space);
    std::vector<ProbeId> ids;
    std::vector<SparseC> probes;
    for (int n = 0; n < p.n_cavities; ++n) {
        ids.push_back(ProbeId{ProbeId::Kind::cavity, n, 0});
        probes.push_back(ops.a[n]);
    }
    for (int n = 0; n < p.n_cavities; ++n)
        for (int m = 0; m < p.emitters_per_cavity; ++m) {
            ids.push_back(ProbeId{ProbeId::Kind::emitter, n, m});
            probes.push_back(ops.sigma_minus[n][m]);
        }

    Eigen::VectorXd omega;
    if (opts.omega_min == opts.omega_max) {
        const double span = 1.1 * (spectral_span(p) + p.delta);
        omega = Eigen::VectorXd::LinSpaced(opts.omega_points, p.omega_c - span,
                                           p.omega_c + span);
    } else {
        omega = Eigen::VectorXd::LinSpaced(opts.omega_points, opts.omega_min,
                                           opts.omega_max);
    }

    std::vector<int> pumps;
    if (opts.sum_pumps)
        for (int n = 0; n < p.n_cavities; ++n) pumps.push_back(n);
    else
        pumps.push_back(pump_cavity);

    std::vector<SpectrumTrace> traces(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        traces[i].probe = ids[i];
        traces[i].omega = omega;
        traces[i].intensity = Eigen::VectorXd::Zero(omega.size());
        traces[i].pump_cavity = opts.sum_pumps ? -1 : pump_cavity;
        traces[i].pump_rate = opts.pump_rate;
    }

    for (int pc : pumps) {
        if (opts.progress)
            opts.progress("building Liouvillian, pump on cavity " + std::to_string(pc));
        const Liouvillian lv = build_liouvillian(realization, pc, opts.pump_rate,
                                                 opts.fock_cutoff);
        const Eigen::MatrixXcd rho_ss = steady_state(lv);
        if (opts.progress)
            opts.progress("integrating correlations, pump on cavity " + std::to_string(pc));
        const CorrelationResult corr = correlation(lv, rho_ss, probes, opts.correlation);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            traces[i].intensity += spectrum_on_grid(corr.g.col(i), corr.tau, omega);
            for (const auto& w : corr.warnings) traces[i].warnings.push_back(w);
        }
    }
    return traces;
}

}  // namespace tchm
