#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "tchm/effective.hpp"
#include "tchm/liouvillian.hpp"
#include "tchm/rng.hpp"

using namespace tchm;
using Cplx = std::complex<double>;

namespace {

SystemParams single_node(int m = 1) {
    SystemParams p;
    p.n_cavities = 1;
    p.emitters_per_cavity = m;
    return p;
}

Eigen::MatrixXcd random_density(long long dim, std::uint64_t seed) {
    CounterRng rng(seed);
    Eigen::MatrixXcd a(dim, dim);
    for (long long i = 0; i < dim; ++i)
        for (long long j = 0; j < dim; ++j)
            a(i, j) = Cplx(rng.next_gaussian(), rng.next_gaussian());
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

double expectation(const SparseC& op, const Eigen::MatrixXcd& rho) {
    return (Eigen::MatrixXcd(op) * rho).trace().real();
}

}  // namespace

TEST_CASE("ladder operators on the truncated space") {
    TruncatedSpace sp(1, 0, 1);
    const Eigen::MatrixXcd a = Eigen::MatrixXcd(annihilation_op(sp, 0));
    CHECK(a(0, 1) == Cplx(1.0, 0.0));
    CHECK(a(1, 0) == Cplx(0.0, 0.0));
    CHECK(a(0, 0) == Cplx(0.0, 0.0));

    TruncatedSpace sp2(1, 1, 1);
    CHECK(sp2.dimension() == 4);
    const auto av = annihilation_op(sp2, 0);
    const auto sm = lowering_op(sp2, 0, 0);
    // disjoint tensor factors commute
    CHECK((Eigen::MatrixXcd(av * sm) - Eigen::MatrixXcd(sm * av)).norm() == 0.0);

    TruncatedSpace sp3(2, 2, 2);
    CHECK(sp3.dimension() == 144);
}

TEST_CASE("commutation relations hold within the truncation") {
    TruncatedSpace sp(1, 1, 3);
    const Eigen::MatrixXcd a = Eigen::MatrixXcd(annihilation_op(sp, 0));
    const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
    // [a, a+] = 1 on every level below the cutoff
    for (int k = 0; k < 3; ++k)
        for (int e = 0; e < 2; ++e)
            CHECK(std::abs(comm(k * 2 + e, k * 2 + e) - Cplx(1.0, 0.0)) < 1e-14);

    const Eigen::MatrixXcd s = Eigen::MatrixXcd(lowering_op(sp, 0, 0));
    const Eigen::MatrixXcd anti = s * s.adjoint() + s.adjoint() * s;
    CHECK((anti - Eigen::MatrixXcd::Identity(sp.dimension(), sp.dimension())).norm() ==
          0.0);
}

TEST_CASE("vacuum is a fixed point without pump") {
    auto p = single_node(1);
    const auto lv = build_liouvillian(sample_disorder(p, 1), 0, 0.0, 2);
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(lv.dim(), lv.dim());
    vac(0, 0) = 1.0;
    CHECK(lv.apply(vac).norm() < 1e-12);
}

TEST_CASE("the generator is trace free and preserves hermiticity") {
    SystemParams p;
    p.n_cavities = 2;
    p.emitters_per_cavity = 1;
    p.delta = 0.3 * p.g;
    const auto lv = build_liouvillian(sample_disorder(p, 11), 0, two_pi * 0.01, 2);
    const auto rho = random_density(lv.dim(), 5);
    const auto lrho = lv.apply(rho);
    CHECK(std::abs(lrho.trace()) < 1e-10 * rho.norm() * lv.super.coeffs().abs().maxCoeff());
    CHECK((lrho - lrho.adjoint()).norm() < 1e-10 * lrho.norm());

    // one short step keeps trace and hermiticity
    const auto stepped = evolve_density(lv, rho, {1e-3}).front();
    CHECK(stepped.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((stepped - stepped.adjoint()).norm() < 1e-10);
}

TEST_CASE("single-excitation Rabi oscillation against the closed form") {
    // kappa = gamma makes |1,g> evolve as cos(gt) with envelope exp(-kappa t)
    auto p = single_node(1);
    p.gamma = p.kappa;
    const auto r = sample_disorder(p, 1);
    const auto lv = build_liouvillian(r, 0, 0.0, 2);
    TruncatedSpace sp(1, 1, 2);
    const auto n_op = SparseC(annihilation_op(sp, 0).adjoint() * annihilation_op(sp, 0));

    // |1>_ph |g>: photon factor index 1 of 3, emitter factor 0 of 2
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(6, 6);
    rho0(2, 2) = 1.0;

    std::vector<double> times;
    for (int i = 1; i <= 8; ++i) times.push_back(0.004 * i);
    const auto rhos = evolve_density(lv, rho0, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double expected =
            std::exp(-p.kappa * t) * std::cos(p.g * t) * std::cos(p.g * t);
        CHECK(expectation(n_op, rhos[i]) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("pumped cavity steady state matches long-time integration") {
    SystemParams p;
    p.n_cavities = 1;
    p.emitters_per_cavity = 0;
    const double pump = two_pi * 0.01;
    const auto r = sample_disorder(p, 1);
    const auto lv = build_liouvillian(r, 0, pump, 3);
    const auto rho_ss = steady_state(lv, true);
    CHECK(rho_ss.trace().real() == doctest::Approx(1.0).epsilon(1e-12));

    TruncatedSpace sp(1, 0, 3);
    const auto n_op = SparseC(annihilation_op(sp, 0).adjoint() * annihilation_op(sp, 0));

    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(4, 4);
    vac(0, 0) = 1.0;
    const auto late = evolve_density(lv, vac, {2.0}).front();
    CHECK(expectation(n_op, rho_ss) ==
          doctest::Approx(expectation(n_op, late)).epsilon(1e-6));

    // rate-equation value 2P/(kappa - 2P), exact up to truncation
    const double analytic = 2.0 * pump / (p.kappa - 2.0 * pump);
    CHECK(expectation(n_op, rho_ss) == doctest::Approx(analytic).epsilon(1e-4));
}

TEST_CASE("paper-size steady state is a valid density matrix") {
    SystemParams p;
    p.n_cavities = 2;
    p.emitters_per_cavity = 2;
    p.j_hop = 0.1 * p.g;
    p.delta = p.collective_coupling();
    const auto lv = build_liouvillian(sample_disorder(p, 21), 0, two_pi * 0.01, 2);
    const auto rho = steady_state(lv);
    CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((rho - rho.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-9);
    CHECK((lv.super * Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size())).norm() <
          1e-8);
}

TEST_CASE("correlation basics") {
    SystemParams p;
    p.n_cavities = 1;
    p.emitters_per_cavity = 1;
    const double pump = two_pi * 0.01;
    const auto lv = build_liouvillian(sample_disorder(p, 2), 0, pump, 2);
    const auto rho_ss = steady_state(lv);
    TruncatedSpace sp(1, 1, 2);

    SUBCASE("identity probe is stationary") {
        SparseC eye(sp.dimension(), sp.dimension());
        eye.setIdentity();
        CorrelationOptions opts;
        opts.n_samples = 32;
        opts.tau_max = 0.5;
        opts.decay_target = 0.0;  // disable early stop; |g| stays at 1
        const auto res = correlation(lv, rho_ss, {eye}, opts);
        for (int i = 0; i < res.g.rows(); ++i)
            CHECK(std::abs(res.g(i, 0) - Cplx(1.0, 0.0)) < 1e-9);
    }

    SUBCASE("g(0) equals Tr[A+ A rho]") {
        const auto a = annihilation_op(sp, 0);
        CorrelationOptions opts;
        opts.n_samples = 4;
        opts.tau_max = 0.01;
        const auto res = correlation(lv, rho_ss, {a}, opts);
        const double direct = (Eigen::MatrixXcd(a).adjoint() * Eigen::MatrixXcd(a) *
                               rho_ss)
                                  .trace()
                                  .real();
        CHECK(res.g(0, 0).real() == doctest::Approx(direct).epsilon(1e-12));
        CHECK(std::abs(res.g(0, 0).imag()) < 1e-14);
    }
}

TEST_CASE("pumped lossy cavity correlation decays at kappa/2") {
    SystemParams p;
    p.n_cavities = 1;
    p.emitters_per_cavity = 0;
    const auto lv = build_liouvillian(sample_disorder(p, 3), 0, two_pi * 0.001, 2);
    const auto rho_ss = steady_state(lv);
    TruncatedSpace sp(1, 0, 2);
    CorrelationOptions opts;
    opts.n_samples = 33;
    opts.tau_max = 0.064;  // about 4 cavity lifetimes
    opts.decay_target = 0.0;
    const auto res = correlation(lv, rho_ss, {annihilation_op(sp, 0)}, opts);
    const double g0 = std::abs(res.g(0, 0));
    for (int i = 1; i < res.tau.size(); i += 8) {
        const double expected = g0 * std::exp(-0.5 * p.kappa * res.tau[i]);
        CHECK(std::abs(res.g(i, 0)) == doctest::Approx(expected).epsilon(2e-2));
    }
}

TEST_CASE("spectrum of an exponential correlation is the expected Lorentzian") {
    const double kappa = two_pi * 10.0;
    const double w0 = 25.0;
    const int n = 4001;
    const double tau_max = 10.0 * 2.0 / kappa;
    Eigen::VectorXd tau = Eigen::VectorXd::LinSpaced(n, 0.0, tau_max);
    Eigen::VectorXcd g(n);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(Cplx(-0.5 * kappa * tau[i], w0 * tau[i]));

    const Eigen::VectorXd omega = Eigen::VectorXd::LinSpaced(3001, w0 - 300.0, w0 + 300.0);
    const Eigen::VectorXd s = spectrum_on_grid(g, tau, omega);

    int peak = 0;
    s.maxCoeff(&peak);
    const double grid_step = omega[1] - omega[0];
    CHECK(std::abs(omega[peak] - w0) <= grid_step);

    // FWHM equals kappa
    const double half = s[peak] / 2.0;
    int lo = peak, hi = peak;
    while (lo > 0 && s[lo] > half) --lo;
    while (hi < s.size() - 1 && s[hi] > half) ++hi;
    const double fwhm = omega[hi] - omega[lo];
    CHECK(fwhm == doctest::Approx(kappa).epsilon(0.05));

    // analytic Lorentzian height 2/(kappa/2) at the peak
    CHECK(s[peak] == doctest::Approx(4.0 / kappa).epsilon(0.01));

    SUBCASE("real symmetric input gives a symmetric spectrum") {
        Eigen::VectorXcd greal(n);
        for (int i = 0; i < n; ++i) greal[i] = std::exp(-0.5 * kappa * tau[i]);
        const auto [w, sr] = spectrum(greal, tau);
        for (int i = 0; i < w.size() / 2; ++i)
            CHECK(sr[i] == doctest::Approx(sr[w.size() - 1 - i]).epsilon(1e-9));
        // non-negative up to the numerical noise floor
        CHECK(sr.minCoeff() > -1e-8 * sr.maxCoeff());
    }
}

TEST_CASE("dimer spectra peak at the effective Hamiltonian energies") {
    SystemParams p;
    p.n_cavities = 2;
    p.emitters_per_cavity = 2;
    p.j_hop = 0.1 * p.g;
    p.delta = 1e-3 * p.g;
    const auto r = sample_disorder(p, 42);

    EmissionOptions opts;
    opts.fock_cutoff = 1;  // peak positions at weak pump need no second photon
    opts.omega_points = 1201;
    opts.omega_min = -120.0;
    opts.omega_max = 120.0;
    const auto traces = emission_spectra(r, 0, opts);
    REQUIRE(traces.size() == 6);

    const auto& cav = traces[0];
    const auto states = eigensolve(build_h_eff(r));

    // the two polariton peaks of the weakly coupled dimer sit near -+ g sqrt(2)
    const double gm = p.collective_coupling();
    int peak = 0;
    cav.intensity.maxCoeff(&peak);
    const double w_peak = cav.omega[peak];
    CHECK(std::min(std::abs(w_peak - gm), std::abs(w_peak + gm)) < 0.05 * gm);

    // every local maximum lies within a half linewidth of some Re(E)
    for (int i = 2; i < cav.omega.size() - 2; ++i) {
        const bool is_peak = cav.intensity[i] > cav.intensity[i - 1] &&
                             cav.intensity[i] >= cav.intensity[i + 1] &&
                             cav.intensity[i] > 0.02 * cav.intensity.maxCoeff();
        if (!is_peak) continue;
        double best = 1e300;
        for (const auto& s : states)
            best = std::min(best, std::abs(cav.omega[i] - s.energy.real()));
        CHECK(best < 0.5 * p.kappa);
    }
}

TEST_CASE("doubling the cutoff leaves the weak-pump spectrum unchanged") {
    SystemParams p;
    p.n_cavities = 1;
    p.emitters_per_cavity = 2;
    p.delta = 0.25 * p.collective_coupling();
    const auto r = sample_disorder(p, 5);

    EmissionOptions opts;
    opts.omega_points = 801;
    opts.omega_min = -100.0;
    opts.omega_max = 100.0;
    opts.fock_cutoff = 2;
    const auto lo = emission_spectra(r, 0, opts);
    opts.fock_cutoff = 4;
    const auto hi = emission_spectra(r, 0, opts);

    double scale = 0.0, diff = 0.0;
    for (std::size_t t = 0; t < lo.size(); ++t) {
        scale = std::max(scale, hi[t].intensity.cwiseAbs().maxCoeff());
        diff = std::max(diff, (hi[t].intensity - lo[t].intensity).cwiseAbs().maxCoeff());
    }
    CHECK(diff < 1e-3 * scale);
}

TEST_CASE("dimension guard refuses oversized systems") {
    SystemParams p;
    p.n_cavities = 6;
    p.emitters_per_cavity = 3;
    const auto r = sample_disorder(p, 1);
    EmissionOptions opts;
    opts.fock_cutoff = 3;
    try {
        emission_spectra(r, 0, opts);
        FAIL("expected the dimension guard to fire");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("exceeds the guard") != std::string::npos);
    }
}
