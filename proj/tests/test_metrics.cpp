#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tchm/effective.hpp"
#include "tchm/metrics.hpp"
#include "tchm/rng.hpp"

using namespace tchm;

namespace {

// test-only state with prescribed node weights
EigenState state_with(const std::vector<double>& photon,
                      const std::vector<double>& emitter) {
    EigenState s;
    s.energy = 0.0;
    s.photon_occupancy = Eigen::Map<const Eigen::VectorXd>(photon.data(), photon.size());
    s.emitter_occupancy =
        Eigen::Map<const Eigen::VectorXd>(emitter.data(), emitter.size());
    return s;
}

// independent evaluation straight from the definitions
double brute_pn(const EigenState& s) {
    double acc = 0.0;
    for (int i = 0; i < s.photon_occupancy.size(); ++i) {
        const double w = s.photon_occupancy[i] + s.emitter_occupancy[i];
        acc += w * w;
    }
    return 1.0 / acc;
}

double brute_pp(const EigenState& s) {
    const double ph = s.photon_occupancy.sum();
    const double em = s.emitter_occupancy.sum();
    return 1.0 / (ph * ph + em * em);
}

}  // namespace

TEST_CASE("nodal participation hand values") {
    SUBCASE("two equal nodes maximize") {
        const auto s = state_with({0.25, 0.25}, {0.25, 0.25});
        const auto pn = nodal_participation(s);
        CHECK(pn.raw == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(pn.normalized == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("all weight on one node minimizes") {
        const auto s = state_with({0.6, 0.0, 0.0}, {0.4, 0.0, 0.0});
        const auto pn = nodal_participation(s);
        CHECK(pn.raw == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(pn.normalized == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("five-node mixed weights") {
        const auto s = state_with({0.5, 0.0, 0.25, 0.0, 0.25}, {0, 0, 0, 0, 0});
        const auto pn = nodal_participation(s);
        CHECK(pn.raw == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
        CHECK(pn.normalized == doctest::Approx(5.0 / 12.0).epsilon(1e-14));
        CHECK(pn.raw == doctest::Approx(brute_pn(s)).epsilon(1e-14));
    }
    SUBCASE("single node defines normalized as zero") {
        const auto s = state_with({1.0}, {0.0});
        CHECK(nodal_participation(s).normalized == 0.0);
    }
}

TEST_CASE("polaritonic participation hand values") {
    SUBCASE("even split maximizes") {
        const auto s = state_with({0.5}, {0.5});
        const auto pp = polaritonic_participation(s);
        CHECK(pp.raw == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(pp.normalized == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("pure cavity state minimizes") {
        const auto s = state_with({1.0, 0.0}, {0.0, 0.0});
        const auto pp = polaritonic_participation(s);
        CHECK(pp.raw == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(pp.normalized == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("three-quarter photon") {
        const auto s = state_with({0.5, 0.25}, {0.125, 0.125});
        const auto pp = polaritonic_participation(s);
        CHECK(pp.raw == doctest::Approx(1.6).epsilon(1e-14));
        CHECK(pp.normalized == doctest::Approx(0.6).epsilon(1e-14));
        CHECK(pp.raw == doctest::Approx(brute_pp(s)).epsilon(1e-14));
    }
}

TEST_CASE("metric bounds and symmetries over random occupancy tables") {
    std::mt19937 gen(1234);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 1 + int(uni(gen) * 7);
        std::vector<double> ph(n), em(n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            ph[i] = uni(gen);
            em[i] = uni(gen);
            total += ph[i] + em[i];
        }
        for (int i = 0; i < n; ++i) {
            ph[i] /= total;
            em[i] /= total;
        }
        const auto s = state_with(ph, em);
        const auto pn = nodal_participation(s);
        const auto pp = polaritonic_participation(s);
        CHECK(pn.raw >= 1.0 - 1e-12);
        CHECK(pn.raw <= n + 1e-12);
        CHECK(pp.raw >= 1.0 - 1e-12);
        CHECK(pp.raw <= 2.0 + 1e-12);
        CHECK(pn.normalized >= -1e-12);
        CHECK(pn.normalized <= 1.0 + 1e-12);
        CHECK(pp.normalized >= -1e-12);
        CHECK(pp.normalized <= 1.0 + 1e-12);

        // node permutation leaves both metrics unchanged
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), gen);
        std::vector<double> ph2(n), em2(n);
        for (int i = 0; i < n; ++i) {
            ph2[i] = ph[perm[i]];
            em2[i] = em[perm[i]];
        }
        const auto s2 = state_with(ph2, em2);
        CHECK(nodal_participation(s2).raw == doctest::Approx(pn.raw).epsilon(1e-12));
        CHECK(polaritonic_participation(s2).raw == doctest::Approx(pp.raw).epsilon(1e-12));

        // swapping total photon and emitter weight leaves polaritonicity unchanged
        const auto s3 = state_with(em, ph);
        CHECK(polaritonic_participation(s3).raw == doctest::Approx(pp.raw).epsilon(1e-12));
    }
}

TEST_CASE("band classification by sorted position") {
    auto make_states = [](int count) {
        std::vector<EigenState> states(count);
        for (int i = 0; i < count; ++i) {
            states[i].energy = double(i);
            states[i].photon_occupancy = Eigen::VectorXd::Ones(1);
            states[i].emitter_occupancy = Eigen::VectorXd::Zero(1);
        }
        return states;
    };

    SystemParams p;
    p.n_cavities = 5;
    p.emitters_per_cavity = 3;
    auto bands = classify_bands(make_states(20), p);
    CHECK(std::count(bands.begin(), bands.end(), Band::lower) == 5);
    CHECK(std::count(bands.begin(), bands.end(), Band::subradiant) == 10);
    CHECK(std::count(bands.begin(), bands.end(), Band::upper) == 5);
    CHECK(bands[0] == Band::lower);
    CHECK(bands[5] == Band::subradiant);
    CHECK(bands[19] == Band::upper);

    p.n_cavities = 2;
    p.emitters_per_cavity = 1;
    bands = classify_bands(make_states(4), p);
    CHECK(std::count(bands.begin(), bands.end(), Band::subradiant) == 0);

    p.n_cavities = 3;
    p.emitters_per_cavity = 0;
    bands = classify_bands(make_states(3), p);
    CHECK(std::count(bands.begin(), bands.end(), Band::lower) == 3);

    p.n_cavities = 5;
    p.emitters_per_cavity = 3;
    CHECK_THROWS_AS(classify_bands(make_states(7), p), std::invalid_argument);
}

TEST_CASE("most polaritonic state of the resonant 5x3 chain") {
    SystemParams p;
    p.n_cavities = 5;
    p.emitters_per_cavity = 3;
    p.j_hop = 0.1 * p.g;
    const auto states = eigensolve(build_h_eff(sample_disorder(p, 1)));
    const auto bands = classify_bands(states, p);

    const auto idx = most_polaritonic_state(states, bands, Band::lower);
    CHECK(idx == 2);  // middle of the five lower-band states
    const auto pp = polaritonic_participation(states[idx]);
    CHECK(pp.normalized == doctest::Approx(1.0).epsilon(1e-9));
    const auto pn = nodal_participation(states[idx]);
    CHECK(pn.normalized == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("most polaritonic state handles singleton and empty bands") {
    SystemParams p;
    p.n_cavities = 1;
    p.emitters_per_cavity = 2;
    const auto states = eigensolve(build_h_eff(sample_disorder(p, 1)));
    const auto bands = classify_bands(states, p);
    CHECK(most_polaritonic_state(states, bands, Band::lower) == 0);

    p.emitters_per_cavity = 1;
    const auto states2 = eigensolve(build_h_eff(sample_disorder(p, 1)));
    const auto bands2 = classify_bands(states2, p);
    CHECK_THROWS_AS(most_polaritonic_state(states2, bands2, Band::subradiant),
                    std::invalid_argument);
}

TEST_CASE("resonant 2x2 lowest state anchors both metrics at one") {
    SystemParams p;
    p.n_cavities = 2;
    p.emitters_per_cavity = 2;
    p.j_hop = 1e-6 * p.g;
    const auto states = eigensolve(build_h_eff(sample_disorder(p, 1)));
    const auto pn = nodal_participation(states.front());
    const auto pp = polaritonic_participation(states.front());
    CHECK(pn.normalized == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pp.normalized == doctest::Approx(1.0).epsilon(1e-6));
}
