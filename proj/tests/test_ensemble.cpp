#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tchm/ensemble.hpp"

using namespace tchm;

namespace {

SweepSpec small_spec() {
    SweepSpec s;
    s.base.n_cavities = 3;
    s.base.emitters_per_cavity = 2;
    s.base.j_hop = 0.1 * s.base.g;
    s.axis = SweepAxis::delta;
    s.values = {0.0, 0.5 * s.base.collective_coupling()};
    s.realizations = 8;
    s.master_seed = 99;
    s.observables = {Observable::eigenvalues, Observable::p_n, Observable::p_p,
                     Observable::mps_lower};
    return s;
}

}  // namespace

TEST_CASE("sweep results do not depend on the worker count") {
    const auto spec = small_spec();
    const auto a = run_sweep(spec, 1);
    const auto b = run_sweep(spec, 4);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        CHECK(a.states[i].re_energy.mean == b.states[i].re_energy.mean);
        CHECK(a.states[i].re_energy.stddev == b.states[i].re_energy.stddev);
        CHECK(a.states[i].p_p_norm.mean == b.states[i].p_p_norm.mean);
    }
    REQUIRE(a.mps.size() == b.mps.size());
    for (std::size_t i = 0; i < a.mps.size(); ++i)
        CHECK(a.mps[i].p_p_norm.mean == b.mps[i].p_p_norm.mean);
}

TEST_CASE("no disorder means no spread") {
    auto spec = small_spec();
    spec.values = {0.0};
    spec.realizations = 5;
    const auto res = run_sweep(spec, 2);
    for (const auto& s : res.states) {
        CHECK(s.re_energy.stddev == 0.0);
        CHECK(s.im_energy.stddev == 0.0);
        CHECK(s.p_n_norm.stddev == 0.0);
    }
}

TEST_CASE("single realization reports zero spread") {
    auto spec = small_spec();
    spec.realizations = 1;
    spec.values = {0.3 * spec.base.g};
    const auto res = run_sweep(spec, 1);
    for (const auto& s : res.states) {
        CHECK(s.re_energy.stddev == 0.0);
        CHECK(s.re_energy.count == 1);
    }
}

TEST_CASE("state-index sweeps reuse one realization group") {
    SweepSpec spec;
    spec.base.n_cavities = 4;
    spec.base.emitters_per_cavity = 1;
    spec.base.delta = 0.2 * spec.base.g;
    spec.axis = SweepAxis::state_index;
    spec.values = {0, 1, 2, 3};
    spec.realizations = 6;
    spec.master_seed = 5;
    spec.observables = {Observable::p_n};
    const auto res = run_sweep(spec, 2);
    CHECK(res.states.size() == 4);
    for (const auto& s : res.states) {
        CHECK(s.axis_value == s.state_index);
        CHECK(s.p_n_raw.count == 6);
    }
}

TEST_CASE("figure presets resolve to the published parameters") {
    const auto fig3 = figure_preset("fig3");
    CHECK(fig3.base.n_cavities == 5);
    CHECK(fig3.base.emitters_per_cavity == 3);
    CHECK(fig3.base.j_hop == doctest::Approx(0.1 * fig3.base.g));
    CHECK(fig3.axis == SweepAxis::delta);
    CHECK(fig3.realizations == 100);
    CHECK(fig3.values.front() == 0.0);
    CHECK(fig3.values.back() ==
          doctest::Approx(fig3.base.collective_coupling()).epsilon(1e-14));

    const auto fig7 = figure_preset("fig7");
    CHECK(fig7.axis == SweepAxis::emitters_per_cavity);
    CHECK(fig7.values.front() == 3);
    CHECK(fig7.base.delta ==
          doctest::Approx(fig7.base.g * std::sqrt(3.0)).epsilon(1e-14));

    const auto fig8 = figure_preset("fig8");
    CHECK(fig8.base.n_cavities == 65);
    CHECK(fig8.axis == SweepAxis::state_index);
    CHECK(fig8.values.size() == 65);

    const auto a1 = figure_preset("figA1");
    CHECK(a1.base.omega_c == 4.0);
    CHECK(a1.base.j_hop == 1.0);
    CHECK(a1.base.g == doctest::Approx(0.2));

    try {
        figure_preset("fig99");
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("fig3") != std::string::npos);
    }
}

TEST_CASE("spec serialization round-trips through the parser") {
    const auto spec = small_spec();
    std::istringstream in(serialize_spec(spec));
    const auto spec2 = parse_sweep_spec(in);
    CHECK(spec2.axis == spec.axis);
    CHECK(spec2.values == spec.values);
    CHECK(spec2.realizations == spec.realizations);
    CHECK(spec2.master_seed == spec.master_seed);
    CHECK(spec2.observables == spec.observables);
    CHECK(spec2.base.g == spec.base.g);
    CHECK(spec2.base.delta == spec.base.delta);
    CHECK(spec_hash(spec2) == spec_hash(spec));
}

TEST_CASE("spec parser reports the offending line") {
    std::istringstream in("axis = delta\nvalues = 1,2\nwibble = 3\n");
    try {
        parse_sweep_spec(in);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("wibble") != std::string::npos);
    }
}

TEST_CASE("result tables carry one row per state and axis value") {
    const auto res = run_sweep(small_spec(), 2);
    const auto tables = result_tables(res);
    REQUIRE(tables.count("eigenvalues") == 1);
    REQUIRE(tables.count("p_n") == 1);
    REQUIRE(tables.count("mps_lower") == 1);
    const auto& eig = tables.at("eigenvalues");
    CHECK(eig.columns.front() == "delta");
    CHECK(eig.rows.size() == 2 * 9);  // two axis values, nine states
    const auto& mps = tables.at("mps_lower");
    CHECK(mps.rows.size() == 2);
}
