#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tchm/analytic.hpp"
#include "tchm/effective.hpp"
#include "tchm/ensemble.hpp"
#include "tchm/liouvillian.hpp"
#include "tchm/metrics.hpp"
#include "tchm/params.hpp"
#include "tchm/rng.hpp"

namespace py = pybind11;
using namespace tchm;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tavis-Cummings-Hubbard coupled-cavity array simulator";

    py::enum_<Boundary>(m, "Boundary")
        .value("open", Boundary::open)
        .value("periodic", Boundary::periodic);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](int n_cavities, int emitters_per_cavity, double omega_c,
                         double g, double j_hop, double kappa, double gamma,
                         double delta, Boundary boundary) {
                 SystemParams p;
                 p.n_cavities = n_cavities;
                 p.emitters_per_cavity = emitters_per_cavity;
                 p.omega_c = omega_c;
                 p.g = g;
                 p.j_hop = j_hop;
                 p.kappa = kappa;
                 p.gamma = gamma;
                 p.delta = delta;
                 p.boundary = boundary;
                 p.validate();
                 return p;
             }),
             py::arg("n_cavities"), py::arg("emitters_per_cavity") = 0,
             py::arg("omega_c") = 0.0, py::arg("g") = two_pi * 5.0,
             py::arg("j_hop") = two_pi * 0.5, py::arg("kappa") = two_pi * 10.0,
             py::arg("gamma") = two_pi / 5.8, py::arg("delta") = 0.0,
             py::arg("boundary") = Boundary::open)
        .def_readonly("n_cavities", &SystemParams::n_cavities)
        .def_readonly("emitters_per_cavity", &SystemParams::emitters_per_cavity)
        .def_readonly("omega_c", &SystemParams::omega_c)
        .def_readonly("g", &SystemParams::g)
        .def_readonly("j_hop", &SystemParams::j_hop)
        .def_readonly("kappa", &SystemParams::kappa)
        .def_readonly("gamma", &SystemParams::gamma)
        .def_readonly("delta", &SystemParams::delta)
        .def_readonly("boundary", &SystemParams::boundary)
        .def_property_readonly("collective_coupling", &SystemParams::collective_coupling)
        .def("__repr__", [](const SystemParams& p) {
            return "SystemParams(n_cavities=" + std::to_string(p.n_cavities) +
                   ", emitters_per_cavity=" + std::to_string(p.emitters_per_cavity) + ")";
        });

    py::class_<Realization>(m, "Realization")
        .def_readonly("params", &Realization::params)
        .def_readonly("omega_e", &Realization::omega_e)
        .def_readonly("seed", &Realization::seed);

    py::class_<EigenState>(m, "EigenState")
        .def_readonly("energy", &EigenState::energy)
        .def_readonly("amplitudes", &EigenState::amplitudes)
        .def_readonly("photon_occupancy", &EigenState::photon_occupancy)
        .def_readonly("emitter_occupancy", &EigenState::emitter_occupancy);

    m.def("sample_disorder", &sample_disorder, py::arg("params"), py::arg("seed"));
    m.def("derive_realization_seed", &derive_realization_seed, py::arg("master_seed"),
          py::arg("realization_index"));
    m.def("basis_dimension",
          [](const SystemParams& p) { return build_basis(p).dimension(); });

    m.def(
        "build_h_eff",
        [](const Realization& r) { return build_h_eff(r).h; },
        py::arg("realization"),
        "dense non-Hermitian single-excitation Hamiltonian as a complex matrix");
    m.def(
        "eigensolve",
        [](const Realization& r) { return eigensolve(build_h_eff(r)); },
        py::arg("realization"),
        "all eigenstates sorted by ascending Re(E), ties by Im(E)");

    m.def("nodal_participation", [](const EigenState& s) {
        const auto r = nodal_participation(s);
        return py::make_tuple(r.raw, r.normalized);
    });
    m.def("polaritonic_participation", [](const EigenState& s) {
        const auto r = polaritonic_participation(s);
        return py::make_tuple(r.raw, r.normalized);
    });
    m.def("classify_bands",
          [](const std::vector<EigenState>& states, const SystemParams& p) {
              std::vector<std::string> out;
              for (Band b : classify_bands(states, p)) out.push_back(to_string(b));
              return out;
          });
    m.def("most_polaritonic_state",
          [](const std::vector<EigenState>& states, const SystemParams& p,
             const std::string& band) {
              const auto bands = classify_bands(states, p);
              const Band which = band == "lower"  ? Band::lower
                                 : band == "upper" ? Band::upper
                                                   : Band::subradiant;
              return most_polaritonic_state(states, bands, which);
          },
          py::arg("states"), py::arg("params"), py::arg("band") = "lower");

    m.def("open_momenta", &open_momenta);
    m.def("periodic_momenta", &periodic_momenta);
    m.def("cca_band", &cca_band, py::arg("k"), py::arg("omega_c"), py::arg("j_hop"));
    m.def("polariton_bands", &polariton_bands, py::arg("k"), py::arg("omega_0"),
          py::arg("j_hop"), py::arg("g"), py::arg("emitters_per_cavity"));
    m.def("polariton_eigenvector",
          [](double k, double j, double g, int m_) {
              const auto w = polariton_eigenvector(k, j, g, m_);
              return py::make_tuple(py::make_tuple(w.photon_minus, w.emitter_minus),
                                    py::make_tuple(w.photon_plus, w.emitter_plus));
          },
          py::arg("k"), py::arg("j_hop"), py::arg("g"), py::arg("emitters_per_cavity"));

    m.def(
        "emission_spectra",
        [](const Realization& r, int pump_cavity, double pump_rate, int fock_cutoff,
           bool sum_pumps, double omega_min, double omega_max, int omega_points,
           double dt, double tau_max) {
            EmissionOptions opts;
            opts.pump_rate = pump_rate;
            opts.fock_cutoff = fock_cutoff;
            opts.sum_pumps = sum_pumps;
            opts.omega_min = omega_min;
            opts.omega_max = omega_max;
            opts.omega_points = omega_points;
            opts.correlation.dt = dt;
            opts.correlation.tau_max = tau_max;
            const auto traces = emission_spectra(r, pump_cavity, opts);
            py::dict out;
            out["omega"] = traces.front().omega;
            py::dict intensities;
            for (const auto& tr : traces)
                intensities[tr.probe.label().c_str()] = tr.intensity;
            out["intensity"] = intensities;
            return out;
        },
        py::arg("realization"), py::arg("pump_cavity") = 0,
        py::arg("pump_rate") = two_pi * 0.01, py::arg("fock_cutoff") = 2,
        py::arg("sum_pumps") = false, py::arg("omega_min") = 0.0,
        py::arg("omega_max") = 0.0, py::arg("omega_points") = 2001,
        py::arg("dt") = 0.0, py::arg("tau_max") = 0.0,
        "emission spectrum of every element under an incoherent cavity pump");

    m.def(
        "run_figure_preset",
        [](const std::string& name, int realizations, std::uint64_t seed, int jobs) {
            SweepSpec spec = figure_preset(name);
            if (realizations > 0) spec.realizations = realizations;
            spec.master_seed = seed;
            const auto result = run_sweep(spec, jobs);
            py::dict out;
            for (const auto& [key, table] : result_tables(result)) {
                py::list rows;
                for (const auto& row : table.rows) {
                    py::dict rec;
                    for (std::size_t i = 0; i < table.columns.size(); ++i) {
                        const Cell& cell = row[i];
                        if (std::holds_alternative<double>(cell))
                            rec[table.columns[i].c_str()] = std::get<double>(cell);
                        else if (std::holds_alternative<long long>(cell))
                            rec[table.columns[i].c_str()] = std::get<long long>(cell);
                        else
                            rec[table.columns[i].c_str()] = std::get<std::string>(cell);
                    }
                    rows.append(rec);
                }
                out[key.c_str()] = rows;
            }
            return out;
        },
        py::arg("name"), py::arg("realizations") = 0, py::arg("seed") = 0,
        py::arg("jobs") = 0, "run a published-figure sweep and return its tables");
    m.def("figure_preset_names", &figure_preset_names);

    m.attr("TWO_PI") = two_pi;
}
