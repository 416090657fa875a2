// Python bindings for the simulation core: basis presets, dressed-state
// toolkit, master-equation solvers, and the spectrogram sweep.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rydpol/angular.hpp"
#include "rydpol/basis.hpp"
#include "rydpol/couplings.hpp"
#include "rydpol/dressed.hpp"
#include "rydpol/master.hpp"
#include "rydpol/spectra.hpp"

namespace py = pybind11;
using namespace rydpol;

namespace {

HalfInt half_int_from(double v) {
  const double twice = 2.0 * v;
  const long long t = std::llround(twice);
  if (std::abs(twice - t) > 1e-9)
    throw std::invalid_argument("angular momentum must be a multiple of 1/2");
  return HalfInt(static_cast<int>(t));
}

FieldConfig field_from(double rabi, double detuning, double theta) {
  FieldConfig f;
  f.polarization = Polarization::linear_at_angle(theta);
  f.radial_rabi = rabi;
  f.detuning = detuning;
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "EIT ladder simulation core: RF-dressed Rydberg spectroscopy";

  m.def("wigner_3j",
        [](double j1, double j2, double j3, double m1, double m2, double m3) {
          return wigner_3j(half_int_from(j1), half_int_from(j2),
                           half_int_from(j3), half_int_from(m1),
                           half_int_from(m2), half_int_from(m3));
        },
        py::arg("j1"), py::arg("j2"), py::arg("j3"), py::arg("m1"),
        py::arg("m2"), py::arg("m3"));
  m.def("wigner_6j",
        [](double j1, double j2, double j3, double j4, double j5, double j6) {
          return wigner_6j(half_int_from(j1), half_int_from(j2),
                           half_int_from(j3), half_int_from(j4),
                           half_int_from(j5), half_int_from(j6));
        },
        py::arg("j1"), py::arg("j2"), py::arg("j3"), py::arg("j4"),
        py::arg("j5"), py::arg("j6"));
  m.def("clebsch_gordan",
        [](double j1, double m1, double j2, double m2, double J, double M) {
          return clebsch_gordan(half_int_from(j1), half_int_from(m1),
                                half_int_from(j2), half_int_from(m2),
                                half_int_from(J), half_int_from(M));
        },
        py::arg("j1"), py::arg("m1"), py::arg("j2"), py::arg("m2"),
        py::arg("J"), py::arg("M"));

  py::class_<LadderSpec>(m, "LadderSpec")
      .def_readonly("name", &LadderSpec::name)
      .def("state_count",
           [](const LadderSpec& l) { return enumerate_basis(l).size(); })
      .def("__repr__", [](const LadderSpec& l) {
        return "<LadderSpec '" + l.name + "'>";
      });
  m.def("preset", &preset, py::arg("name"),
        "Preset ladders: type1, type2, model_atom");
  m.def("preset_names", &preset_names);

  py::class_<DressedEntry>(m, "DressedEntry")
      .def_property_readonly("mJ",
                             [](const DressedEntry& e) { return e.mJ.value(); })
      .def_property_readonly("mI",
                             [](const DressedEntry& e) { return e.mI.value(); })
      .def_readonly("s", &DressedEntry::s)
      .def_readonly("energy_shift", &DressedEntry::energy_shift)
      .def_readonly("pair_rabi", &DressedEntry::pair_rabi);
  py::class_<DressedManifold>(m, "DressedManifold")
      .def_readonly("rf_rabi", &DressedManifold::rf_rabi)
      .def_readonly("rf_detuning", &DressedManifold::rf_detuning)
      .def_readonly("entries", &DressedManifold::entries);
  m.def("dress_rydberg_pair", &dress_rydberg_pair, py::arg("ladder"),
        py::arg("rf_rabi"), py::arg("rf_detuning") = 0.0);
  m.def("diagonalize_mF_block",
        [](const LadderSpec& ladder, double mF, double rf_rabi) {
          return diagonalize_mF_block(ladder, half_int_from(mF), rf_rabi);
        },
        py::arg("ladder"), py::arg("mF"), py::arg("rf_rabi"));
  m.def("dressed_strength_residual", &dressed_strength_residual,
        py::arg("ladder"));

  py::class_<RateConfig>(m, "RateConfig")
      .def(py::init<>())
      .def_readwrite("gamma_i", &RateConfig::gamma_i)
      .def_readwrite("gamma_transit", &RateConfig::gamma_transit)
      .def_readwrite("gamma_collision", &RateConfig::gamma_collision)
      .def_readwrite("gamma_r1_rad", &RateConfig::gamma_r1_rad)
      .def_readwrite("gamma_r2_rad", &RateConfig::gamma_r2_rad)
      .def_readwrite("gamma_dummy", &RateConfig::gamma_dummy);

  py::class_<VaporConfig>(m, "VaporConfig")
      .def(py::init<>())
      .def_readwrite("density", &VaporConfig::density)
      .def_readwrite("path_length", &VaporConfig::path_length)
      .def_readwrite("temperature", &VaporConfig::temperature)
      .def_readwrite("lambda_probe", &VaporConfig::lambda_probe)
      .def_readwrite("lambda_coupling", &VaporConfig::lambda_coupling)
      .def_readwrite("atom_mass", &VaporConfig::atom_mass)
      .def_readwrite("probe_dipole", &VaporConfig::probe_dipole);

  py::class_<FieldConfig>(m, "FieldConfig")
      .def(py::init(&field_from), py::arg("rabi"), py::arg("detuning") = 0.0,
           py::arg("theta") = 0.0)
      .def_readwrite("radial_rabi", &FieldConfig::radial_rabi)
      .def_readwrite("detuning", &FieldConfig::detuning);

  m.def("build_hamiltonian", &build_hamiltonian, py::arg("ladder"),
        py::arg("probe"), py::arg("coupling"), py::arg("rf"));
  m.def("steady_state_density",
        [](const LadderSpec& ladder, const FieldConfig& probe,
           const FieldConfig& coupling, const FieldConfig& rf,
           const RateConfig& rates) {
          auto H = build_hamiltonian(ladder, probe, coupling, rf);
          auto D = build_collapse_operators(ladder, rates);
          return steady_state(H, D).rho;
        },
        py::arg("ladder"), py::arg("probe"), py::arg("coupling"),
        py::arg("rf"), py::arg("rates") = RateConfig{});
  m.def("extinction", &extinction, py::arg("rho"), py::arg("ladder"),
        py::arg("probe"), py::arg("vapor"));
  m.def("transmission", &transmission, py::arg("alpha"),
        py::arg("path_length"));
  m.def("find_peaks", &find_peaks, py::arg("y"),
        py::arg("min_prominence_fraction") = 0.05);

  py::class_<SweepOptions>(m, "SweepOptions")
      .def(py::init<>())
      .def_readwrite("doppler", &SweepOptions::doppler)
      .def_readwrite("velocity_points", &SweepOptions::velocity_points)
      .def_readwrite("velocity_cutoff_sigmas",
                     &SweepOptions::velocity_cutoff_sigmas)
      .def_readwrite("workers", &SweepOptions::workers)
      .def_readwrite("fold_symmetry", &SweepOptions::fold_symmetry)
      .def_readwrite("fast_solver", &SweepOptions::fast_solver);

  py::class_<Spectrogram>(m, "Spectrogram")
      .def_readonly("theta_deg", &Spectrogram::theta_deg)
      .def_readonly("detuning", &Spectrogram::detuning)
      .def_readonly("alpha", &Spectrogram::alpha)
      .def_readonly("transmission_map", &Spectrogram::transmission_map)
      .def_readonly("signal", &Spectrogram::signal)
      .def_readonly("reference_transmission",
                    &Spectrogram::reference_transmission);
  m.def("sweep_spectrogram", &sweep_spectrogram, py::arg("ladder"),
        py::arg("probe"), py::arg("coupling"), py::arg("rf_rabi"),
        py::arg("rf_detuning"), py::arg("theta_deg"), py::arg("detuning"),
        py::arg("rates") = RateConfig{}, py::arg("vapor") = VaporConfig{},
        py::arg("options") = SweepOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("central_cut", &central_cut, py::arg("spectrogram"),
        py::arg("tol") = 1.0);
}
