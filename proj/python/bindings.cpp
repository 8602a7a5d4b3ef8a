#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "schiffer/grunsky.hpp"
#include "schiffer/hbvp.hpp"
#include "schiffer/scattering.hpp"

namespace py = pybind11;
using namespace schiffer;

namespace {

CoeffVector gamma_vector(const SchifferOperators& ops, const VectorXc& v) {
  if (v.size() != ops.t11.entries.cols()) throw BasisMismatch("gamma_bar has the wrong length");
  return {ops.t11.domain, v, true};
}

HarmonicPair datum(const SchifferOperators& ops, const VectorXc& holo, const VectorXc& antiholo) {
  int n = ops.complex.n();
  if (holo.size() % n != 0) throw BasisMismatch("holomorphic part must have the same rows for every cap");
  return {{BasisId::cap_pullback(static_cast<int>(holo.size() / n), n), holo, false}, gamma_vector(ops, antiholo)};
}

py::dict solution_dict(const HbvpSolution& s) {
  py::dict d;
  d["beta"] = s.beta.coeffs;
  d["gamma_bar"] = s.gamma_bar.coeffs;
  d["residual"] = s.residual;
  d["boundary_mismatch"] = s.boundary_mismatch;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = "0.1.0";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
  py::register_exception<UnivalenceViolation>(m, "UnivalenceViolation", error.ptr());
  py::register_exception<OverlapViolation>(m, "OverlapViolation", error.ptr());
  py::register_exception<BasisMismatch>(m, "BasisMismatch", error.ptr());
  py::register_exception<AliasingError>(m, "AliasingError", error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
  py::register_exception<CompletionFailure>(m, "CompletionFailure", error.ptr());
  py::register_exception<IllConditioned>(m, "IllConditioned", error.ptr());
  py::register_exception<QuadratureError>(m, "QuadratureError", error.ptr());
  py::register_exception<Unsolvable>(m, "Unsolvable", error.ptr());

  py::class_<CapSpec>(m, "CapSpec")
      .def(py::init([](std::vector<cplx> coeffs, cplx center, bool at_infinity) {
             return CapSpec{center, std::move(coeffs), at_infinity};
           }),
           py::arg("coeffs"), py::arg("center") = cplx(0.0), py::arg("at_infinity") = false)
      .def_readwrite("center", &CapSpec::center)
      .def_readwrite("coeffs", &CapSpec::coeffs)
      .def_readwrite("at_infinity", &CapSpec::at_infinity);

  py::class_<CapComplex>(m, "CapComplex")
      .def_property_readonly("n", &CapComplex::n)
      .def_readonly("truncation", &CapComplex::truncation)
      .def_readonly("samples", &CapComplex::samples)
      .def("boundary", [](const CapComplex& cx, int k) { return cx.polygons.at(static_cast<std::size_t>(k)); });

  m.def("build_complex", py::overload_cast<const std::vector<CapSpec>&, int, int>(&build_complex), py::arg("caps"),
        py::arg("truncation"), py::arg("samples") = 1024);
  m.def(
      "transform",
      [](const CapComplex& cx, cplx a, cplx b, cplx c, cplx d) { return transform(cx, Mobius{a, b, c, d}); },
      py::arg("complex"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));

  m.def("grunsky_matrix", [](const CapComplex& cx) { return grunsky_matrix(cx).assembled(); });
  m.def("grunsky_norm", [](const CapComplex& cx) { return spectral_norm(grunsky_matrix(cx)); });

  py::class_<SchifferOperators>(m, "Operators")
      .def_readonly("N", &SchifferOperators::N)
      .def_readonly("J", &SchifferOperators::J)
      .def_readonly("kernel_grid", &SchifferOperators::kernel_grid)
      .def_property_readonly("t11", [](const SchifferOperators& o) { return o.t11.entries; })
      .def_property_readonly("t11_ext", [](const SchifferOperators& o) { return o.t11_ext.entries; })
      .def_property_readonly("t12", [](const SchifferOperators& o) { return o.t12.entries; })
      .def_property_readonly("complex", [](const SchifferOperators& o) { return o.complex; });
  m.def("assemble_operators", &assemble_operators, py::arg("complex"), py::arg("J") = 0);

  m.def("scattering_matrix", [](const SchifferOperators& ops) { return assemble_scattering(ops).assembled(); });
  m.def("unitarity_defect",
        [](const SchifferOperators& ops) { return scattering_report(assemble_scattering(ops)).unitarity_defect; });
  m.def(
      "refinement_ladder",
      [](const std::vector<CapSpec>& caps, const std::vector<int>& truncations, int samples) {
        py::list out;
        for (const auto& l : refinement_ladder(caps, truncations, samples).refinement_history) {
          py::dict d;
          d["N"] = l.N;
          d["grid"] = l.quad;
          d["J"] = l.J;
          d["defect"] = l.defect;
          out.append(d);
        }
        return out;
      },
      py::arg("caps"), py::arg("truncations"), py::arg("samples") = 1024);
  m.def("pythagoras_defect",
        [](const SchifferOperators& ops) { return adjoint_check(ops.t11_ext, ops.t12).max_defect; });
  m.def("theta_sigma_min", [](const SchifferOperators& ops) { return theta_matrix(ops.t12).sigma_min; });

  m.def("random_gamma_bar", [](const SchifferOperators& ops, std::uint64_t seed) {
    return random_gamma_bar(ops, seed).coeffs;
  });
  m.def("overfare_check", [](const SchifferOperators& ops, const VectorXc& g) {
    OverfareCheck oc = overfare_check(ops, gamma_vector(ops, g));
    py::dict d;
    d["mismatch"] = oc.mismatch;
    d["periods_sigma1"] = oc.periods_sigma1;
    d["periods_sigma2"] = oc.periods_sigma2;
    return d;
  });

  m.def("manufactured_datum", [](const SchifferOperators& ops, const VectorXc& g) {
    HarmonicPair p = manufactured_datum(ops, gamma_vector(ops, g));
    return py::make_tuple(p.holo.coeffs, p.antiholo.coeffs);
  });
  m.def("solvability_residual", [](const SchifferOperators& ops, const VectorXc& holo, const VectorXc& antiholo) {
    return solvability_residual(ops, HbvpData{datum(ops, holo, antiholo)});
  });
  m.def(
      "solve_hbvp",
      [](const SchifferOperators& ops, const VectorXc& holo, const VectorXc& antiholo, double tolerance) {
        return solution_dict(solve(ops, HbvpData{datum(ops, holo, antiholo), tolerance}));
      },
      py::arg("operators"), py::arg("holo"), py::arg("antiholo"), py::arg("tolerance") = 1e-6);

  m.def("harmonic_measures", [](const CapComplex& cx) {
    HarmonicMeasures hm = harmonic_measures(cx);
    py::dict d;
    d["period_matrix"] = hm.period_matrix;
    d["reduced"] = hm.reduced();
    d["condition"] = hm.condition;
    return d;
  });
}
