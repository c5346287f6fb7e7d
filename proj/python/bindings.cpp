#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qfb/brauer.hpp"
#include "qfb/cli.hpp"
#include "qfb/etale.hpp"
#include "qfb/local.hpp"
#include "qfb/parse.hpp"
#include "qfb/pipeline.hpp"

namespace py = pybind11;
using namespace qfb;

namespace {

QuadraticForm form(const std::string& field, const std::string& entries) {
  FieldPtr F = parse_field(field);
  return QuadraticForm(F, parse_form_entries(F, entries));
}

py::dict classify_py(const std::string& field, const std::string& entries) {
  ClassificationReport r = classify(form(field, entries));
  py::dict d;
  d["dim"] = r.dim;
  d["discriminant_trivial"] = r.discriminant_trivial;
  d["clifford"] = r.clifford.str();
  d["index"] = r.index;
  d["branch"] = branch_name(r.branch);
  return d;
}

py::dict construct_py(const std::string& field, const std::string& entries) {
  QuadraticForm phi = form(field, entries);
  TransferPresentation T = construct_presentation(phi);
  py::dict d;
  d["ext"] = T.psi.ext.str();
  d["psi"] = T.psi.str();
  d["route"] = T.route;
  d["verified"] = verify_presentation(phi, T).ok;
  return d;
}

std::string transfer_py(const std::string& ext, const std::string& entries) {
  FieldPtr L = parse_field(ext);
  EtaleExtension E = EtaleExtension::of_field(L);
  return transfer(E, QuadraticForm(L, parse_form_entries(L, entries))).str();
}

int hilbert_py(const std::string& a, const std::string& b, long p) {
  FieldPtr Q = Field::rationals();
  Place v = p == 0 ? Place::real() : Place::prime(p);
  return hilbert_symbol_Q(parse_elem(Q, a).rational(), parse_elem(Q, b).rational(), v);
}

long index_py(const std::string& field, const std::string& symbols) {
  FieldPtr F = parse_field(field);
  return index(BrauerClass2(F, parse_symbols(F, symbols)));
}

py::tuple run_cli_py(const std::vector<std::string>& args, const std::string& input) {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run(args, in, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_qfb, m) {
  m.doc() = "Exact quadratic form and Brauer class computations";
  py::register_exception<Error>(m, "QfbError", PyExc_ValueError);
  m.def("classify", &classify_py, py::arg("field"), py::arg("form"));
  m.def("construct", &construct_py, py::arg("field"), py::arg("form"));
  m.def("transfer", &transfer_py, py::arg("ext"), py::arg("form"), "Scharlau transfer along the trace of ext over its base.");
  m.def("hilbert", &hilbert_py, py::arg("a"), py::arg("b"), py::arg("p"), "Hilbert symbol over Q; p = 0 is the real place.");
  m.def("index", &index_py, py::arg("field"), py::arg("symbols"));
  m.def("run_cli", &run_cli_py, py::arg("args"), py::arg("input") = "");
}
