#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gpl/cli.hpp"
#include "gpl/dsl.hpp"
#include "gpl/gauge.hpp"
#include "gpl/identities.hpp"

namespace py = pybind11;
using namespace gpl;

namespace {

nlohmann::json to_json(const py::object& o) {
  if (py::isinstance<py::str>(o)) return nlohmann::json::parse(o.cast<std::string>());
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::object from_json(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// Elements share ownership so they outlive the Python Algebra handle.
struct Algebra {
  explicit Algebra(SpecPtr s) : spec(std::move(s)), model(spec) {}
  SpecPtr spec;
  FreeModel model;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

struct Element {
  AlgebraPtr algebra;
  AlgebraElement value;

  Element with(AlgebraElement v) const { return {algebra, std::move(v)}; }
  const AlgebraElement& same(const Element& other) const {
    if (!other.algebra->spec->same_as(*algebra->spec)) raise(Errc::RingMismatch, "elements of different algebras");
    return other.value;
  }
};

Element evaluate(const AlgebraPtr& a, const std::string& text) {
  return {a, dsl::evaluate(*dsl::parse(text), a->model)};
}

Element coerce(const AlgebraPtr& a, const py::object& o) {
  if (py::isinstance<Element>(o)) return o.cast<Element>();
  return evaluate(a, py::str(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_gpl, m) {
  m.doc() = "Weighted braces, gauge groups and Maurer-Cartan calculus over arbitrary coefficient rings";

  py::exception<Error>(m, "GplError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object type = py::module_::import("gpl._gpl").attr("GplError");
      py::object exc = type(e.what());
      exc.attr("code") = errc_name(e.code());
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  py::class_<Algebra, std::shared_ptr<Algebra>>(m, "Algebra")
      .def(py::init([](const py::object& spec) { return std::make_shared<Algebra>(AlgebraSpec::from_json(to_json(spec))); }),
           py::arg("spec"), "Free algebra from a spec given as a dict or JSON text.")
      .def_property_readonly("ring", [](const Algebra& a) { return a.spec->ring().name(); })
      .def_property_readonly("weight_cap", [](const Algebra& a) { return a.spec->weight_cap(); })
      .def_property_readonly("generators",
                             [](const Algebra& a) {
                               std::vector<std::pair<std::string, int>> out;
                               for (const auto& g : a.spec->generators()) out.emplace_back(g.name, g.degree);
                               return out;
                             })
      .def("spec", [](const Algebra& a) { return from_json(a.spec->to_json()); })
      .def("__call__", [](const std::shared_ptr<Algebra>& a, const std::string& text) { return evaluate(a, text); },
           py::arg("expr"), "Evaluate an expression of the brace language.")
      .def("zero", [](const std::shared_ptr<Algebra>& a) { return Element{a, AlgebraElement::zero(a->spec)}; })
      .def("one", [](const std::shared_ptr<Algebra>& a) { return Element{a, AlgebraElement::one(a->spec)}; })
      .def("verify_identities",
           [](const std::shared_ptr<Algebra>& a, int trials, std::uint64_t seed) {
             std::vector<Identity> ids(std::begin(kCesaroIdentities), std::end(kCesaroIdentities));
             if (a->spec->has_differential()) ids.push_back(Identity::Leibniz);
             bool passed = true;
             auto suite = cli::identity_suite(a->model, ids, trials, seed, passed);
             py::gil_scoped_acquire hold;
             return py::make_tuple(passed, from_json(suite));
           },
           py::arg("trials") = 50, py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());

  py::class_<Element>(m, "Element")
      .def("__add__", [](const Element& a, const py::object& b) { return a.with(a.value + coerce(a.algebra, b).value); })
      .def("__radd__", [](const Element& a, const py::object& b) { return a.with(coerce(a.algebra, b).value + a.value); })
      .def("__sub__", [](const Element& a, const py::object& b) { return a.with(a.value - coerce(a.algebra, b).value); })
      .def("__rsub__", [](const Element& a, const py::object& b) { return a.with(coerce(a.algebra, b).value - a.value); })
      .def("__neg__", [](const Element& a) { return a.with(-a.value); })
      .def("__mul__", [](const Element& a, const py::object& b) {
        if (py::isinstance<Element>(b)) return a.with(star(a.value, a.same(b.cast<Element>())));
        return a.with(a.value.scaled(parse_scalar(py::str(b).cast<std::string>(), a.value.ring())));
      })
      .def("__rmul__", [](const Element& a, const py::object& b) {
        return a.with(a.value.scaled(parse_scalar(py::str(b).cast<std::string>(), a.value.ring())));
      })
      .def("__eq__", [](const Element& a, const py::object& b) {
        return py::isinstance<Element>(b) ? a.value == a.same(b.cast<Element>()) : a.value == coerce(a.algebra, b).value;
      })
      .def("__str__", [](const Element& a) { return a.value.to_string(); })
      .def("__repr__", [](const Element& a) { return "Element('" + a.value.to_string() + "')"; })
      .def("__bool__", [](const Element& a) { return !a.value.is_zero(); })
      .def("brace",
           [](const Element& a, const std::vector<std::pair<Element, int>>& args) {
             std::vector<std::pair<AlgebraElement, int>> raw;
             for (const auto& [y, r] : args) raw.emplace_back(a.same(y), r);
             return a.with(a.algebra->model.brace(a.value, raw));
           },
           py::arg("args"), "Weighted brace x{y_1,...,y_n}_{r_1,...,r_n} from (element, weight) pairs.")
      .def("d", [](const Element& a) { return a.with(differentiate(a.value)); })
      .def_property_readonly("degree", [](const Element& a) { return a.value.degree(); })
      .def_property_readonly("weight", [](const Element& a) { return a.value.weight(); })
      .def("to_json", [](const Element& a) { return from_json(a.value.to_json()); });

  m.def("circ", [](const Element& a, const Element& mu) { return a.with(circ(a.algebra->model, a.value, a.same(mu))); },
        py::arg("a"), py::arg("mu"), "a (.) (1 + mu).");
  m.def("gauge_product", [](const Element& mu, const Element& nu) {
    return mu.with(gauge_product(mu.algebra->model, mu.value, mu.same(nu)));
  }, "mu with (1 + mu) (.) (1 + nu) = 1 + result.");
  m.def("gauge_inverse", [](const Element& mu) { return mu.with(gauge_inverse(mu.algebra->model, mu.value)); });
  m.def("gauge_act", [](const Element& mu, const Element& alpha) {
    return mu.with(gauge_act(mu.algebra->model, mu.value, mu.same(alpha)));
  }, py::arg("mu"), py::arg("alpha"), "Action of 1 + mu on a Maurer-Cartan element.");
  m.def("is_mc", [](const Element& alpha) { return is_mc(alpha.algebra->model, alpha.value); });

  m.def("run",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = cli::run(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command-line invocation in-process; returns (exit code, stdout, stderr).");
}
