#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pgcl/codec.hpp"
#include "pgcl/explorer.hpp"
#include "pgcl/parser.hpp"
#include "pgcl/printer.hpp"
#include "pgcl/reductions.hpp"
#include "pgcl/sampler.hpp"

namespace py = pybind11;
using namespace pgcl;

namespace {

// Python-side handle on an immutable program.
struct ProgramRef {
  Program p;
  operator const Program&() const { return p; }
};

// Exact values cross the boundary as int and fractions.Fraction.

py::object to_py(const Natural& n) { return py::int_(py::str(n.get_str())); }

py::object to_py(const Rational& q) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(to_py(Natural(q.get_num())), to_py(Natural(q.get_den())));
}

// Accepts int, Fraction, str ("3/4", "0.5") and float (via its repr).
Rational rational_arg(const py::handle& value) {
  return parse_rational(std::string(py::str(value)));
}

Natural natural_arg(const py::handle& value) { return Natural(std::string(py::str(value))); }

py::dict valuation_dict(const Valuation& env) {
  py::dict d;
  for (const auto& [name, value] : env.entries()) d[py::str(name)] = to_py(value);
  return d;
}

py::object outcome_dict(const StepOutcome& o) {
  if (!o) return py::none();
  py::dict d;
  d["terminated"] = o->terminated();
  d["control"] = pretty_print(o->control);
  d["env"] = valuation_dict(o->env);
  d["prob"] = to_py(o->prob);
  d["trace"] = o->trace.str();
  return d;
}

py::dict report_dict(const BoundReport& r) {
  py::dict expectation;
  for (const auto& [v, value] : r.expectation_mass) expectation[py::str(v)] = to_py(value);
  const Coverage& c = r.budget_used;
  py::dict used;
  used["nodes_expanded"] = c.nodes_expanded;
  used["complete_depth"] = c.complete_depth ? py::cast(*c.complete_depth) : py::none();
  used["exhausted"] = c.exhausted;
  used["max_trace_index"] = to_py(c.max_trace_index);
  used["max_terminal_depth"] = c.max_terminal_depth;
  used["matched"] = c.matched ? py::object(py::make_tuple(to_py(c.matched->y1), c.matched->y2)) : py::none();
  py::dict d;
  d["terminated_mass"] = to_py(r.terminated_mass);
  d["live_mass"] = to_py(r.live_mass);
  d["divergent_mass"] = to_py(r.divergent_mass);
  d["expectation_mass"] = expectation;
  d["budget_used"] = used;
  return d;
}

Budget budget_arg(std::optional<std::uint64_t> nodes, std::optional<std::uint64_t> y1,
                  std::optional<std::uint64_t> y2) {
  if (y1 || y2) {
    if (nodes || !y1 || !y2) throw Error("give either nodes or both y1 and y2");
    return SumBounds{*y1, *y2};
  }
  return NodeBudget{nodes.value_or(10000)};
}

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["ci_halfwidth"] = e.ci_halfwidth;
  d["timeout_fraction"] = e.timeout_fraction;
  d["n"] = e.n;
  d["rng"] = std::string(kRngAlgorithm);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact interpreter and analyser for a probabilistic guarded-command language";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<SyntaxError>(m, "ParseError", error);
  py::register_exception<ProbabilityRangeError>(m, "ProbabilityRangeError", error);
  py::register_exception<NotOrdinaryError>(m, "NotOrdinaryError", error);
  py::register_exception<ReservedVarClashError>(m, "ReservedVarClashError", error);
  py::register_exception<DeltaNonPositiveError>(m, "DeltaNonPositiveError", error);
  py::register_exception<CodecError>(m, "CodecError", error);

  py::class_<ProgramRef>(m, "Program")
      .def("__str__", [](const ProgramRef& p) { return pretty_print(p); })
      .def("__repr__", [](const ProgramRef& p) { return "Program(" + py::repr(py::str(pretty_print(p))).cast<std::string>() + ")"; })
      .def("__eq__", [](const ProgramRef& a, const ProgramRef& b) { return equal(a, b); })
      .def("__hash__", [](const ProgramRef& p) { return hash_value(p); })
      .def("pretty", [](const ProgramRef& p, bool indent) {
        return pretty_print(p, indent ? Layout::Indented : Layout::SingleLine);
      }, py::arg("indent") = false)
      .def_property_readonly("is_ordinary", [](const ProgramRef& p) { return is_ordinary(p); })
      .def_property_readonly("vars", [](const ProgramRef& p) { return vars_of(p); })
      .def_property_readonly("choices", [](const ProgramRef& p) { return count_choices(p); });

  m.def("parse", [](const std::string& text) { return ProgramRef{parse(text)}; }, py::arg("text"));

  m.def("run", [](const ProgramRef& p, std::uint64_t steps, const std::string& choices) {
    return outcome_dict(run(initial_state(p), steps, ChoiceString(choices)));
  }, py::arg("program"), py::arg("steps"), py::arg("choices") = "",
        "State after exactly `steps` inferences resolving choices by `choices`; None if there is none.");

  m.def("expected_partial", [](const ProgramRef& p, const Var& v, std::uint64_t y1, std::uint64_t y2) {
    Rational r;
    {
      py::gil_scoped_release release;
      r = expected_partial(p, v, y1, y2);
    }
    return to_py(r);
  }, py::arg("program"), py::arg("var"), py::arg("y1"), py::arg("y2"));

  m.def("termination_partial", [](const ProgramRef& p, std::uint64_t y1, std::uint64_t y2) {
    return to_py(termination_partial(p, y1, y2));
  }, py::arg("program"), py::arg("y1"), py::arg("y2"));

  m.def("explore", [](const ProgramRef& p, const std::vector<Var>& vars, std::uint64_t nodes,
                      std::optional<std::uint64_t> max_depth, bool certify, unsigned workers) {
    ExploreOptions o;
    o.node_budget = nodes;
    o.max_depth = max_depth;
    o.certify_divergence = certify;
    o.workers = workers;
    BoundReport r;
    {
      py::gil_scoped_release release;
      r = explore(p, vars, o);
    }
    return report_dict(r);
  }, py::arg("program"), py::arg("vars") = std::vector<Var>{}, py::arg("nodes") = 10000,
        py::arg("max_depth") = py::none(), py::arg("certify_divergence") = false, py::arg("workers") = 1);

  m.def("lexp", [](const ProgramRef& p, const Var& v, const py::object& q, std::optional<std::uint64_t> nodes,
                   std::optional<std::uint64_t> y1, std::optional<std::uint64_t> y2) {
    LexpVerdict verdict = lexp_semidecide(p, v, rational_arg(q), budget_arg(nodes, y1, y2));
    py::dict d;
    if (const auto* w = std::get_if<LexpWitness>(&verdict)) {
      d["verdict"] = "witness";
      d["witness"] = py::make_tuple(to_py(w->y1), w->y2);
      d["sum"] = to_py(w->partial_sum);
    } else {
      d["verdict"] = "unknown";
      d["best_sum"] = to_py(std::get<LexpUnknown>(verdict).best_sum);
    }
    return d;
  }, py::arg("program"), py::arg("var"), py::arg("q"), py::arg("nodes") = py::none(),
        py::arg("y1") = py::none(), py::arg("y2") = py::none());

  m.def("refute_uexp", [](const ProgramRef& p, const Var& v, const py::object& q, const py::object& delta,
                          std::optional<std::uint64_t> nodes, std::optional<std::uint64_t> y1,
                          std::optional<std::uint64_t> y2) {
    UexpVerdict verdict = uexp_refute(p, v, rational_arg(q), rational_arg(delta), budget_arg(nodes, y1, y2));
    py::dict d;
    if (const auto* r = std::get_if<UexpRefuted>(&verdict)) {
      d["verdict"] = "refuted";
      d["witness"] = py::make_tuple(to_py(r->y1), r->y2);
      d["sum"] = to_py(r->partial_sum);
    } else {
      d["verdict"] = "not_refuted";
      d["best_sum"] = to_py(std::get<UexpNotRefuted>(verdict).best_sum);
    }
    return d;
  }, py::arg("program"), py::arg("var"), py::arg("q"), py::arg("delta"), py::arg("nodes") = py::none(),
        py::arg("y1") = py::none(), py::arg("y2") = py::none());

  m.def("sample", [](const ProgramRef& p, std::optional<Var> v, std::uint64_t n, std::uint64_t seed,
                     std::uint64_t fuel, unsigned workers) {
    SampleConfig cfg{n, seed, fuel, workers};
    Estimate e;
    {
      py::gil_scoped_release release;
      e = v ? estimate_expectation(p, *v, cfg) : estimate_termination(p, cfg);
    }
    return estimate_dict(e);
  }, py::arg("program"), py::arg("var") = py::none(), py::arg("n") = 1000, py::arg("seed") = 0,
        py::arg("fuel") = 10000, py::arg("workers") = 1);

  m.def("reduce", [](const std::string& kind, const ProgramRef& q) {
    ReductionOutput r = reduce(parse_reduction_kind(kind), q.p);
    py::dict d;
    d["program"] = ProgramRef{r.program};
    d["var"] = r.target_var ? py::cast(*r.target_var) : py::none();
    d["value"] = r.target_value ? to_py(*r.target_value) : py::none();
    d["kind"] = to_string(r.kind);
    d["source_hash"] = r.source_hash;
    return d;
  }, py::arg("kind"), py::arg("program"));

  m.def("cantor_pair", [](const py::object& a, const py::object& b) {
    return to_py(cantor_pair(natural_arg(a), natural_arg(b)));
  });
  m.def("cantor_unpair", [](const py::object& n) {
    auto [a, b] = cantor_unpair(natural_arg(n));
    return py::make_tuple(to_py(a), to_py(b));
  });
  m.def("nat_to_rat", [](const py::object& n) { return to_py(nat_to_rat(natural_arg(n))); });
  m.def("rat_to_nat", [](const py::object& q) { return to_py(rat_to_nat(rational_arg(q))); });
  m.def("g_decode", [](const std::vector<Var>& vars, const py::object& i) {
    return valuation_dict(g_decode(InputCodec{vars}, natural_arg(i)));
  }, py::arg("vars"), py::arg("index"));
}
