#include "binet/core.hpp"
#include "binet/dot.hpp"
#include "binet/engine.hpp"
#include "binet/rho.hpp"
#include "binet/rules.hpp"
#include "binet/syntax.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace binet;

namespace {

Strategy make_strategy(const std::string &kind, std::uint64_t seed, bool maximal,
                       const std::map<std::string, int> &priorities) {
    Strategy s;
    s.kind = parse_strategy_kind(kind);
    s.seed = seed;
    s.maximal = maximal;
    s.priorities = priorities;
    return s;
}

} // namespace

PYBIND11_MODULE(_binet, m) {
    m.doc() = "Bigraphical nets: parsing, matching and reduction";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvalidBinet>(m, "InvalidBinet", PyExc_ValueError);
    py::register_exception<RhoCompileError>(m, "RhoCompileError", PyExc_ValueError);
    py::register_exception<ConflictDetected>(m, "ConflictDetected", PyExc_RuntimeError);

    py::class_<Binet>(m, "Binet")
        .def(py::init<>())
        .def_static(
            "parse",
            [](const std::string &text, bool allow_reserved) {
                return parse_binet(text, ParseOptions{allow_reserved});
            },
            py::arg("text"), py::arg("allow_reserved_labels") = false)
        .def("__str__", [](const Binet &b) { return print_binet(b); })
        .def("__repr__", [](const Binet &b) {
            return "<Binet with " + std::to_string(b.agents.size()) + " top-level agents>";
        })
        .def("__len__", [](const Binet &b) { return b.agents.size(); })
        .def_property_readonly("wire_count", [](const Binet &b) { return b.wires.size(); })
        .def("interface", [](const Binet &b) { return interface(b); })
        .def("validate",
             [](const Binet &b) {
                 std::vector<std::tuple<std::string, std::string, std::string>> out;
                 for (const auto &v : validate(b))
                     out.emplace_back(to_string(v.kind), v.subject, v.message);
                 return out;
             })
        .def("is_isomorphic", [](const Binet &a, const Binet &b) { return iso(a, b); })
        .def("tidy", [](const Binet &b) { return tidy(b); })
        .def("to_dot", [](const Binet &b) { return export_dot(b); });

    py::class_<RuleSet>(m, "RuleSet")
        .def_static("parse", [](const std::string &text) { return parse_rules(text); })
        .def_static(
            "rho",
            [](bool naive) { return rho_rules(naive ? EpsilonVariant::Naive : EpsilonVariant::Optimized); },
            py::arg("naive_eps") = false)
        .def("__len__", &RuleSet::size)
        .def_property_readonly("ids", [](const RuleSet &rs) {
            std::vector<std::string> out;
            for (const auto &r : rs.rules())
                out.push_back(r.id);
            return out;
        });

    py::class_<ReductionTrace>(m, "Trace")
        .def_readonly("snapshots", &ReductionTrace::snapshots)
        .def_readonly("interactions", &ReductionTrace::interactions)
        .def_readonly("stuck", &ReductionTrace::stuck)
        .def_property_readonly("final", &ReductionTrace::final_binet)
        .def_property_readonly("termination", [](const ReductionTrace &t) { return to_string(t.termination); })
        .def_property_readonly("passes", [](const ReductionTrace &t) {
            std::vector<std::vector<std::string>> out;
            for (const auto &p : t.passes) {
                out.emplace_back();
                for (const auto &f : p.fired)
                    out.back().push_back(f.rule);
            }
            return out;
        });

    m.def("compile_rho",
          [](const std::string &text) {
              auto c = compile_rho(parse_rho(text));
              return py::make_tuple(c.net, c.output);
          },
          py::arg("term"), "Compile a rho term; returns (binet, output label).");

    m.def("normalize_rho", [](const std::string &text) { return print_rho(parse_rho(text)); },
          py::arg("term"));

    m.def("active_pairs",
          [](const Binet &net, const RuleSet &rules) {
              auto c = collect(net, rules);
              return py::make_tuple(c.active, c.stuck, c.inactive_count());
          },
          py::arg("binet"), py::arg("rules"),
          "Returns (active labels, stuck labels, number of inactive redexes).");

    m.def(
        "reduce",
        [](const Binet &net, const RuleSet &rules, const std::string &strategy, std::uint64_t seed,
           bool maximal, const std::map<std::string, int> &priorities, std::size_t max_passes,
           std::size_t max_steps, unsigned threads) {
            ReduceOptions opts;
            opts.limits.max_passes = max_passes;
            opts.limits.max_steps = max_steps;
            opts.threads = threads;
            Strategy s = make_strategy(strategy, seed, maximal, priorities);
            py::gil_scoped_release release;
            return reduce(net, rules, s, opts);
        },
        py::arg("binet"), py::arg("rules"), py::arg("strategy") = "deterministic",
        py::arg("seed") = 0, py::arg("maximal") = true,
        py::arg("priorities") = std::map<std::string, int>{}, py::arg("max_passes") = Limits{}.max_passes,
        py::arg("max_steps") = Limits{}.max_steps, py::arg("threads") = 1);
}
