// Python bindings for the main operations: axiom checking, truncated
// cyclic-word homology, Möbius graph combinatorics, and surface-category
// words. Categories, graphs, and words travel as files or JSON text in the
// shared format; rationals cross the boundary as strings "p/q".

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "klein/ainfinity.hpp"
#include "klein/examples.hpp"
#include "klein/graphs.hpp"
#include "klein/hochschild.hpp"
#include "klein/io.hpp"
#include "klein/surface.hpp"

namespace py = pybind11;
using namespace klein;

namespace {

py::dict report_to_dict(const Report& r) {
  py::dict d;
  d["pass"] = r.pass;
  py::list v;
  for (const auto& viol : r.violations) v.append(py::make_tuple(viol.rule, viol.detail));
  d["violations"] = v;
  return d;
}

ExampleCategory load_cat(const std::string& path) { return io::load_category(path); }

py::dict check_category(const std::string& path) {
  ExampleCategory ex = load_cat(path);
  py::dict out;
  out["name"] = ex.name;
  out["dg_axioms"] = report_to_dict(check_dg_axioms(ex.cat));
  out["involution_axioms"] = report_to_dict(check_involution_axioms(ex.cat));
  AInfinityCategory ai = from_dg(ex.cat);
  out["product_relations"] = report_to_dict(check_ainfty_relations(ai));
  out["involution_compatibility"] = report_to_dict(check_involution_compatibility(ai));
  if (ex.cy) out["calabi_yau"] = report_to_dict(check_calabi_yau(ai, *ex.cy));
  return out;
}

TruncatedComplex build_variant(const InvolutiveCategory& c, std::size_t trunc,
                               const std::string& variant) {
  if (variant == "ordinary") return build_ordinary(c, trunc);
  if (variant == "involutive") return build_involutive(c, trunc);
  if (variant == "normalized") return build_normalized_involutive(c, trunc);
  throw std::invalid_argument("variant must be ordinary, involutive, or normalized");
}

py::list homology_table(const std::string& path, std::size_t trunc, const std::string& variant) {
  ExampleCategory ex = load_cat(path);
  TruncatedComplex tc = build_variant(ex.cat, trunc, variant);
  py::list rows;
  for (const auto& r : homology(tc, trunc >= 2 ? trunc - 2 : 0)) {
    py::dict d;
    d["degree"] = r.degree;
    d["chain_dim"] = r.chain_dim;
    d["homology_dim"] = r.homology_dim;
    d["reliable"] = r.reliable;
    rows.append(d);
  }
  return rows;
}

bool closed_state_equals_normalized(const std::string& path, std::size_t trunc) {
  ExampleCategory ex = load_cat(path);
  TruncatedComplex cs = closed_state_complex(ex.cat, trunc);
  TruncatedComplex hh = build_normalized_involutive(ex.cat, trunc);
  return cs.complex.dims == hh.complex.dims &&
         cs.complex.differentials == hh.complex.differentials;
}

py::tuple graph_type(const std::string& path) {
  TopologicalType t = thicken_type(io::load_graph(path));
  return py::make_tuple(t.g, t.u, t.h);
}

py::list evaluate_word(const std::string& word_path, const std::string& category_path) {
  MorphismWord w = io::load_word(word_path);
  ExampleCategory ex = load_cat(category_path);
  if (!ex.cy) throw std::runtime_error("TraceRequired: the category file carries no trace");
  SparseMatrix m = evaluate(w, from_dg(ex.cat), *ex.cy);
  py::list out;
  for (const auto& [rc, v] : m.entries())
    out.append(py::make_tuple(rc.first, rc.second, rational_to_string(v)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_klein, m) {
  m.doc() = "Involutive-category, Möbius-graph, and surface-word workbench";

  m.def("bundled_example_names", [] {
    std::vector<std::string> names;
    for (const auto& ex : bundled_examples()) names.push_back(ex.name);
    return names;
  });
  m.def("check_category", &check_category, py::arg("path"),
        "Run every axiom suite on a category file; returns one report per suite.");
  m.def("homology_table", &homology_table, py::arg("path"), py::arg("trunc"),
        py::arg("variant") = "ordinary",
        "Per-degree homology of the truncated cyclic-word complex of a category file.");
  m.def("closed_state_equals_normalized", &closed_state_equals_normalized, py::arg("path"),
        py::arg("trunc"),
        "Whether the closed-state complex matches the normalized involutive complex.");

  m.def("graph_type", &graph_type, py::arg("path"),
        "Topological type (handles, crosscaps, boundary components) of a graph file.");
  m.def(
      "graphs_isomorphic",
      [](const std::string& p1, const std::string& p2) {
        return is_isomorphic(io::load_graph(p1), io::load_graph(p2));
      },
      py::arg("path1"), py::arg("path2"));
  m.def(
      "reduce_graph",
      [](const std::string& path) { return io::graph_to_json(reduce(io::load_graph(path))); },
      py::arg("path"), "Fully reduced graph, as JSON text.");
  m.def("moduli_nonempty", &is_moduli_nonempty, py::arg("g"), py::arg("u"), py::arg("h"),
        py::arg("n"));

  m.def(
      "normalize_word",
      [](const std::string& path) { return io::render_word(normalize(io::load_word(path))); },
      py::arg("path"), "Normal form of a surface-category word, rendered as text.");
  m.def(
      "differential_word",
      [](const std::string& path) { return io::render_word(differential(io::load_word(path))); },
      py::arg("path"), "Differential of a surface-category word, rendered as text.");
  m.def("evaluate_word", &evaluate_word, py::arg("word_path"), py::arg("category_path"),
        "Matrix of a word in a category with trace, as (row, col, \"p/q\") triplets.");
}
